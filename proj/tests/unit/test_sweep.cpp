#include <gtest/gtest.h>

#include <cmath>

#include "../oracles/oracles.hpp"
#include "helpers.hpp"
#include "solvcheck/sweep.hpp"

using namespace solvcheck;
using testing_support::fixture;
using testing_support::two_bus;

namespace {

const Complex j{0.0, 1.0};

void expect_report_invariants(const SweepReport& r) {
    ASSERT_FALSE(r.rows.empty());
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
        EXPECT_LT(r.rows[k - 1].lambda, r.rows[k].lambda);
    }
    if (r.lambda_bolognani && r.lambda_c_unity) {
        EXPECT_LE(*r.lambda_bolognani, *r.lambda_c_unity);
    }
    if (r.lambda_c_unity && r.lambda_critical) {
        EXPECT_LE(*r.lambda_c_unity, *r.lambda_critical);
    }
}

// One fixture sweep per mode, shared by the fixture tests below.
const SweepReport& feeder_sweep(DgMode mode) {
    static const auto run = [](DgMode m) {
        SweepConfig config;
        config.dg_mode = m;
        return run_sweep(with_penetration(load_case(fixture("feeder56.json")), 0.4), config);
    };
    static const SweepReport power = run(DgMode::hold_constant_power);
    static const SweepReport current = run(DgMode::hold_constant_current);
    return mode == DgMode::hold_constant_power ? power : current;
}

}  // namespace

TEST(Sweep, TwoBusResistiveNose) {
    const SweepReport r = run_sweep(two_bus(0.1));
    ASSERT_TRUE(r.lambda_critical && r.lambda_c_unity && r.lambda_bolognani);
    EXPECT_NEAR(*r.lambda_critical, oracle::two_bus_nose(0.1, 1.0), 0.01 + 1e-9);
    EXPECT_NEAR(*r.lambda_c_unity, *r.lambda_critical, 1e-12);
    EXPECT_FALSE(r.rows.back().converged);
    EXPECT_TRUE(std::isnan(r.rows.back().c_min));
    EXPECT_FALSE(r.reached_max_lambda);
    expect_report_invariants(r);
}

TEST(Sweep, TwoBusReactiveNose) {
    const SweepReport r = run_sweep(two_bus(0.1 * j));
    ASSERT_TRUE(r.lambda_critical && r.lambda_c_unity && r.lambda_bolognani);
    EXPECT_NEAR(*r.lambda_critical, oracle::two_bus_nose(0.1 * j, 1.0), 0.01 + 1e-9);
    EXPECT_NEAR(*r.lambda_bolognani, 2.5, 0.01 + 1e-9);
    EXPECT_LT(*r.lambda_bolognani, *r.lambda_c_unity);
    expect_report_invariants(r);
}

TEST(Sweep, CIndexAndSigmaFallAlongTwoBusSweep) {
    const SweepReport r = run_sweep(two_bus(0.1));
    for (std::size_t k = 1; k < r.rows.size() && r.rows[k].converged; ++k) {
        EXPECT_LE(r.rows[k].c_min, r.rows[k - 1].c_min);
        EXPECT_LT(r.rows[k].sigma_min, r.rows[k - 1].sigma_min);
    }
}

TEST(Sweep, StopsAtMaxLambda) {
    SweepConfig config;
    config.step = 0.1;
    config.max_lambda = 1.5;
    const SweepReport r = run_sweep(two_bus(0.1), config);
    EXPECT_TRUE(r.reached_max_lambda);
    EXPECT_EQ(r.rows.size(), 6u);
    EXPECT_FALSE(r.lambda_c_unity.has_value());
    EXPECT_FALSE(r.mismatch_pct().has_value());
}

TEST(Sweep, BaseCaseMustSolve) {
    EXPECT_THROW(run_sweep(two_bus(0.1, -3.0)), InsolvableCase);
}

TEST(Sweep, ConfigValidated) {
    SweepConfig config;
    config.step = 0.0;
    EXPECT_THROW(run_sweep(two_bus(0.1), config), std::invalid_argument);
    config = {};
    config.max_lambda = 1.0;
    EXPECT_THROW(run_sweep(two_bus(0.1), config), std::invalid_argument);
}

TEST(Sweep, FeederReportInvariants) {
    for (DgMode mode : {DgMode::hold_constant_power, DgMode::hold_constant_current}) {
        const SweepReport& r = feeder_sweep(mode);
        expect_report_invariants(r);
        ASSERT_TRUE(r.lambda_critical && r.lambda_c_unity && r.lambda_bolognani && r.base && r.last);
        // C_min is non-increasing along the sweep.
        for (std::size_t k = 1; k < r.rows.size() && r.rows[k].converged; ++k) {
            EXPECT_LE(r.rows[k].c_min, r.rows[k - 1].c_min + 1e-12) << "lambda=" << r.rows[k].lambda;
        }
        const SweepRow& last = r.rows[r.rows.size() - 2];
        EXPECT_TRUE(last.converged);
        EXPECT_LE(last.c_min, 1.05);
        EXPECT_GT(r.rows.front().sigma_min, 10.0 * last.sigma_min);
    }
}

TEST(Sweep, ConstantCurrentDgNarrowsTheGap) {
    const auto power = feeder_sweep(DgMode::hold_constant_power).mismatch_pct();
    const auto current = feeder_sweep(DgMode::hold_constant_current).mismatch_pct();
    ASSERT_TRUE(power && current);
    EXPECT_GT(*current, 0.0);
    EXPECT_LE(*current, *power);
}

TEST(Penetration, DefinitionAndScaling) {
    NetworkCase c = two_bus(0.1, Complex(-3.0, -4.0));  // 5 pu apparent load
    c.buses.push_back(Bus{3, BusKind::pq_dg, {}, Complex(0.6, 0.8), {}});
    c.buses.push_back(Bus{4, BusKind::ci_dg, {}, {}, Complex(0.3, 0.4)});
    c.branches.push_back(Branch{2, 3, 0.1});
    c.branches.push_back(Branch{2, 4, 0.1});
    EXPECT_NEAR(penetration(c), (1.0 + 0.5) / 5.0, 1e-14);
    const NetworkCase scaled = with_penetration(c, 0.9);
    EXPECT_NEAR(penetration(scaled), 0.9, 1e-14);
    EXPECT_EQ(scaled.find(2)->s_base, c.find(2)->s_base);
    EXPECT_NEAR(std::arg(scaled.find(3)->s_base), std::arg(c.find(3)->s_base), 1e-14);
    EXPECT_THROW(with_penetration(two_bus(0.1), 0.5), ValidationError);
    EXPECT_THROW(with_penetration(c, -0.1), std::invalid_argument);
}

TEST(Penetration, ConstantPowerModeConvertsCurrentSources) {
    NetworkCase c = two_bus(0.1);
    c.slack_voltage = std::polar(1.02, 0.1);
    c.buses.push_back(Bus{3, BusKind::ci_dg, {}, {}, Complex(0.3, 0.1)});
    c.branches.push_back(Branch{2, 3, 0.1});
    const NetworkCase p = with_dg_mode(c, DgMode::hold_constant_power);
    EXPECT_EQ(p.find(3)->kind, BusKind::pq_dg);
    EXPECT_LT(std::abs(p.find(3)->s_base - c.slack_voltage * std::conj(Complex(0.3, 0.1))), 1e-15);
    EXPECT_NEAR(penetration(p), penetration(c), 1e-14);
    EXPECT_EQ(with_dg_mode(c, DgMode::hold_constant_current), c);
}

TEST(Loading, ScalesLoadsOnly) {
    NetworkCase c = two_bus(0.1, Complex(-1.0, -0.5));
    c.buses.push_back(Bus{3, BusKind::pq_dg, {}, 0.3, {}});
    c.branches.push_back(Branch{2, 3, 0.1});
    const NetworkCase s = with_loading(c, 2.0);
    EXPECT_EQ(s.find(2)->s_base, Complex(-2.0, -1.0));
    EXPECT_EQ(s.find(3)->s_base, Complex(0.3, 0.0));
    EXPECT_THROW(with_loading(c, 0.0), std::invalid_argument);
}

TEST(Sensitivity, UnitScaleChangesNothing) {
    const SensitivityReport r = impedance_sensitivity(two_bus(0.1), 1.0);
    for (double d : r.delta()) {
        EXPECT_EQ(d, 0.0);
    }
    EXPECT_FALSE(r.all_decreased);
}

TEST(Sensitivity, TwoBusHalfAdmittance) {
    const SensitivityReport r = impedance_sensitivity(two_bus(0.1), 0.5);
    EXPECT_NEAR(r.c_before[0], 7.8730, 1e-4);
    const double v = std::abs(oracle::two_bus_voltage(0.2, 1.0));
    EXPECT_NEAR(v, 0.723607, 1e-6);
    EXPECT_NEAR(r.c_after[0], v * v / 0.2, 1e-9);
    EXPECT_NEAR(r.c_after[0], 2.6180, 1e-4);
    EXPECT_TRUE(r.all_decreased);
}

TEST(Sensitivity, ScaleOutOfRange) {
    EXPECT_THROW(impedance_sensitivity(two_bus(0.1), 0.0), std::invalid_argument);
    EXPECT_THROW(impedance_sensitivity(two_bus(0.1), 1.2), std::invalid_argument);
}

TEST(Sensitivity, InsolvableAfterScaling) {
    EXPECT_THROW(impedance_sensitivity(two_bus(0.1, -2.0), 0.5), InsolvableCase);
}

TEST(Sensitivity, UnchangedPowerFactor) {
    const SensitivityReport r = power_factor_sensitivity(two_bus(0.1), 1.0);
    for (double d : r.delta()) {
        EXPECT_NEAR(d, 0.0, 1e-12);
    }
}

TEST(Sensitivity, TwoBusLaggingPowerFactor) {
    // With X/R = 2 the reactive draw dominates the drop and C falls.
    const Complex z(0.05, 0.1);
    const SensitivityReport r = power_factor_sensitivity(two_bus(z), 0.9);
    const Complex s_after = std::polar(1.0, std::acos(0.9));
    const double v_after = std::abs(oracle::two_bus_voltage(z, s_after));
    EXPECT_NEAR(r.c_after[0], v_after * v_after / (std::abs(z) * 1.0), 1e-9);
    EXPECT_LT(r.c_after[0], r.c_before[0]);
    EXPECT_TRUE(r.all_decreased);
}

TEST(Sensitivity, ResistiveLineGainsFromLowerPowerFactor) {
    // Pure R: holding |S| while lowering pf cuts P and with it the drop.
    const SensitivityReport r = power_factor_sensitivity(two_bus(0.1), 0.9);
    const double v_after = std::abs(oracle::two_bus_voltage(0.1, std::polar(1.0, std::acos(0.9))));
    EXPECT_NEAR(r.c_after[0], v_after * v_after / 0.1, 1e-9);
    EXPECT_GT(r.c_after[0], r.c_before[0]);
    EXPECT_FALSE(r.all_decreased);
}

TEST(Sensitivity, PowerFactorCannotRise) {
    EXPECT_THROW(power_factor_sensitivity(two_bus(0.1, Complex(-0.9, -0.4)), 0.95), std::invalid_argument);
    EXPECT_THROW(power_factor_sensitivity(two_bus(0.1), 0.0), std::invalid_argument);
}

TEST(Linearized, ZeroInjectionGivesSlack) {
    Rng rng(2);
    const ReducedNetwork net = testing_support::random_network(rng, 4, 4);
    const CVector v = linearized_voltage(net, CVector::Zero(4));
    for (Index k = 0; k < 4; ++k) {
        EXPECT_LT(std::abs(v(k) - net.slack_voltage), 1e-15);
    }
}

TEST(Linearized, TwoBusPlugIn) {
    const ReducedNetwork net = reduce(two_bus(0.1));
    const CVector v = linearized_voltage(net, CVector::Constant(1, -1.0));
    EXPECT_NEAR(std::abs(v(0) - 0.9), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(oracle::two_bus_voltage(0.1, 1.0)), 0.887298, 1e-6);
}

TEST(Linearized, AccurateUnderLightLoad) {
    Rng rng(19);
    std::uniform_real_distribution<double> level(0.01, 0.1);
    for (int t = 0; t < 50; ++t) {
        NetworkCase c = random_case(rng);
        ReducedNetwork net = reduce(c);
        // Rescale so that the injection vector has Euclidean norm <= 0.1.
        const double factor = level(rng) / injections_from_case(c, net).power.norm();
        for (auto& bus : c.buses) {
            bus.s_base *= factor;
        }
        const Injections inj = injections_from_case(c, net);
        ASSERT_LE(inj.power.norm(), 0.1 + 1e-12);
        const Snapshot s = testing_support::solved(net, inj);
        const CVector approx = linearized_voltage(net, CVector(-inj.power));
        EXPECT_LT((approx - s.v).cwiseAbs().maxCoeff(), 0.01);
    }
}

TEST(Linearized, SizeMismatchRejected) {
    const ReducedNetwork net = reduce(two_bus(0.1));
    EXPECT_THROW(linearized_voltage(net, CVector::Zero(2)), std::invalid_argument);
}
