#include "solvcheck/pfsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "solvcheck/wjac.hpp"

namespace solvcheck {

namespace {

constexpr double kCollapseVoltage = 1e-6;

double mismatch(const CVector& target, const CVector& current, const CVector& voltage) {
    if (target.size() == 0) {
        return 0.0;
    }
    return (target - current.conjugate().cwiseProduct(voltage)).cwiseAbs().maxCoeff();
}

}  // namespace

std::string_view to_string(DivergenceReason reason) {
    switch (reason) {
        case DivergenceReason::max_iter: return "max_iter";
        case DivergenceReason::singular_jacobian: return "singular_jacobian";
        case DivergenceReason::voltage_collapse_to_zero: return "voltage_collapse_to_zero";
        case DivergenceReason::line_search_failed: return "line_search_failed";
    }
    return "?";
}

Injections injections_from_case(const NetworkCase& net_case, const ReducedNetwork& net) {
    Injections inj;
    inj.power = CVector::Zero(net.n_power());
    inj.current = CVector::Zero(net.n_current());
    for (Index k = 0; k < net.n_power(); ++k) {
        inj.power(k) = -net_case.find(net.power_bus_ids[static_cast<std::size_t>(k)])->s_base;
    }
    for (Index k = 0; k < net.n_current(); ++k) {
        inj.current(k) = -net_case.find(net.current_bus_ids[static_cast<std::size_t>(k)])->i_base;
    }
    return inj;
}

Snapshot snapshot_from_currents(const ReducedNetwork& net, const CVector& current, const CVector& current_injection,
                                double loading) {
    const Index np = net.n_power();
    const Index nc = net.n_current();
    Snapshot snap;
    snap.i = current;
    snap.current_injection = current_injection;
    snap.v = net.equivalent_source(current_injection) - net.z_power() * current;
    snap.s = current.conjugate().cwiseProduct(snap.v);
    snap.current_bus_voltage = CVector::Zero(nc);
    if (nc > 0) {
        snap.current_bus_voltage = net.e.tail(nc) - net.z.bottomLeftCorner(nc, np) * current -
                                   net.z.bottomRightCorner(nc, nc) * current_injection;
    }
    snap.loading = loading;
    return snap;
}

double residual(const ReducedNetwork& net, const Snapshot& snapshot) {
    const CVector voltage = net.equivalent_source(snapshot.current_injection) - net.z_power() * snapshot.i;
    // The stored voltage must also agree with the stored power, so a snapshot
    // whose V was edited after the fact does not pass as a solution.
    return std::max(mismatch(snapshot.s, snapshot.i, voltage), mismatch(snapshot.s, snapshot.i, snapshot.v));
}

SolveResult solve(const ReducedNetwork& net, const Injections& injections, const SolveOptions& options) {
    if (!(options.tol > 0.0) || options.max_iter < 1) {
        throw std::invalid_argument("solve options require tol > 0 and max_iter >= 1");
    }
    const Index n = net.n_power();
    if (injections.power.size() != n || injections.current.size() != net.n_current()) {
        throw std::invalid_argument(fmt::format("injection sizes ({}, {}) do not match network ({}, {})",
                                                injections.power.size(), injections.current.size(), n,
                                                net.n_current()));
    }
    if (!injections.power.allFinite() || !injections.current.allFinite()) {
        throw std::invalid_argument("injections must be finite");
    }

    const CVector source = net.equivalent_source(injections.current);
    const CMatrix z = net.z_power();
    const CVector& target = injections.power;

    auto diverged = [&](DivergenceReason reason, int iterations, double res) -> SolveResult {
        spdlog::debug("power flow diverged at loading {}: {} after {} iterations (residual {:.3g})",
                      injections.loading, to_string(reason), iterations, res);
        return Divergence{reason, iterations, res, injections.loading};
    };

    CVector current;
    if (options.warm_start != nullptr && options.warm_start->i.size() == n) {
        current = options.warm_start->i;
    } else {
        if (n > 0 && source.cwiseAbs().minCoeff() < kCollapseVoltage) {
            return diverged(DivergenceReason::voltage_collapse_to_zero, 0, std::numeric_limits<double>::infinity());
        }
        current = target.cwiseQuotient(source).conjugate();
    }

    CVector voltage = source - z * current;
    double res = mismatch(target, current, voltage);

    // Newton direction at the current iterate; empty when J^R is too
    // ill-conditioned to trust.
    auto newton_direction = [&]() -> std::optional<CVector> {
        Snapshot point;
        point.v = voltage;
        point.i = current;
        point.current_injection = injections.current;
        Eigen::PartialPivLU<RMatrix> lu(real_jacobian_direct(net, point));
        const double rcond = lu.rcond();
        if (!(rcond > 0.0) || 1.0 / rcond > options.max_condition) {
            return std::nullopt;
        }
        const CVector mis = target - current.conjugate().cwiseProduct(voltage);
        RVector rhs(2 * n);
        rhs << mis.real(), mis.imag();
        const RVector dx = lu.solve(rhs);
        CVector step(n);
        step.real() = dx.head(n);
        step.imag() = dx.tail(n);
        return step;
    };

    // Takes current + alpha * step if that lowers the residual.
    auto try_step = [&](const CVector& step, double alpha) {
        const CVector trial = current + alpha * step;
        const CVector trial_voltage = source - z * trial;
        const double trial_res = mismatch(target, trial, trial_voltage);
        if (!(trial_res < res)) {
            return false;
        }
        current = trial;
        voltage = trial_voltage;
        res = trial_res;
        return true;
    };

    int iteration = 0;
    for (;; ++iteration) {
        if (res < options.tol) {
            break;
        }
        if (iteration >= options.max_iter) {
            return diverged(DivergenceReason::max_iter, iteration, res);
        }
        if (voltage.cwiseAbs().minCoeff() < kCollapseVoltage) {
            return diverged(DivergenceReason::voltage_collapse_to_zero, iteration, res);
        }
        const auto step = newton_direction();
        if (!step) {
            return diverged(DivergenceReason::singular_jacobian, iteration, res);
        }
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= options.max_halvings && !accepted; ++halving, alpha *= 0.5) {
            accepted = try_step(*step, alpha);
        }
        if (!accepted) {
            return diverged(DivergenceReason::line_search_failed, iteration + 1, res);
        }
        spdlog::debug("newton iteration {}: residual {:.3e}", iteration + 1, res);
    }

    // One undamped polishing step: at quadratic convergence it takes the
    // voltages from tol-level to rounding-level accuracy.
    if (res > 0.0 && n > 0) {
        if (const auto step = newton_direction()) {
            try_step(*step, 1.0);
        }
    }

    Snapshot snap = snapshot_from_currents(net, current, injections.current, injections.loading);
    snap.s = target;
    snap.converged = true;
    snap.iterations = iteration;
    snap.residual = res;
    return snap;
}

}  // namespace solvcheck
