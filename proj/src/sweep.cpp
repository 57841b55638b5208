#include "solvcheck/sweep.hpp"

#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "solvcheck/wjac.hpp"

namespace solvcheck {

namespace {

double dg_capacity(const Bus& bus, Complex slack_voltage) {
    switch (bus.kind) {
        case BusKind::pq_dg: return std::abs(bus.s_base);
        case BusKind::ci_dg: return std::abs(bus.i_base) * std::abs(slack_voltage);
        default: return 0.0;
    }
}

struct PreparedCase {
    ReducedNetwork net;
    Injections base;
    CVector load_part;  // scaled by lambda
    CVector fixed_part;
};

PreparedCase prepare(const NetworkCase& net_case, DgMode mode) {
    const NetworkCase effective = with_dg_mode(net_case, mode);
    PreparedCase prep{reduce(effective), {}, {}, {}};
    prep.base = injections_from_case(effective, prep.net);
    prep.load_part = CVector::Zero(prep.net.n_power());
    prep.fixed_part = prep.base.power;
    for (Index k = 0; k < prep.net.n_power(); ++k) {
        if (effective.find(prep.net.power_bus_ids[static_cast<std::size_t>(k)])->kind == BusKind::pq_load) {
            prep.load_part(k) = prep.base.power(k);
            prep.fixed_part(k) = 0.0;
        }
    }
    return prep;
}

Injections at_loading(const PreparedCase& prep, double lambda) {
    Injections inj = prep.base;
    inj.power = lambda * prep.load_part + prep.fixed_part;
    inj.loading = lambda;
    return inj;
}

Snapshot solve_or_throw(const ReducedNetwork& net, const Injections& inj, const SolveOptions& options,
                        const char* what) {
    auto result = solve(net, inj, options);
    if (auto* div = std::get_if<Divergence>(&result)) {
        throw InsolvableCase(fmt::format("{}: power flow did not converge ({})", what, to_string(div->reason)));
    }
    return std::get<Snapshot>(std::move(result));
}

SensitivityReport compare(const ReducedNetwork& before_net, const Snapshot& before, const ReducedNetwork& after_net,
                          const Snapshot& after, const std::vector<bool>& considered) {
    const auto c_before = c_index(before_net, before);
    const auto c_after = c_index(after_net, after);
    SensitivityReport report;
    report.bus_ids = c_before.bus_ids;
    report.c_before = c_before.c;
    report.c_after = c_after.c;
    report.considered = considered;
    report.all_decreased = true;
    for (std::size_t k = 0; k < report.c_before.size(); ++k) {
        if (considered[k] && !(report.c_after[k] < report.c_before[k])) {
            report.all_decreased = false;
        }
    }
    return report;
}

}  // namespace

std::optional<double> SweepReport::mismatch_pct() const {
    if (!lambda_critical || !lambda_c_unity) {
        return std::nullopt;
    }
    return (*lambda_critical - *lambda_c_unity) / *lambda_critical * 100.0;
}

double penetration(const NetworkCase& net_case) {
    double load = 0.0;
    double capacity = 0.0;
    for (const auto& bus : net_case.buses) {
        if (bus.kind == BusKind::pq_load) {
            load += std::abs(bus.s_base);
        }
        capacity += dg_capacity(bus, net_case.slack_voltage);
    }
    if (load == 0.0) {
        throw ValidationError("penetration undefined: case has no load");
    }
    return capacity / load;
}

NetworkCase with_penetration(const NetworkCase& net_case, double fraction) {
    if (!(fraction >= 0.0)) {
        throw std::invalid_argument("penetration must be non-negative");
    }
    const double current = penetration(net_case);
    if (current == 0.0) {
        if (fraction == 0.0) {
            return net_case;
        }
        throw ValidationError("cannot scale DG penetration: case has no DG capacity");
    }
    const double factor = fraction / current;
    NetworkCase out = net_case;
    for (auto& bus : out.buses) {
        bus.s_base *= bus.kind == BusKind::pq_dg ? factor : 1.0;
        bus.i_base *= bus.kind == BusKind::ci_dg ? factor : 1.0;
    }
    return out;
}

NetworkCase with_loading(const NetworkCase& net_case, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("loading factor must be positive and finite");
    }
    NetworkCase out = net_case;
    for (auto& bus : out.buses) {
        if (bus.kind == BusKind::pq_load) {
            bus.s_base *= lambda;
        }
    }
    return out;
}

NetworkCase with_dg_mode(const NetworkCase& net_case, DgMode mode) {
    if (mode == DgMode::hold_constant_current) {
        return net_case;
    }
    NetworkCase out = net_case;
    for (auto& bus : out.buses) {
        if (bus.kind == BusKind::ci_dg) {
            bus.kind = BusKind::pq_dg;
            bus.s_base = net_case.slack_voltage * std::conj(bus.i_base);
            bus.i_base = {};
        }
    }
    return out;
}

SweepReport run_sweep(const NetworkCase& net_case, const SweepConfig& config) {
    if (!(config.step > 0.0) || !(config.max_lambda > 1.0)) {
        throw std::invalid_argument("sweep requires step > 0 and max_lambda > 1");
    }
    const PreparedCase prep = prepare(net_case, config.dg_mode);
    const double network_norm = bolognani_network_norm(prep.net);
    const double lhs = std::norm(prep.net.slack_voltage);

    SweepReport report;
    std::optional<Snapshot> previous;
    for (long k = 0;; ++k) {
        const double lambda = 1.0 + static_cast<double>(k) * config.step;
        if (lambda > config.max_lambda + 1e-12) {
            report.reached_max_lambda = true;
            break;
        }
        const Injections inj = at_loading(prep, lambda);

        SolveOptions options = config.solver;
        options.warm_start = previous ? &*previous : nullptr;
        auto result = solve(prep.net, inj, options);
        if (!converged(result) && previous) {
            options.warm_start = nullptr;
            result = solve(prep.net, inj, options);
            if (converged(result)) {
                spdlog::debug("loading {}: warm start diverged, flat start converged", lambda);
            }
        }

        SweepRow row;
        row.lambda = lambda;
        row.bolognani_ok = lhs > 4.0 * network_norm * inj.power.norm();
        if (!row.bolognani_ok && !report.lambda_bolognani) {
            report.lambda_bolognani = lambda;
        }

        if (!converged(result)) {
            if (k == 0) {
                throw InsolvableCase(fmt::format("base case is insolvable: power flow did not converge ({})",
                                                 to_string(std::get<Divergence>(result).reason)));
            }
            row.converged = false;
            row.c_min = std::nan("");
            row.sigma_min = std::nan("");
            report.rows.push_back(row);
            break;
        }

        Snapshot snap = std::get<Snapshot>(std::move(result));
        const auto indices = c_index(prep.net, snap);
        row.converged = true;
        row.c_min = indices.c_min;
        row.c_argmin_bus = indices.argmin_bus;
        row.sigma_min = min_singular_value(real_jacobian_direct(prep.net, snap));
        report.rows.push_back(row);

        report.lambda_critical = lambda;
        if (!report.lambda_c_unity && indices.c_min <= 1.0 + config.unity_band) {
            report.lambda_c_unity = lambda;
        }
        if (k == 0) {
            report.base = snap;
        }
        previous = std::move(snap);
    }
    report.last = previous;
    spdlog::debug("sweep finished: {} rows, lambda_critical {}", report.rows.size(),
                 report.lambda_critical.value_or(std::nan("")));
    return report;
}

std::vector<double> SensitivityReport::delta() const {
    std::vector<double> out(c_before.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = c_after[k] - c_before[k];
    }
    return out;
}

SensitivityReport impedance_sensitivity(const NetworkCase& net_case, double scale, DgMode mode) {
    if (!(scale > 0.0 && scale <= 1.0)) {
        throw std::invalid_argument(fmt::format("impedance scale {} outside (0, 1]", scale));
    }
    NetworkCase scaled = net_case;
    for (auto& br : scaled.branches) {
        br.z /= scale;
    }
    for (auto& bus : scaled.buses) {
        bus.shunt *= scale;
    }

    const PreparedCase before = prepare(net_case, mode);
    const PreparedCase after = prepare(scaled, mode);
    const SolveOptions options;
    const Snapshot snap_before = solve_or_throw(before.net, before.base, options, "original case");
    const Snapshot snap_after = solve_or_throw(after.net, after.base, options, "after impedance scaling");
    return compare(before.net, snap_before, after.net, snap_after,
                   std::vector<bool>(static_cast<std::size_t>(before.net.n_power()), true));
}

SensitivityReport power_factor_sensitivity(const NetworkCase& net_case, double pf, DgMode mode) {
    if (!(pf > 0.0 && pf <= 1.0)) {
        throw std::invalid_argument(fmt::format("power factor {} outside (0, 1]", pf));
    }
    NetworkCase reangled = net_case;
    const double sin_phi = std::sqrt(1.0 - pf * pf);
    for (auto& bus : reangled.buses) {
        if (bus.kind != BusKind::pq_load) {
            continue;
        }
        const double magnitude = std::abs(bus.s_base);
        if (magnitude == 0.0) {
            continue;
        }
        const double current_pf = std::abs(bus.s_base.real()) / magnitude;
        if (pf > current_pf + 1e-9) {
            throw std::invalid_argument(
                fmt::format("target power factor {} exceeds the present {:.6g} at bus {}", pf, current_pf, bus.id));
        }
        // Lagging consumption P + jQ, stored as a negative injection.
        bus.s_base = -magnitude * Complex{pf, sin_phi};
    }

    const PreparedCase before = prepare(net_case, mode);
    const PreparedCase after = prepare(reangled, mode);
    const SolveOptions options;
    const Snapshot snap_before = solve_or_throw(before.net, before.base, options, "original case");
    const Snapshot snap_after = solve_or_throw(after.net, after.base, options, "after power-factor change");

    const NetworkCase effective = with_dg_mode(net_case, mode);
    std::vector<bool> is_load;
    for (int id : before.net.power_bus_ids) {
        is_load.push_back(effective.find(id)->kind == BusKind::pq_load);
    }
    return compare(before.net, snap_before, after.net, snap_after, is_load);
}

CVector linearized_voltage(const ReducedNetwork& net, std::span<const Complex> injection) {
    if (static_cast<Index>(injection.size()) != net.n_power()) {
        throw std::invalid_argument("injection vector does not match the network's constant-power buses");
    }
    const Eigen::Map<const CVector> s(injection.data(), static_cast<Index>(injection.size()));
    const CVector relative = net.z_power() * s.conjugate() / std::norm(net.slack_voltage);
    return net.slack_voltage * (CVector::Ones(s.size()) + relative);
}

CVector linearized_voltage(const ReducedNetwork& net, const CVector& injection) {
    return linearized_voltage(net, std::span<const Complex>(injection.data(), static_cast<std::size_t>(injection.size())));
}

}  // namespace solvcheck
