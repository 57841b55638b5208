#include "solvcheck/random_case.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace solvcheck {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Complex random_phasor(Rng& rng, double max_abs) {
    const double magnitude = max_abs * std::sqrt(uniform(rng, 0.0, 1.0));
    return std::polar(magnitude, uniform(rng, -std::numbers::pi, std::numbers::pi));
}

Complex random_impedance(Rng& rng) { return {uniform(rng, 0.01, 0.1), uniform(rng, 0.01, 0.2)}; }

}  // namespace

CVector random_currents(Index n, Rng& rng, double scale) {
    CVector out(n);
    for (Index k = 0; k < n; ++k) {
        out(k) = random_phasor(rng, scale);
    }
    return out;
}

NetworkCase random_case(Rng& rng, const RandomCaseOptions& options) {
    if (options.n_min < 1 || options.n_max < options.n_min) {
        throw std::invalid_argument("random case needs 1 <= n_min <= n_max");
    }
    const int n_power = uniform_int(rng, options.n_min, options.n_max);
    const int n_current = options.current_buses_max > 0 ? uniform_int(rng, 0, options.current_buses_max) : 0;
    const int n_tie = options.tie_buses_max > 0 ? uniform_int(rng, 0, options.tie_buses_max) : 0;

    NetworkCase net_case;
    net_case.slack_voltage = std::polar(uniform(rng, 0.98, 1.05), uniform(rng, -0.1, 0.1));
    net_case.buses.push_back(Bus{1, BusKind::slack, {}, {}, {}});

    std::vector<BusKind> kinds;
    for (int k = 0; k < n_power; ++k) {
        kinds.push_back(uniform(rng, 0.0, 1.0) < 0.8 ? BusKind::pq_load : BusKind::pq_dg);
    }
    kinds.insert(kinds.end(), static_cast<std::size_t>(n_current), BusKind::ci_dg);
    kinds.insert(kinds.end(), static_cast<std::size_t>(n_tie), BusKind::tie);
    std::shuffle(kinds.begin(), kinds.end(), rng);

    int id = 2;
    for (BusKind kind : kinds) {
        Bus bus{id++, kind, {}, {}, {}};
        if (options.shunts && kind != BusKind::tie) {
            bus.shunt = {0.0, uniform(rng, 0.0, 0.02)};
        }
        switch (kind) {
            case BusKind::pq_load: {
                const double p = uniform(rng, 0.2, 1.0) * options.load_max;
                const double q = p * uniform(rng, -0.2, 0.6);
                bus.s_base = -Complex{p, q};
                break;
            }
            case BusKind::pq_dg: bus.s_base = {uniform(rng, 0.1, 0.6) * options.load_max, 0.0}; break;
            case BusKind::ci_dg: bus.i_base = random_phasor(rng, 0.5 * options.load_max); break;
            default: break;
        }
        net_case.buses.push_back(bus);
    }

    const int total = static_cast<int>(net_case.buses.size());
    for (int k = 1; k < total; ++k) {
        const int parent = uniform_int(rng, 0, k - 1);
        net_case.branches.push_back(Branch{net_case.buses[static_cast<std::size_t>(parent)].id,
                                           net_case.buses[static_cast<std::size_t>(k)].id, random_impedance(rng)});
    }
    for (int k = 2; k < total; ++k) {
        if (uniform(rng, 0.0, 1.0) < options.extra_edge_prob) {
            int other = uniform_int(rng, 0, total - 2);
            other += other >= k ? 1 : 0;
            net_case.branches.push_back(Branch{net_case.buses[static_cast<std::size_t>(k)].id,
                                               net_case.buses[static_cast<std::size_t>(other)].id,
                                               random_impedance(rng)});
        }
    }
    validate(net_case);
    return net_case;
}

Snapshot random_snapshot(const ReducedNetwork& net, Rng& rng, double current_scale) {
    const CVector current_injection = random_currents(net.n_current(), rng, 0.1 * current_scale);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const CVector current = random_currents(net.n_power(), rng, current_scale);
        Snapshot snap = snapshot_from_currents(net, current, current_injection);
        if (snap.n() == 0 || snap.v.cwiseAbs().minCoeff() > 0.05) {
            snap.converged = true;
            return snap;
        }
        current_scale *= 0.8;
    }
    throw Error("could not draw a snapshot with nonzero voltages");
}

}  // namespace solvcheck
