#pragma once

#include <string>

#include "solvcheck/netmodel.hpp"
#include "solvcheck/pfsolve.hpp"
#include "solvcheck/random_case.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(SOLVCHECK_FIXTURE_DIR) + "/" + name; }

// Slack (id 1) feeding one constant-power bus (id 2); `injection` is in the
// generation-positive file convention, so a 1 pu load is -1.
inline solvcheck::NetworkCase two_bus(solvcheck::Complex z, solvcheck::Complex injection = -1.0) {
    using namespace solvcheck;
    NetworkCase c;
    c.buses = {Bus{1, BusKind::slack, {}, {}, {}}, Bus{2, BusKind::pq_load, {}, injection, {}}};
    c.branches = {Branch{1, 2, z}};
    return c;
}

inline solvcheck::Snapshot solved(const solvcheck::ReducedNetwork& net, const solvcheck::Injections& inj,
                                  const solvcheck::SolveOptions& options = {}) {
    auto result = solvcheck::solve(net, inj, options);
    if (!solvcheck::converged(result)) {
        throw std::runtime_error("test setup: power flow diverged");
    }
    return std::get<solvcheck::Snapshot>(result);
}

// Two-bus snapshot built directly from the drawn current.
inline solvcheck::Snapshot two_bus_point(const solvcheck::ReducedNetwork& net, solvcheck::Complex current) {
    solvcheck::CVector i(1);
    i << current;
    return solvcheck::snapshot_from_currents(net, i, solvcheck::CVector::Zero(0));
}

inline solvcheck::ReducedNetwork random_network(solvcheck::Rng& rng, int n_min, int n_max, int ci_max = 0,
                                                bool shunts = false) {
    solvcheck::RandomCaseOptions o;
    o.n_min = n_min;
    o.n_max = n_max;
    o.current_buses_max = ci_max;
    o.shunts = shunts;
    return solvcheck::reduce(solvcheck::random_case(rng, o));
}

}  // namespace testing_support
