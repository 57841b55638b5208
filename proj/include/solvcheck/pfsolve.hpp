#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "solvcheck/netmodel.hpp"

namespace solvcheck {

/// Load-side injections in the network's current polarity: quantities are
/// measured flowing out of the network into the bus devices, so a load draws
/// positive power and a generator negative. Case files use the opposite
/// (generation-positive) sign; see injections_from_case().
struct Injections {
    CVector power;    // complex power drawn at each constant-power bus
    CVector current;  // fixed current drawn at each constant-current bus
    double loading = 1.0;
};

/// Base-case injections of `net_case` mapped onto the bus order of `net`.
Injections injections_from_case(const NetworkCase& net_case, const ReducedNetwork& net);

/// One power-flow operating point over the constant-power buses.
struct Snapshot {
    CVector v;  // bus voltage
    CVector i;  // current drawn out of the network
    CVector s;  // power drawn; the solve target for solver output
    CVector current_injection;  // fixed currents of constant-current buses
    CVector current_bus_voltage;
    double loading = 1.0;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;

    Index n() const { return v.size(); }
};

enum class DivergenceReason { max_iter, singular_jacobian, voltage_collapse_to_zero, line_search_failed };

std::string_view to_string(DivergenceReason reason);

struct Divergence {
    DivergenceReason reason = DivergenceReason::max_iter;
    int iterations = 0;
    double residual = 0.0;
    double loading = 1.0;
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 50;
    /// Previous operating point to start from; flat start when null.
    const Snapshot* warm_start = nullptr;
    double max_condition = 1e12;
    int max_halvings = 10;
};

using SolveResult = std::variant<Snapshot, Divergence>;

/// Damped Newton iteration on the real and imaginary parts of the
/// constant-power bus currents. Constant-current buses enter through the
/// shifted equivalent source E' = E_p - Z_pc I_c.
SolveResult solve(const ReducedNetwork& net, const Injections& injections, const SolveOptions& options = {});

/// Builds the snapshot implied by a current vector (no iteration). Useful to
/// construct operating points analytically.
Snapshot snapshot_from_currents(const ReducedNetwork& net, const CVector& current, const CVector& current_injection,
                                double loading = 1.0);

/// max_h |S_h - conj(I_h) (E'_h - (Z I)_h)| over constant-power buses, with
/// S_h taken from the snapshot. The stored V is held to the same test.
double residual(const ReducedNetwork& net, const Snapshot& snapshot);

inline bool converged(const SolveResult& result) { return std::holds_alternative<Snapshot>(result); }

}  // namespace solvcheck
