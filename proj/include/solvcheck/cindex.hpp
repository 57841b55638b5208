#pragma once

#include <span>
#include <vector>

#include "solvcheck/pfsolve.hpp"

namespace solvcheck {

/// Fixed-point solvability bound |V_S|^2 > 4 ||W^-1 Z conj(W)^-1||* ||S||,
/// where ||A||* is the largest Euclidean row norm and ||S|| the Euclidean norm.
struct BolognaniBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

/// Per-bus C-indices and the related diagnostics of one snapshot. Vectors are
/// indexed like the network's constant-power buses.
struct IndexReport {
    std::vector<int> bus_ids;
    std::vector<double> v_abs;
    std::vector<double> denominator;  // sum_i |Z_hi I_i|
    std::vector<double> c;            // +inf when the denominator is zero
    double c_min = 0.0;
    int argmin_bus = -1;
    bool condition_triggered = false;
    BolognaniBound bolognani;
    std::vector<double> kessel_margin;  // |V_h| - |sum_i Z_hi I_i|
};

/// C_h = |V_h| / sum_i |Z_hi I_i| over constant-power buses. Constant-current
/// sources are already inside the shifted equivalent source and are not summed.
IndexReport c_index(const ReducedNetwork& net, const Snapshot& snapshot);

struct NecessaryCondition {
    bool triggered = false;
    std::vector<int> buses;  // ascending by C_h
};

/// exists h with C_h <= 1.
NecessaryCondition necessary_condition(const IndexReport& report);

/// `power` is the constant-power injection vector (either sign convention;
/// only its norm enters). Throws DegenerateNetwork if some W entry is zero.
BolognaniBound bolognani_bound(const ReducedNetwork& net, std::span<const Complex> power);
BolognaniBound bolognani_bound(const ReducedNetwork& net, const CVector& power);

/// ||W^-1 Z conj(W)^-1||*, the network factor of the bound.
double bolognani_network_norm(const ReducedNetwork& net);

std::vector<double> kessel_condition(const ReducedNetwork& net, const Snapshot& snapshot);

/// 1 / max_h |W_hh / V_h|, the voltage factor of the relaxed bound.
double inverse_w_over_v(const ReducedNetwork& net, const Snapshot& snapshot);

/// c_index plus the bound and the Kessel margins in one report.
IndexReport evaluate_indices(const ReducedNetwork& net, const Snapshot& snapshot);

}  // namespace solvcheck
