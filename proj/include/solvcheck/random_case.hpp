#pragma once

#include <cstdint>
#include <random>

#include "solvcheck/pfsolve.hpp"

namespace solvcheck {

using Rng = std::mt19937_64;

struct RandomCaseOptions {
    int n_min = 2;  // constant-power buses
    int n_max = 8;
    int current_buses_max = 0;    // extra constant-current DG buses, 0..max
    int tie_buses_max = 0;        // extra zero-injection buses, 0..max
    double extra_edge_prob = 0.3; // chance per bus of one extra branch (meshing)
    bool shunts = false;          // small capacitive shunts on kept buses
    double load_max = 0.1;        // |S| bound for generated injections, pu
};

/// Random connected case with one slack bus (id 1). Branches span a random
/// tree plus a few meshing links; injections stay light so the base case
/// solves from a flat start.
NetworkCase random_case(Rng& rng, const RandomCaseOptions& options = {});

/// Operating point built from random currents with |I_h| <= current_scale.
/// Every voltage is kept away from zero; no iteration involved, so the
/// snapshot is an exact solution of its own power vector.
Snapshot random_snapshot(const ReducedNetwork& net, Rng& rng, double current_scale = 0.5);

/// Random currents for the constant-current buses of `net`.
CVector random_currents(Index n, Rng& rng, double scale);

}  // namespace solvcheck
