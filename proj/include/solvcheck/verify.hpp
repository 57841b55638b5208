#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solvcheck/random_case.hpp"

namespace solvcheck {

struct VerifyOptions {
    int n_min = 2;
    int n_max = 8;
    int trials = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
    double det_tol = 1e-8;
    double phase_tol = 1e-6;
    double sigma_floor = 1e-10;
    double fd_step = 1e-5;
    double fd_tol = 1e-6;
};

/// Outcome of one random trial.
struct TrialResult {
    Index n = 0;
    double det_deviation = 0.0;     // |det J^R - det J^Z| / |det J^Z|
    double lemma2_magnitude = 0.0;  // | |det J^Z'| / |det J^Z| - 1 |
    double lemma2_phase = 0.0;      // angle of det J^Z / ((-1)^n det J^Z')
    double c_min = 0.0;
    double sigma_min = 0.0;
    double fd_deviation = 0.0;
};

struct VerifyReport {
    VerifyOptions options;
    std::vector<TrialResult> trials;
    int theorem1_failures = 0;
    int lemma2_failures = 0;
    int theorem2_applicable = 0;       // trials with every C_h > 1
    int theorem2_counterexamples = 0;  // ... whose sigma_min is below the floor
    int wirtinger_failures = 0;

    bool ok() const;
    /// First line reads "theorem1 OK, lemma2 OK" when both identities hold.
    std::string summary() const;
};

TrialResult run_trial(const ReducedNetwork& net, const Snapshot& snapshot, const VerifyOptions& options);

/// Random cases (or random snapshots on `fixed_case` when given). Results
/// are ordered by trial index regardless of `jobs`.
VerifyReport run_verify(const VerifyOptions& options, const std::optional<NetworkCase>& fixed_case = std::nullopt);

}  // namespace solvcheck
