#pragma once

#include <optional>
#include <span>
#include <vector>

#include "solvcheck/cindex.hpp"

namespace solvcheck {

enum class DgMode {
    /// Every DG holds its complex power; constant-current sites are converted
    /// at nominal voltage, S = V_S conj(I).
    hold_constant_power,
    /// Constant-current sites keep their declared current.
    hold_constant_current,
};

struct SweepConfig {
    double step = 0.01;
    double max_lambda = 20.0;
    DgMode dg_mode = DgMode::hold_constant_current;
    /// C_min <= 1 + unity_band counts as reaching unity. A converged point at
    /// the nose sits about sqrt(tol) inside the boundary, where C exceeds 1 by
    /// O(sqrt(tol)).
    double unity_band = 1e-3;
    SolveOptions solver;
};

struct SweepRow {
    double lambda = 0.0;
    bool converged = false;
    double c_min = 0.0;
    int c_argmin_bus = -1;
    bool bolognani_ok = false;
    double sigma_min = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::optional<double> lambda_critical;   // last convergent lambda
    std::optional<double> lambda_c_unity;    // first lambda with C_min <= 1 (+ band)
    std::optional<double> lambda_bolognani;  // first lambda violating the fixed-point bound
    std::optional<Snapshot> base;            // operating point at lambda = 1
    std::optional<Snapshot> last;            // operating point at lambda_critical
    bool reached_max_lambda = false;

    /// (lambda_critical - lambda_c_unity) / lambda_critical * 100.
    std::optional<double> mismatch_pct() const;
};

/// Total DG capacity over total base apparent load. Constant-current DGs are
/// rated at nominal voltage, |V_S| |I|.
double penetration(const NetworkCase& net_case);

/// Scales every DG injection so that penetration() equals `fraction`.
NetworkCase with_penetration(const NetworkCase& net_case, double fraction);

/// Multiplies every load injection by `lambda`; DG outputs stay as they are.
NetworkCase with_loading(const NetworkCase& net_case, double lambda);

/// Applies the DG operating mode to the case (see DgMode).
NetworkCase with_dg_mode(const NetworkCase& net_case, DgMode mode);

/// Proportional load sweep from lambda = 1 in steps of `step` until the power
/// flow stops converging. Loads scale, DG outputs stay fixed. Divergence under
/// warm start is re-checked from a flat start. Throws InsolvableCase when the
/// base case does not solve.
SweepReport run_sweep(const NetworkCase& net_case, const SweepConfig& config = {});

struct SensitivityReport {
    std::vector<int> bus_ids;
    std::vector<double> c_before;
    std::vector<double> c_after;
    std::vector<bool> considered;  // buses the expected decrease applies to
    bool all_decreased = false;    // strict decrease on every considered bus

    std::vector<double> delta() const;
};

/// Multiplies every admittance by `scale` in (0, 1] (Z' = Z / scale) and
/// compares C-indices at lambda = 1.
SensitivityReport impedance_sensitivity(const NetworkCase& net_case, double scale,
                                        DgMode mode = DgMode::hold_constant_current);

/// Re-angles every load to the lagging power factor `pf` keeping |S|, then
/// compares C-indices at lambda = 1. Only load buses are considered.
SensitivityReport power_factor_sensitivity(const NetworkCase& net_case, double pf,
                                           DgMode mode = DgMode::hold_constant_current);

/// Linear approximation V_j = V_S (1 + |V_S|^-2 sum_i Z_ji conj(S_i)) with S in
/// the generation-positive convention of case files.
CVector linearized_voltage(const ReducedNetwork& net, std::span<const Complex> injection);
CVector linearized_voltage(const ReducedNetwork& net, const CVector& injection);

}  // namespace solvcheck
