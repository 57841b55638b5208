#pragma once

#include "solvcheck/linalg.hpp"
#include "solvcheck/pfsolve.hpp"

namespace solvcheck {

/// The two independent Wirtinger blocks of the complex Jacobian. The other
/// two are their element-wise conjugates.
struct WirtingerBlocks {
    CMatrix ds_di;       // dS/dI,  entries -Z_hi conj(I_h)
    CMatrix ds_di_conj;  // dS/dI*, diagonal with entries V_h
};

WirtingerBlocks wirtinger_blocks(const ReducedNetwork& net, const Snapshot& snapshot);

/// J^Z = [[dS/dI, dS/dI*], [dS*/dI, dS*/dI*]], size 2n x 2n.
CMatrix build_complex_jacobian(const ReducedNetwork& net, const Snapshot& snapshot);

/// Largest deviation between the analytic Wirtinger blocks and central
/// differences of S over the real and imaginary parts of each current,
/// combined as 1/2 (d/dx -+ j d/dy). Requires h in [1e-7, 1e-4].
double wirtinger_fd_check(const ReducedNetwork& net, const Snapshot& snapshot, double h);

/// The similarity transform T = [[I/2, I/2], [-jI/2, jI/2]] of size 2n.
CMatrix similarity_transform(Index n);

/// J^R = T J^Z T^-1. Throws Error("nonreal J^R") when the imaginary residue
/// exceeds 1e-8 relative to the largest entry.
RMatrix build_real_jacobian(const CMatrix& complex_jacobian);

/// [[dP/dI_D, dP/dI_Q], [dQ/dI_D, dQ/dI_Q]] assembled directly from the
/// rectangular partial derivatives, without passing through J^Z.
RMatrix real_jacobian_direct(const ReducedNetwork& net, const Snapshot& snapshot);

struct DominanceForm {
    CMatrix jzp;  // [[dS/dI*, B], [conj(B), dS*/dI]]
    CMatrix b;    // B_hi = -Z_hi I_i
};

DominanceForm build_dominance_form(const ReducedNetwork& net, const Snapshot& snapshot);

/// Compact n x n view of the dominance form. Off-diagonals are |Z_ij I_j|.
struct FMatrix {
    RMatrix signed_form;  // diagonal |V_i| - |Z_ii I_i|
    RMatrix abs_form;     // diagonal ||V_i| - |Z_ii I_i||, entry-wise || |dS/dI*| - |B| ||

    /// Strict row dominance on the signed form; equivalent to C_i > 1.
    bool row_dominant(Index row) const;
    bool all_rows_dominant() const;
};

FMatrix build_f(const ReducedNetwork& net, const Snapshot& snapshot);

struct SingularityMetrics {
    Determinant det;
    double sigma_min = 0.0;
    double condition = 0.0;
};

SingularityMetrics singularity_metrics(const RMatrix& real_jacobian);

struct JacobianBundle {
    RMatrix jr;
    CMatrix jz;
    CMatrix jzp;
    FMatrix f;
    Determinant det_jr;
    Determinant det_jz;
    Determinant det_jzp;
    double sigma_min = 0.0;
    Index n = 0;
};

JacobianBundle assemble_jacobians(const ReducedNetwork& net, const Snapshot& snapshot);

}  // namespace solvcheck
