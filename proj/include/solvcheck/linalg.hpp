#pragma once

#include "solvcheck/types.hpp"

namespace solvcheck {

/// Determinant held as log-magnitude and unit phase so that large Jacobians
/// do not overflow. A singular matrix has log_abs == -inf and phase 0.
struct Determinant {
    double log_abs = 0.0;
    Complex phase{1.0, 0.0};

    bool singular() const { return phase == Complex{}; }
    /// May overflow to inf or underflow to 0 for large matrices.
    Complex value() const;
    /// Relative deviation |a - b| / |b| computed in log space.
    static double relative_deviation(const Determinant& a, const Determinant& b);
    /// a / b as a complex number (finite unless b is singular).
    static Complex ratio(const Determinant& a, const Determinant& b);
};

Determinant determinant(const CMatrix& m);
Determinant determinant(const RMatrix& m);

/// Smallest singular value via a full SVD.
double min_singular_value(const RMatrix& m);

/// 1-norm condition number estimate from a partial-pivot LU.
double condition_estimate(const RMatrix& m);

/// Inverse through a full-pivot LU; throws DegenerateNetwork with `what`
/// if the matrix is numerically singular.
CMatrix checked_inverse(const CMatrix& m, const char* what);

}  // namespace solvcheck
