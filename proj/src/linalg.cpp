#include "solvcheck/linalg.hpp"

#include <cmath>
#include <limits>

namespace solvcheck {

namespace {

template <typename Matrix>
Determinant lu_determinant(const Matrix& m) {
    if (m.rows() == 0) {
        return {};
    }
    Eigen::PartialPivLU<Matrix> lu(m);
    const auto& packed = lu.matrixLU();
    Determinant det;
    det.phase = static_cast<double>(lu.permutationP().determinant());
    for (Index k = 0; k < packed.rows(); ++k) {
        const Complex pivot = packed(k, k);
        const double mag = std::abs(pivot);
        if (mag == 0.0 || !std::isfinite(mag)) {
            return {-std::numeric_limits<double>::infinity(), Complex{}};
        }
        det.log_abs += std::log(mag);
        det.phase *= pivot / mag;
    }
    // Renormalise accumulated rounding in the unit phase.
    det.phase /= std::abs(det.phase);
    return det;
}

}  // namespace

Complex Determinant::value() const { return singular() ? Complex{} : phase * std::exp(log_abs); }

double Determinant::relative_deviation(const Determinant& a, const Determinant& b) {
    if (b.singular()) {
        return a.singular() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::abs(ratio(a, b) - 1.0);
}

Complex Determinant::ratio(const Determinant& a, const Determinant& b) {
    if (b.singular()) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    if (a.singular()) {
        return {};
    }
    return a.phase / b.phase * std::exp(a.log_abs - b.log_abs);
}

Determinant determinant(const CMatrix& m) { return lu_determinant(m); }
Determinant determinant(const RMatrix& m) { return lu_determinant(m); }

double min_singular_value(const RMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    // Divide and conquer; falls back to Jacobi sweeps for small blocks.
    Eigen::BDCSVD<RMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

double condition_estimate(const RMatrix& m) {
    Eigen::PartialPivLU<RMatrix> lu(m);
    const double rcond = lu.rcond();
    return rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

CMatrix checked_inverse(const CMatrix& m, const char* what) {
    Eigen::FullPivLU<CMatrix> lu(m);
    if (!lu.isInvertible()) {
        throw DegenerateNetwork(what);
    }
    return lu.inverse();
}

}  // namespace solvcheck
