#include "solvcheck/wjac.hpp"

#include <cmath>

#include <fmt/format.h>

namespace solvcheck {

namespace {

void check_dimensions(const ReducedNetwork& net, const Snapshot& snapshot) {
    if (snapshot.v.size() != net.n_power() || snapshot.i.size() != net.n_power()) {
        throw std::invalid_argument(fmt::format("snapshot covers {} buses, network has {} constant-power buses",
                                                snapshot.v.size(), net.n_power()));
    }
}

CVector power_at(const CMatrix& z, const CVector& source, const CVector& current) {
    return current.conjugate().cwiseProduct(source - z * current);
}

}  // namespace

WirtingerBlocks wirtinger_blocks(const ReducedNetwork& net, const Snapshot& snapshot) {
    check_dimensions(net, snapshot);
    const Index n = net.n_power();
    WirtingerBlocks blocks;
    blocks.ds_di = -(snapshot.i.conjugate().asDiagonal() * net.z_power());
    blocks.ds_di_conj = CMatrix::Zero(n, n);
    blocks.ds_di_conj.diagonal() = snapshot.v;
    return blocks;
}

CMatrix build_complex_jacobian(const ReducedNetwork& net, const Snapshot& snapshot) {
    const auto blocks = wirtinger_blocks(net, snapshot);
    const Index n = net.n_power();
    CMatrix jz(2 * n, 2 * n);
    jz.topLeftCorner(n, n) = blocks.ds_di;
    jz.topRightCorner(n, n) = blocks.ds_di_conj;
    jz.bottomLeftCorner(n, n) = blocks.ds_di_conj.conjugate();
    jz.bottomRightCorner(n, n) = blocks.ds_di.conjugate();
    return jz;
}

double wirtinger_fd_check(const ReducedNetwork& net, const Snapshot& snapshot, double h) {
    if (!(h >= 1e-7 && h <= 1e-4)) {
        throw std::invalid_argument(fmt::format("finite-difference step {} outside [1e-7, 1e-4]", h));
    }
    const auto blocks = wirtinger_blocks(net, snapshot);
    const CMatrix z = net.z_power();
    const CVector source = net.equivalent_source(snapshot.current_injection);
    const Index n = net.n_power();
    const Complex j{0.0, 1.0};

    double deviation = 0.0;
    for (Index col = 0; col < n; ++col) {
        CVector plus = snapshot.i;
        CVector minus = snapshot.i;
        plus(col) += h;
        minus(col) -= h;
        const CVector ds_dx = (power_at(z, source, plus) - power_at(z, source, minus)) / (2.0 * h);
        plus(col) = snapshot.i(col) + j * h;
        minus(col) = snapshot.i(col) - j * h;
        const CVector ds_dy = (power_at(z, source, plus) - power_at(z, source, minus)) / (2.0 * h);

        const CVector d_dz = 0.5 * (ds_dx - j * ds_dy);
        const CVector d_dz_conj = 0.5 * (ds_dx + j * ds_dy);
        deviation = std::max(deviation, (d_dz - blocks.ds_di.col(col)).cwiseAbs().maxCoeff());
        deviation = std::max(deviation, (d_dz_conj - blocks.ds_di_conj.col(col)).cwiseAbs().maxCoeff());
    }
    return deviation;
}

CMatrix similarity_transform(Index n) {
    const Complex half{0.5, 0.0};
    const Complex j_half{0.0, 0.5};
    CMatrix t = CMatrix::Zero(2 * n, 2 * n);
    t.topLeftCorner(n, n).diagonal().setConstant(half);
    t.topRightCorner(n, n).diagonal().setConstant(half);
    t.bottomLeftCorner(n, n).diagonal().setConstant(-j_half);
    t.bottomRightCorner(n, n).diagonal().setConstant(j_half);
    return t;
}

RMatrix build_real_jacobian(const CMatrix& complex_jacobian) {
    if (complex_jacobian.rows() != complex_jacobian.cols() || complex_jacobian.rows() % 2 != 0) {
        throw std::invalid_argument("complex Jacobian must be square with even dimension");
    }
    const Index n = complex_jacobian.rows() / 2;
    // T^-1 = [[I, jI], [I, -jI]].
    CMatrix t_inv = CMatrix::Zero(2 * n, 2 * n);
    t_inv.topLeftCorner(n, n).diagonal().setOnes();
    t_inv.topRightCorner(n, n).diagonal().setConstant(Complex{0.0, 1.0});
    t_inv.bottomLeftCorner(n, n).diagonal().setOnes();
    t_inv.bottomRightCorner(n, n).diagonal().setConstant(Complex{0.0, -1.0});

    const CMatrix product = similarity_transform(n) * complex_jacobian * t_inv;
    const double scale = std::max(1.0, product.cwiseAbs().maxCoeff());
    const double residue = product.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-8 * scale) {
        throw Error(fmt::format("nonreal J^R: imaginary residue {:.3g}", residue));
    }
    return product.real();
}

RMatrix real_jacobian_direct(const ReducedNetwork& net, const Snapshot& snapshot) {
    check_dimensions(net, snapshot);
    const Index n = net.n_power();
    const CMatrix z = net.z_power();
    const Complex j{0.0, 1.0};

    // S_h = conj(I_h) V_h with V = E' - Z I.
    // dS_h/dI_D,i = -conj(I_h) Z_hi + delta_hi V_h
    // dS_h/dI_Q,i = -j conj(I_h) Z_hi - j delta_hi V_h
    CMatrix d_real = -(snapshot.i.conjugate().asDiagonal() * z);
    CMatrix d_imag = j * d_real;
    d_real.diagonal() += snapshot.v;
    d_imag.diagonal() -= j * snapshot.v;

    RMatrix jr(2 * n, 2 * n);
    jr.topLeftCorner(n, n) = d_real.real();
    jr.topRightCorner(n, n) = d_imag.real();
    jr.bottomLeftCorner(n, n) = d_real.imag();
    jr.bottomRightCorner(n, n) = d_imag.imag();
    return jr;
}

DominanceForm build_dominance_form(const ReducedNetwork& net, const Snapshot& snapshot) {
    check_dimensions(net, snapshot);
    const Index n = net.n_power();
    DominanceForm form;
    form.b = -(net.z_power() * snapshot.i.asDiagonal());
    form.jzp = CMatrix::Zero(2 * n, 2 * n);
    form.jzp.topLeftCorner(n, n).diagonal() = snapshot.v;
    form.jzp.topRightCorner(n, n) = form.b;
    form.jzp.bottomLeftCorner(n, n) = form.b.conjugate();
    form.jzp.bottomRightCorner(n, n).diagonal() = snapshot.v.conjugate();
    return form;
}

bool FMatrix::row_dominant(Index row) const {
    const double off = signed_form.row(row).sum() - signed_form(row, row);
    return signed_form(row, row) > off;
}

bool FMatrix::all_rows_dominant() const {
    for (Index r = 0; r < signed_form.rows(); ++r) {
        if (!row_dominant(r)) {
            return false;
        }
    }
    return true;
}

FMatrix build_f(const ReducedNetwork& net, const Snapshot& snapshot) {
    check_dimensions(net, snapshot);
    const RMatrix b_abs = (net.z_power() * snapshot.i.asDiagonal()).cwiseAbs();
    FMatrix f;
    f.signed_form = b_abs;
    f.signed_form.diagonal() = snapshot.v.cwiseAbs() - b_abs.diagonal();
    f.abs_form = f.signed_form.cwiseAbs();
    return f;
}

SingularityMetrics singularity_metrics(const RMatrix& real_jacobian) {
    SingularityMetrics metrics;
    metrics.det = determinant(real_jacobian);
    metrics.sigma_min = min_singular_value(real_jacobian);
    metrics.condition = condition_estimate(real_jacobian);
    return metrics;
}

JacobianBundle assemble_jacobians(const ReducedNetwork& net, const Snapshot& snapshot) {
    JacobianBundle bundle;
    bundle.n = net.n_power();
    bundle.jz = build_complex_jacobian(net, snapshot);
    bundle.jr = build_real_jacobian(bundle.jz);
    bundle.jzp = build_dominance_form(net, snapshot).jzp;
    bundle.f = build_f(net, snapshot);
    bundle.det_jr = determinant(bundle.jr);
    bundle.det_jz = determinant(bundle.jz);
    bundle.det_jzp = determinant(bundle.jzp);
    bundle.sigma_min = min_singular_value(bundle.jr);
    return bundle;
}

}  // namespace solvcheck
