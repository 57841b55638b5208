#include "solvcheck/cindex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace solvcheck {

IndexReport c_index(const ReducedNetwork& net, const Snapshot& snapshot) {
    const Index n = net.n_power();
    if (snapshot.v.size() != n || snapshot.i.size() != n) {
        throw std::invalid_argument("snapshot does not match the network's constant-power buses");
    }
    const RMatrix drops = (net.z_power() * snapshot.i.asDiagonal()).cwiseAbs();

    IndexReport report;
    report.bus_ids = net.power_bus_ids;
    report.c_min = std::numeric_limits<double>::infinity();
    for (Index h = 0; h < n; ++h) {
        const double v_abs = std::abs(snapshot.v(h));
        const double denominator = drops.row(h).sum();
        const double c = denominator > 0.0 ? v_abs / denominator : std::numeric_limits<double>::infinity();
        report.v_abs.push_back(v_abs);
        report.denominator.push_back(denominator);
        report.c.push_back(c);
        if (c < report.c_min || report.argmin_bus < 0) {
            report.c_min = c;
            report.argmin_bus = net.power_bus_ids[static_cast<std::size_t>(h)];
        }
    }
    report.condition_triggered = report.c_min <= 1.0;
    return report;
}

NecessaryCondition necessary_condition(const IndexReport& report) {
    std::vector<std::size_t> order(report.c.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return report.c[a] < report.c[b]; });

    NecessaryCondition out;
    for (auto k : order) {
        if (report.c[k] <= 1.0) {
            out.buses.push_back(report.bus_ids[k]);
        }
    }
    out.triggered = !out.buses.empty();
    return out;
}

double bolognani_network_norm(const ReducedNetwork& net) {
    const CVector w = net.w();
    if (w.size() > 0 && w.cwiseAbs().minCoeff() == 0.0) {
        throw DegenerateNetwork("degenerate equivalent source: W has a zero entry");
    }
    const CVector w_inv = w.cwiseInverse();
    const CMatrix scaled = w_inv.asDiagonal() * net.z_power() * w_inv.conjugate().asDiagonal();
    return w.size() == 0 ? 0.0 : scaled.rowwise().norm().maxCoeff();
}

BolognaniBound bolognani_bound(const ReducedNetwork& net, std::span<const Complex> power) {
    if (static_cast<Index>(power.size()) != net.n_power()) {
        throw std::invalid_argument(
            fmt::format("power vector has {} entries, network has {}", power.size(), net.n_power()));
    }
    const double s_norm = std::sqrt(std::accumulate(power.begin(), power.end(), 0.0,
                                                    [](double acc, Complex s) { return acc + std::norm(s); }));
    BolognaniBound bound;
    bound.lhs = std::norm(net.slack_voltage);
    bound.rhs = 4.0 * bolognani_network_norm(net) * s_norm;
    bound.satisfied = bound.lhs > bound.rhs;
    return bound;
}

BolognaniBound bolognani_bound(const ReducedNetwork& net, const CVector& power) {
    return bolognani_bound(net, std::span<const Complex>(power.data(), static_cast<std::size_t>(power.size())));
}

std::vector<double> kessel_condition(const ReducedNetwork& net, const Snapshot& snapshot) {
    const CVector drop = net.z_power() * snapshot.i;
    std::vector<double> margin(static_cast<std::size_t>(drop.size()));
    for (Index h = 0; h < drop.size(); ++h) {
        margin[static_cast<std::size_t>(h)] = std::abs(snapshot.v(h)) - std::abs(drop(h));
    }
    return margin;
}

double inverse_w_over_v(const ReducedNetwork& net, const Snapshot& snapshot) {
    if (snapshot.v.size() == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / net.w().cwiseQuotient(snapshot.v).cwiseAbs().maxCoeff();
}

IndexReport evaluate_indices(const ReducedNetwork& net, const Snapshot& snapshot) {
    IndexReport report = c_index(net, snapshot);
    report.bolognani = bolognani_bound(net, snapshot.s);
    report.kessel_margin = kessel_condition(net, snapshot);
    return report;
}

}  // namespace solvcheck
