#include "solvcheck/netmodel.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

#include "solvcheck/linalg.hpp"

namespace solvcheck {

CMatrix build_admittance(const NetworkCase& net_case) {
    const auto size = static_cast<Index>(net_case.buses.size());
    std::unordered_map<int, Index> position;
    for (Index k = 0; k < size; ++k) {
        position[net_case.buses[static_cast<std::size_t>(k)].id] = k;
    }

    CMatrix y = CMatrix::Zero(size, size);
    for (const auto& br : net_case.branches) {
        const Complex admittance = 1.0 / br.z;
        const Index a = position.at(br.from);
        const Index b = position.at(br.to);
        y(a, a) += admittance;
        y(b, b) += admittance;
        y(a, b) -= admittance;
        y(b, a) -= admittance;
    }
    for (Index k = 0; k < size; ++k) {
        y(k, k) += net_case.buses[static_cast<std::size_t>(k)].shunt;
    }
    return y;
}

CMatrix eliminate_ties(const CMatrix& y, std::span<const Index> ties) {
    if (ties.empty()) {
        return y;
    }
    std::vector<bool> is_tie(static_cast<std::size_t>(y.rows()), false);
    for (auto t : ties) {
        is_tie.at(static_cast<std::size_t>(t)) = true;
    }
    std::vector<Index> kept;
    for (Index k = 0; k < y.rows(); ++k) {
        if (!is_tie[static_cast<std::size_t>(k)]) {
            kept.push_back(k);
        }
    }
    const std::vector<Index> tie_list(ties.begin(), ties.end());

    const CMatrix y_kk = y(kept, kept);
    const CMatrix y_kt = y(kept, tie_list);
    const CMatrix y_tk = y(tie_list, kept);
    const CMatrix y_tt = y(tie_list, tie_list);

    Eigen::FullPivLU<CMatrix> lu(y_tt);
    if (!lu.isInvertible()) {
        throw DegenerateNetwork("singular tie-bus block: tie buses cannot be eliminated");
    }
    return y_kk - y_kt * lu.solve(y_tk);
}

CVector ReducedNetwork::equivalent_source(const CVector& current_injection) const {
    const Index np = n_power();
    const Index nc = n_current();
    if (current_injection.size() != nc) {
        throw std::invalid_argument(
            fmt::format("constant-current vector has {} entries, network has {}", current_injection.size(), nc));
    }
    CVector source = e.head(np);
    if (nc > 0) {
        source -= z.topRightCorner(np, nc) * current_injection;
    }
    return source;
}

std::vector<int> ReducedNetwork::kept_bus_ids() const {
    std::vector<int> ids = power_bus_ids;
    ids.insert(ids.end(), current_bus_ids.begin(), current_bus_ids.end());
    return ids;
}

ReducedNetwork reduce(const NetworkCase& net_case) {
    validate(net_case);

    const CMatrix y_full = build_admittance(net_case);

    std::vector<Index> ties;
    std::vector<Index> kept_positions;  // positions in y_full of non-tie buses
    for (Index k = 0; k < static_cast<Index>(net_case.buses.size()); ++k) {
        if (net_case.buses[static_cast<std::size_t>(k)].kind == BusKind::tie) {
            ties.push_back(k);
        } else {
            kept_positions.push_back(k);
        }
    }
    const CMatrix y_kept = eliminate_ties(y_full, ties);

    // Positions inside y_kept for slack, constant-power and constant-current buses.
    ReducedNetwork net;
    net.slack_voltage = net_case.slack_voltage;
    Index slack_pos = -1;
    std::vector<Index> power_pos;
    std::vector<Index> current_pos;
    for (Index k = 0; k < static_cast<Index>(kept_positions.size()); ++k) {
        const auto& bus = net_case.buses[static_cast<std::size_t>(kept_positions[static_cast<std::size_t>(k)])];
        if (bus.kind == BusKind::slack) {
            slack_pos = k;
            net.slack_id = bus.id;
        } else if (is_constant_power(bus.kind)) {
            power_pos.push_back(k);
            net.power_bus_ids.push_back(bus.id);
        } else {
            current_pos.push_back(k);
            net.current_bus_ids.push_back(bus.id);
        }
    }
    std::vector<Index> load_side = power_pos;
    load_side.insert(load_side.end(), current_pos.begin(), current_pos.end());
    const std::vector<Index> slack_only{slack_pos};

    net.y_ss = y_kept(slack_pos, slack_pos);
    net.y_sl = y_kept(slack_only, load_side);
    net.y_ls = y_kept(load_side, slack_only);
    net.y_ll = y_kept(load_side, load_side);

    if (load_side.empty()) {
        net.z = CMatrix(0, 0);
        net.e = CVector(0);
        return net;
    }
    net.z = checked_inverse(net.y_ll, "islanded or degenerate network: Y_LL is singular");
    net.e = -(net.z * net.y_ls) * net.slack_voltage;
    return net;
}

}  // namespace solvcheck
