#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solvcheck/types.hpp"

namespace solvcheck {

enum class BusKind { slack, pq_load, pq_dg, ci_dg, tie };

std::string_view to_string(BusKind kind);
std::optional<BusKind> parse_bus_kind(std::string_view text);

/// True for buses whose complex power is specified (loads and constant-power DGs).
constexpr bool is_constant_power(BusKind kind) {
    return kind == BusKind::pq_load || kind == BusKind::pq_dg;
}

/// One bus of the case file. Injections are signed net injections into the
/// network in per unit: generation positive, consumption negative.
struct Bus {
    int id = 0;
    BusKind kind = BusKind::pq_load;
    Complex shunt{};   // g + jb
    Complex s_base{};  // pq_load / pq_dg only
    Complex i_base{};  // ci_dg only

    bool operator==(const Bus&) const = default;
};

struct Branch {
    int from = 0;
    int to = 0;
    Complex z{};  // series impedance r + jx

    bool operator==(const Branch&) const = default;
};

struct NetworkCase {
    double base_mva = 100.0;
    Complex slack_voltage{1.0, 0.0};
    std::vector<Bus> buses;
    std::vector<Branch> branches;

    bool operator==(const NetworkCase&) const = default;

    const Bus& slack() const;
    const Bus* find(int id) const;
};

/// Parses the JSON case schema (sections `meta`, `buses`, `branches`) and
/// validates it. `source` is only used to label error messages.
NetworkCase parse_case(std::string_view text, std::string_view source = "<memory>");
NetworkCase load_case(const std::filesystem::path& path);

/// Serializes a case in the same schema. parse_case(dump_case(c)) == c.
std::string dump_case(const NetworkCase& net_case);
void save_case(const NetworkCase& net_case, const std::filesystem::path& path);

/// Throws ValidationError naming the first violated invariant.
void validate(const NetworkCase& net_case);

/// Full bus admittance matrix in the declaration order of `buses`.
/// Off-diagonals are -y_ik, diagonals the sum of incident y plus the shunt.
CMatrix build_admittance(const NetworkCase& net_case);

/// Kron reduction: Schur complement of `y` over the positions in `ties`.
/// Kept rows/columns preserve their relative order. Throws DegenerateNetwork
/// if the tie block is singular.
CMatrix eliminate_ties(const CMatrix& y, std::span<const Index> ties);

/// Network seen from the load side after tie elimination and slack partition.
///
/// Kept buses are ordered constant-power first (declaration order), then
/// constant-current. With the load-side current I measured out of the network
/// the bus voltages satisfy V = E - Z I, where Z = Y_LL^-1 and
/// E = -Y_LL^-1 Y_LS V_S.
struct ReducedNetwork {
    Complex slack_voltage{1.0, 0.0};
    int slack_id = 0;

    Complex y_ss{};
    CMatrix y_sl;  // 1 x m
    CVector y_ls;  // m
    CMatrix y_ll;  // m x m

    CMatrix z;  // m x m
    CVector e;  // m

    std::vector<int> power_bus_ids;
    std::vector<int> current_bus_ids;

    Index n_power() const { return static_cast<Index>(power_bus_ids.size()); }
    Index n_current() const { return static_cast<Index>(current_bus_ids.size()); }
    Index n_kept() const { return n_power() + n_current(); }

    /// Impedance block between constant-power buses (the Z of the Jacobian).
    CMatrix z_power() const { return z.topLeftCorner(n_power(), n_power()); }

    /// Diagonal of the W matrix used by the fixed-point bound: E / V_S over
    /// the constant-power buses.
    CVector w() const { return e.head(n_power()) / slack_voltage; }

    /// Equivalent source seen by constant-power buses once the fixed
    /// constant-current injections are folded in: E_p - Z_pc I_c.
    CVector equivalent_source(const CVector& current_injection) const;

    std::vector<int> kept_bus_ids() const;
};

/// Builds Y, eliminates tie buses, partitions off the slack and forms Z, E.
/// Throws DegenerateNetwork when Y_LL is singular.
ReducedNetwork reduce(const NetworkCase& net_case);

}  // namespace solvcheck
