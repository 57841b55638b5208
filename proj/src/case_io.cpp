#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "solvcheck/netmodel.hpp"

namespace solvcheck {

namespace {

using nlohmann::json;

std::string line_context(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    const auto prefix = text.substr(0, byte);
    const auto line = std::count(prefix.begin(), prefix.end(), '\n') + 1;
    const auto last_nl = prefix.rfind('\n');
    const auto column = last_nl == std::string_view::npos ? byte + 1 : byte - last_nl;
    return fmt::format("line {}, column {}", line, column);
}

[[noreturn]] void field_error(std::string_view source, const std::string& field, const std::string& what) {
    throw ParseError(fmt::format("{}: field '{}': {}", source, field, what));
}

Complex read_pair(const json& node, std::string_view source, const std::string& field) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
        field_error(source, field, "expected a two-element numeric array [re, im]");
    }
    return {node[0].get<double>(), node[1].get<double>()};
}

const json& require(const json& obj, const char* key, std::string_view source, const std::string& where) {
    if (!obj.is_object()) {
        field_error(source, where, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(source, where.empty() ? key : where + "." + key, "missing");
    }
    return *it;
}

int read_id(const json& node, std::string_view source, const std::string& field) {
    if (!node.is_number_integer()) {
        field_error(source, field, "expected an integer bus id");
    }
    return node.get<int>();
}

json pair(Complex value) { return json::array({value.real(), value.imag()}); }

}  // namespace

std::string_view to_string(BusKind kind) {
    switch (kind) {
        case BusKind::slack: return "slack";
        case BusKind::pq_load: return "pq_load";
        case BusKind::pq_dg: return "pq_dg";
        case BusKind::ci_dg: return "ci_dg";
        case BusKind::tie: return "tie";
    }
    return "?";
}

std::optional<BusKind> parse_bus_kind(std::string_view text) {
    for (auto kind : {BusKind::slack, BusKind::pq_load, BusKind::pq_dg, BusKind::ci_dg, BusKind::tie}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

const Bus& NetworkCase::slack() const {
    auto it = std::find_if(buses.begin(), buses.end(), [](const Bus& b) { return b.kind == BusKind::slack; });
    if (it == buses.end()) {
        throw ValidationError("exactly one slack bus required, found none");
    }
    return *it;
}

const Bus* NetworkCase::find(int id) const {
    auto it = std::find_if(buses.begin(), buses.end(), [id](const Bus& b) { return b.id == id; });
    return it == buses.end() ? nullptr : &*it;
}

NetworkCase parse_case(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& err) {
        throw ParseError(fmt::format("{}: {}: malformed document ({})", source, line_context(text, err.byte),
                                     err.what()));
    }

    NetworkCase out;
    const auto& meta = require(doc, "meta", source, "");
    if (auto it = meta.find("base_mva"); it != meta.end()) {
        if (!it->is_number()) {
            field_error(source, "meta.base_mva", "expected a number");
        }
        out.base_mva = it->get<double>();
    }
    if (auto it = meta.find("slack_voltage"); it != meta.end()) {
        out.slack_voltage = read_pair(*it, source, "meta.slack_voltage");
    }

    const auto& buses = require(doc, "buses", source, "");
    if (!buses.is_array()) {
        field_error(source, "buses", "expected an array");
    }
    for (std::size_t k = 0; k < buses.size(); ++k) {
        const auto where = fmt::format("buses[{}]", k);
        const auto& node = buses[k];
        Bus bus;
        bus.id = read_id(require(node, "id", source, where), source, where + ".id");
        const auto& kind_node = require(node, "kind", source, where);
        if (!kind_node.is_string()) {
            field_error(source, where + ".kind", "expected a string");
        }
        auto kind = parse_bus_kind(kind_node.get<std::string>());
        if (!kind) {
            field_error(source, where + ".kind", fmt::format("unknown kind '{}'", kind_node.get<std::string>()));
        }
        bus.kind = *kind;
        if (auto it = node.find("shunt"); it != node.end()) {
            bus.shunt = read_pair(*it, source, where + ".shunt");
        }
        const bool has_s = node.contains("s_base");
        const bool has_i = node.contains("i_base");
        if (has_s) {
            bus.s_base = read_pair(node["s_base"], source, where + ".s_base");
        }
        if (has_i) {
            bus.i_base = read_pair(node["i_base"], source, where + ".i_base");
        }
        if (is_constant_power(bus.kind) && has_i) {
            throw ValidationError(fmt::format("{}: {}: constant-power bus {} carries i_base; pq and ci "
                                              "designations must be disjoint",
                                              source, where, bus.id));
        }
        if (bus.kind == BusKind::ci_dg && has_s) {
            throw ValidationError(fmt::format("{}: {}: constant-current bus {} carries s_base; pq and ci "
                                              "designations must be disjoint",
                                              source, where, bus.id));
        }
        if ((bus.kind == BusKind::tie || bus.kind == BusKind::slack) && (has_s || has_i)) {
            throw ValidationError(
                fmt::format("{}: {}: {} bus {} cannot carry an injection", source, where, to_string(bus.kind), bus.id));
        }
        out.buses.push_back(bus);
    }

    const auto& branches = require(doc, "branches", source, "");
    if (!branches.is_array()) {
        field_error(source, "branches", "expected an array");
    }
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const auto where = fmt::format("branches[{}]", k);
        const auto& node = branches[k];
        Branch br;
        br.from = read_id(require(node, "from", source, where), source, where + ".from");
        br.to = read_id(require(node, "to", source, where), source, where + ".to");
        br.z = read_pair(require(node, "z", source, where), source, where + ".z");
        out.branches.push_back(br);
    }

    try {
        validate(out);
    } catch (const ValidationError& err) {
        throw ValidationError(fmt::format("{}: {}", source, err.what()));
    }
    return out;
}

NetworkCase load_case(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(fmt::format("{}: cannot open case file", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case(buffer.str(), path.string());
}

std::string dump_case(const NetworkCase& net_case) {
    json doc;
    doc["meta"] = {{"base_mva", net_case.base_mva}, {"slack_voltage", pair(net_case.slack_voltage)}};
    json buses = json::array();
    for (const auto& bus : net_case.buses) {
        json node = {{"id", bus.id}, {"kind", std::string(to_string(bus.kind))}};
        if (bus.shunt != Complex{}) {
            node["shunt"] = pair(bus.shunt);
        }
        if (is_constant_power(bus.kind)) {
            node["s_base"] = pair(bus.s_base);
        } else if (bus.kind == BusKind::ci_dg) {
            node["i_base"] = pair(bus.i_base);
        }
        buses.push_back(std::move(node));
    }
    json branches = json::array();
    for (const auto& br : net_case.branches) {
        branches.push_back({{"from", br.from}, {"to", br.to}, {"z", pair(br.z)}});
    }
    doc["buses"] = std::move(buses);
    doc["branches"] = std::move(branches);
    return doc.dump(2) + "\n";
}

void save_case(const NetworkCase& net_case, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(fmt::format("{}: cannot write case file", path.string()));
    }
    out << dump_case(net_case);
}

void validate(const NetworkCase& net_case) {
    const auto n_slack = std::count_if(net_case.buses.begin(), net_case.buses.end(),
                                       [](const Bus& b) { return b.kind == BusKind::slack; });
    if (n_slack != 1) {
        throw ValidationError(fmt::format("exactly one slack bus required, found {}", n_slack));
    }

    std::set<int> ids;
    for (const auto& bus : net_case.buses) {
        if (!ids.insert(bus.id).second) {
            throw ValidationError(fmt::format("bus ids must be unique: {} repeated", bus.id));
        }
        if (bus.kind == BusKind::ci_dg && bus.s_base != Complex{}) {
            throw ValidationError(fmt::format("bus {}: pq and ci designations must be disjoint", bus.id));
        }
        if (is_constant_power(bus.kind) && bus.i_base != Complex{}) {
            throw ValidationError(fmt::format("bus {}: pq and ci designations must be disjoint", bus.id));
        }
        if ((bus.kind == BusKind::tie || bus.kind == BusKind::slack) &&
            (bus.s_base != Complex{} || bus.i_base != Complex{})) {
            throw ValidationError(fmt::format("bus {}: {} bus cannot carry an injection", bus.id, to_string(bus.kind)));
        }
    }
    if (!std::isfinite(net_case.slack_voltage.real()) || !std::isfinite(net_case.slack_voltage.imag()) ||
        net_case.slack_voltage == Complex{}) {
        throw ValidationError("slack voltage must be finite and nonzero");
    }

    // Union-find over bus positions for the connectivity check.
    std::vector<std::size_t> parent(net_case.buses.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&parent](std::size_t k) {
        while (parent[k] != k) {
            parent[k] = parent[parent[k]];
            k = parent[k];
        }
        return k;
    };
    auto position = [&net_case](int id) {
        return static_cast<std::size_t>(
            std::find_if(net_case.buses.begin(), net_case.buses.end(), [id](const Bus& b) { return b.id == id; }) -
            net_case.buses.begin());
    };
    for (std::size_t k = 0; k < net_case.branches.size(); ++k) {
        const auto& br = net_case.branches[k];
        if (!ids.contains(br.from) || !ids.contains(br.to)) {
            throw ValidationError(fmt::format("branch {} ({} -> {}) references an unknown bus", k, br.from, br.to));
        }
        if (br.from == br.to) {
            throw ValidationError(fmt::format("branch {} is a self-loop at bus {}", k, br.from));
        }
        if (br.z == Complex{} || !std::isfinite(br.z.real()) || !std::isfinite(br.z.imag())) {
            throw ValidationError(
                fmt::format("branch {} ({} -> {}): every branch impedance must be finite and nonzero", k, br.from, br.to));
        }
        parent[root(position(br.from))] = root(position(br.to));
    }
    const auto slack_root = root(position(net_case.slack().id));
    for (std::size_t k = 0; k < net_case.buses.size(); ++k) {
        if (root(k) != slack_root) {
            throw ValidationError(
                fmt::format("network graph must be connected: bus {} is not reachable from the slack", net_case.buses[k].id));
        }
    }
}

}  // namespace solvcheck
