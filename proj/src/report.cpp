#include "solvcheck/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

namespace solvcheck {

namespace {

std::string optional_lambda(const std::optional<double>& value, double step) {
    return value ? format_lambda(*value, step) : std::string("none");
}

std::string flag(bool value) { return value ? "1" : "0"; }

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0.0) {
        return "0";  // avoid "-0"
    }
    return fmt::format("{:.6g}", value);
}

std::string format_lambda(double lambda, double step) {
    if (!std::isfinite(lambda)) {
        return format_number(lambda);
    }
    int decimals = 2;
    if (step > 0.0 && step < 0.01) {
        decimals = std::min(6, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
    }
    return fmt::format("{:.{}f}", lambda, decimals);
}

std::string emit_report(const SweepReport& report, ReportFormat format, double step) {
    std::string out;
    if (format == ReportFormat::csv) {
        out = "lambda,converged,c_min,c_argmin_bus,bolognani_ok,sigma_min\n";
        for (const auto& row : report.rows) {
            out += fmt::format("{},{},{},{},{},{}\n", format_lambda(row.lambda, step), flag(row.converged),
                               format_number(row.c_min), row.converged ? std::to_string(row.c_argmin_bus) : "",
                               flag(row.bolognani_ok), format_number(row.sigma_min));
        }
        return out;
    }
    const auto mismatch = report.mismatch_pct();
    out += fmt::format("lambda_critical={}\n", optional_lambda(report.lambda_critical, step));
    out += fmt::format("lambda_c_unity={}\n", optional_lambda(report.lambda_c_unity, step));
    out += fmt::format("lambda_bolognani={}\n", optional_lambda(report.lambda_bolognani, step));
    out += fmt::format("mismatch_pct={}\n", mismatch ? format_number(*mismatch) : "none");
    out += fmt::format("steps={}\n", report.rows.size());
    out += fmt::format("reached_max_lambda={}\n", flag(report.reached_max_lambda));
    return out;
}

std::string emit_report(const IndexReport& report, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::csv) {
        out = "bus_id,v_abs,denominator,c_index,kessel_margin\n";
        for (std::size_t k = 0; k < report.bus_ids.size(); ++k) {
            const double kessel = k < report.kessel_margin.size() ? report.kessel_margin[k] : std::nan("");
            out += fmt::format("{},{},{},{},{}\n", report.bus_ids[k], format_number(report.v_abs[k]),
                               format_number(report.denominator[k]), format_number(report.c[k]),
                               format_number(kessel));
        }
        return out;
    }
    out += fmt::format("c_min={}\n", format_number(report.c_min));
    out += fmt::format("argmin_bus={}\n", report.argmin_bus);
    out += fmt::format("condition_triggered={}\n", flag(report.condition_triggered));
    out += fmt::format("bolognani_lhs={}\n", format_number(report.bolognani.lhs));
    out += fmt::format("bolognani_rhs={}\n", format_number(report.bolognani.rhs));
    out += fmt::format("bolognani_ok={}\n", flag(report.bolognani.satisfied));
    return out;
}

std::string emit_report(const SensitivityReport& report, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::csv) {
        out = "bus_id,c_before,c_after,delta,considered\n";
        const auto delta = report.delta();
        for (std::size_t k = 0; k < report.bus_ids.size(); ++k) {
            out += fmt::format("{},{},{},{},{}\n", report.bus_ids[k], format_number(report.c_before[k]),
                               format_number(report.c_after[k]), format_number(delta[k]),
                               flag(report.considered[k]));
        }
        return out;
    }
    const auto considered = std::count(report.considered.begin(), report.considered.end(), true);
    out += fmt::format("buses={}\n", report.bus_ids.size());
    out += fmt::format("considered={}\n", considered);
    out += fmt::format("all_decreased={}\n", flag(report.all_decreased));
    return out;
}

std::string fmatrix_csv(const FMatrix& f, const std::vector<int>& bus_ids) {
    const auto n = static_cast<std::size_t>(f.signed_form.rows());
    if (bus_ids.size() != n) {
        throw std::invalid_argument("bus id list does not match the F matrix");
    }
    std::string out;
    for (std::size_t j = 0; j < n; ++j) {
        out += (j ? "," : "") + std::to_string(bus_ids[j]);
    }
    out += '\n';
    for (Index i = 0; i < f.signed_form.rows(); ++i) {
        for (Index j = 0; j < f.signed_form.cols(); ++j) {
            out += (j ? "," : "") + format_number(f.signed_form(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string snapshot_record(const ReducedNetwork& net, const Snapshot& snapshot) {
    std::string out;
    out += fmt::format("converged={}\n", flag(snapshot.converged));
    out += fmt::format("iterations={}\n", snapshot.iterations);
    out += fmt::format("residual={}\n", format_number(snapshot.residual));
    auto bus_line = [&](int id, Complex v) {
        const double angle = std::arg(v) * 180.0 / std::numbers::pi;
        out += fmt::format("bus={} v_abs={} v_angle_deg={}\n", id, format_number(std::abs(v)),
                           format_number(angle == 0.0 ? 0.0 : angle));
    };
    for (Index k = 0; k < net.n_power(); ++k) {
        bus_line(net.power_bus_ids[static_cast<std::size_t>(k)], snapshot.v(k));
    }
    for (Index k = 0; k < net.n_current(); ++k) {
        bus_line(net.current_bus_ids[static_cast<std::size_t>(k)], snapshot.current_bus_voltage(k));
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(fmt::format("cannot open '{}' for writing", path.string()));
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw Error(fmt::format("failed writing '{}'", path.string()));
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(fmt::format("cannot move output into place at '{}'", path.string()));
    }
}

}  // namespace solvcheck
