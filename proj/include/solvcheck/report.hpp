#pragma once

#include <filesystem>
#include <string>

#include "solvcheck/sweep.hpp"
#include "solvcheck/wjac.hpp"

namespace solvcheck {

enum class ReportFormat { csv, structured_text };

/// Six significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

/// Loading factors print with at least two decimals so grid points read
/// like "2.50"; finer steps get as many decimals as the step needs.
std::string format_lambda(double lambda, double step = 0.01);

std::string emit_report(const SweepReport& report, ReportFormat format, double step = 0.01);
std::string emit_report(const IndexReport& report, ReportFormat format);
std::string emit_report(const SensitivityReport& report, ReportFormat format);

/// Dense row-major CSV of the signed F matrix with a header row of bus ids.
std::string fmatrix_csv(const FMatrix& f, const std::vector<int>& bus_ids);

/// One line per constant-power bus plus the solver status, key=value style.
std::string snapshot_record(const ReducedNetwork& net, const Snapshot& snapshot);

/// Writes through a temporary sibling and renames it into place, so a failed
/// write never leaves a partial file behind.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace solvcheck
