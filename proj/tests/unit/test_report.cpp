#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "helpers.hpp"
#include "solvcheck/report.hpp"

using namespace solvcheck;
using testing_support::two_bus;

namespace {

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Format, SixSignificantDigits) {
    EXPECT_EQ(format_number(7.872983346207417), "7.87298");
    EXPECT_EQ(format_number(4.251), "4.251");
    EXPECT_EQ(format_number(1.0e-12), "1e-12");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Format, LoadingFactorsKeepGridDecimals) {
    EXPECT_EQ(format_lambda(2.5), "2.50");
    EXPECT_EQ(format_lambda(2.5000000000000004), "2.50");
    EXPECT_EQ(format_lambda(1.005, 0.005), "1.005");
    EXPECT_EQ(format_lambda(3.0, 0.1), "3.00");
}

TEST(Emit, SweepCsvFraming) {
    SweepReport r;
    for (int k = 0; k < 150; ++k) {
        r.rows.push_back(SweepRow{1.0 + 0.01 * k, true, 5.0 - 0.01 * k, 3, true, 0.5});
    }
    const std::string csv = emit_report(r, ReportFormat::csv);
    EXPECT_EQ(count_lines(csv), 151u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda,converged,c_min,c_argmin_bus,bolognani_ok,sigma_min");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Emit, SweepSummary) {
    const SweepReport r = run_sweep(two_bus(0.1));
    const std::string text = emit_report(r, ReportFormat::structured_text);
    EXPECT_NE(text.find("lambda_critical=2.50\n"), std::string::npos) << text;
    EXPECT_NE(text.find("lambda_c_unity=2.50\n"), std::string::npos) << text;
    EXPECT_NE(text.find("lambda_bolognani=2.50\n"), std::string::npos) << text;
    EXPECT_NE(text.find("mismatch_pct=0\n"), std::string::npos) << text;
    EXPECT_EQ(emit_report(r, ReportFormat::csv), emit_report(run_sweep(two_bus(0.1)), ReportFormat::csv));
}

TEST(Emit, IndexReportWithInfinity) {
    IndexReport r;
    r.bus_ids = {4};
    r.v_abs = {1.0};
    r.denominator = {0.0};
    r.c = {std::numeric_limits<double>::infinity()};
    r.kessel_margin = {1.0};
    const std::string csv = emit_report(r, ReportFormat::csv);
    EXPECT_EQ(csv, "bus_id,v_abs,denominator,c_index,kessel_margin\n4,1,0,inf,1\n");
}

TEST(Emit, FMatrixHeaderHoldsBusIds) {
    FMatrix f;
    f.signed_form = RMatrix(2, 2);
    f.signed_form << 0.9, 0.1, 0.2, 0.8;
    f.abs_form = f.signed_form;
    EXPECT_EQ(fmatrix_csv(f, {7, 3}), "7,3\n0.9,0.1\n0.2,0.8\n");
    EXPECT_THROW(fmatrix_csv(f, {7}), std::invalid_argument);
}

TEST(Emit, SnapshotRecord) {
    const NetworkCase c = two_bus(0.1);
    const ReducedNetwork net = reduce(c);
    const Snapshot s = testing_support::solved(net, injections_from_case(c, net));
    const std::string text = snapshot_record(net, s);
    EXPECT_NE(text.find("bus=2 v_abs=0.887298 v_angle_deg=0\n"), std::string::npos) << text;
}

TEST(WriteAtomic, WritesAndReplaces) {
    const auto dir = std::filesystem::temp_directory_path() / "solvcheck_report_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_atomic(path, "a\n");
    write_atomic(path, "b\n");
    EXPECT_EQ(read_file(path), "b\n");
    EXPECT_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
    std::filesystem::remove_all(dir);
}

TEST(WriteAtomic, UnwritablePathLeavesNothing) {
    const std::filesystem::path path = "/nonexistent_dir_for_solvcheck/out.csv";
    EXPECT_THROW(write_atomic(path, "x\n"), Error);
    EXPECT_FALSE(std::filesystem::exists(path));
}
