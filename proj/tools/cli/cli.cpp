#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "solvcheck/report.hpp"
#include "solvcheck/sweep.hpp"
#include "solvcheck/verify.hpp"
#include "solvcheck/wjac.hpp"

namespace solvcheck::cli {

namespace {

struct Options {
    std::string case_path;
    std::string out;
    double tol = 1e-8;
    std::string dg_mode = "current";
    std::vector<double> penetration;  // percent
    double lambda = 1.0;
    double step = 0.01;
    double max_lambda = 20.0;
    int jobs = 1;
    std::optional<double> scale;
    std::optional<double> pf;
    int n = 0;
    int trials = 100;
    std::uint64_t seed = 1;
};

DgMode dg_mode(const Options& opt) {
    return opt.dg_mode == "power" ? DgMode::hold_constant_power : DgMode::hold_constant_current;
}

NetworkCase load_scenario(const Options& opt, std::optional<double> penetration_pct) {
    NetworkCase net_case = load_case(opt.case_path);
    if (penetration_pct) {
        net_case = with_penetration(net_case, *penetration_pct / 100.0);
    }
    return net_case;
}

std::optional<double> single_penetration(const Options& opt) {
    if (opt.penetration.size() > 1) {
        throw std::invalid_argument("this verb takes a single --penetration value");
    }
    return opt.penetration.empty() ? std::nullopt : std::optional<double>(opt.penetration.front());
}

struct Solved {
    ReducedNetwork net;
    Snapshot snapshot;
};

Solved solve_scenario(const Options& opt) {
    const NetworkCase net_case =
        with_dg_mode(with_loading(load_scenario(opt, single_penetration(opt)), opt.lambda), dg_mode(opt));
    Solved out{reduce(net_case), {}};
    Injections inj = injections_from_case(net_case, out.net);
    inj.loading = opt.lambda;
    SolveOptions so;
    so.tol = opt.tol;
    auto result = solve(out.net, inj, so);
    if (auto* div = std::get_if<Divergence>(&result)) {
        throw InsolvableCase(fmt::format("power flow did not converge at loading {} ({} after {} iterations)",
                                         opt.lambda, to_string(div->reason), div->iterations));
    }
    out.snapshot = std::get<Snapshot>(std::move(result));
    return out;
}

void emit(const std::string& content, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        write_atomic(path, content);
    }
}

std::string scenario_path(const std::string& path, double pct) {
    std::filesystem::path p(path);
    const std::string suffix = fmt::format("_p{}", format_number(pct));
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

int cmd_solve(const Options& opt, std::ostream& out) {
    const Solved s = solve_scenario(opt);
    emit(snapshot_record(s.net, s.snapshot), opt.out, out);
    return ok;
}

int cmd_index(const Options& opt, std::ostream& out) {
    const Solved s = solve_scenario(opt);
    const IndexReport report = evaluate_indices(s.net, s.snapshot);
    if (opt.out.empty()) {
        out << emit_report(report, ReportFormat::csv);
    } else {
        write_atomic(opt.out, emit_report(report, ReportFormat::csv));
        out << emit_report(report, ReportFormat::structured_text);
    }
    return ok;
}

int cmd_fmatrix(const Options& opt, std::ostream& out) {
    const Solved s = solve_scenario(opt);
    const FMatrix f = build_f(s.net, s.snapshot);
    emit(fmatrix_csv(f, s.net.power_bus_ids), opt.out, out);
    return ok;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
    SweepConfig config;
    config.step = opt.step;
    config.max_lambda = opt.max_lambda;
    config.dg_mode = dg_mode(opt);
    config.solver.tol = opt.tol;

    std::vector<std::optional<double>> scenarios;
    for (double pct : opt.penetration) {
        scenarios.emplace_back(pct);
    }
    if (scenarios.empty()) {
        scenarios.emplace_back(std::nullopt);
    }

    // Scenarios are independent; each future's result lands in its own slot.
    std::vector<SweepReport> reports(scenarios.size());
    const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(opt.jobs), scenarios.size());
    std::vector<std::future<void>> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t k = w; k < scenarios.size(); k += jobs) {
                reports[k] = run_sweep(load_scenario(opt, scenarios[k]), config);
            }
        }));
    }
    std::exception_ptr failure;
    for (auto& worker : workers) {
        try {
            worker.get();
        } catch (...) {
            failure = failure ? failure : std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        if (scenarios[k]) {
            out << fmt::format("penetration_pct={}\n", format_number(*scenarios[k]));
        }
        out << emit_report(reports[k], ReportFormat::structured_text, opt.step);
        if (!opt.out.empty()) {
            const std::string path = scenarios.size() > 1 ? scenario_path(opt.out, *scenarios[k]) : opt.out;
            write_atomic(path, emit_report(reports[k], ReportFormat::csv, opt.step));
        }
    }
    return ok;
}

int cmd_sensitivity(const Options& opt, std::ostream& out) {
    if (opt.scale.has_value() == opt.pf.has_value()) {
        throw std::invalid_argument("sensitivity needs exactly one of --scale or --pf");
    }
    const NetworkCase net_case = with_loading(load_scenario(opt, single_penetration(opt)), opt.lambda);
    const SensitivityReport report = opt.scale ? impedance_sensitivity(net_case, *opt.scale, dg_mode(opt))
                                               : power_factor_sensitivity(net_case, *opt.pf, dg_mode(opt));
    if (opt.out.empty()) {
        out << emit_report(report, ReportFormat::csv);
    } else {
        write_atomic(opt.out, emit_report(report, ReportFormat::csv));
    }
    out << emit_report(report, ReportFormat::structured_text);
    return ok;
}

int cmd_verify(const Options& opt, std::ostream& out) {
    VerifyOptions vo;
    if (opt.n > 0) {
        vo.n_min = vo.n_max = opt.n;
    }
    vo.trials = opt.trials;
    vo.seed = opt.seed;
    vo.jobs = opt.jobs;
    std::optional<NetworkCase> fixed;
    if (opt.case_path != "random") {
        fixed = load_case(opt.case_path);
    }
    const VerifyReport report = run_verify(vo, fixed);
    emit(report.summary(), opt.out, out);
    if (!opt.out.empty()) {
        out << report.summary();
    }
    return report.ok() ? ok : domain_error;
}

}  // namespace

bool configure_logging(const char* level) {
    static const auto logger = [] {
        auto l = spdlog::stderr_logger_mt("solvcheck");
        spdlog::set_default_logger(l);
        return l;
    }();
    const std::string name = level == nullptr ? "error" : level;
    if (name == "error") {
        logger->set_level(spdlog::level::err);
    } else if (name == "warn") {
        logger->set_level(spdlog::level::warn);
    } else if (name == "info") {
        logger->set_level(spdlog::level::info);
    } else if (name == "debug") {
        logger->set_level(spdlog::level::debug);
    } else {
        logger->set_level(spdlog::level::err);
        return false;
    }
    return true;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    if (!configure_logging(std::getenv("SOLVCHECK_LOG"))) {
        err << "error: SOLVCHECK_LOG must be one of error, warn, info, debug\n";
        return usage_error;
    }

    Options opt;
    CLI::App app{"Power-flow solvability diagnostics for distribution feeders", "solvcheck"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--case", opt.case_path, "Case file (JSON)")->required();
        sub->add_option("--out", opt.out, "Output path (stdout when omitted)");
        sub->add_option("--tol", opt.tol, "Power mismatch tolerance, pu")->check(CLI::PositiveNumber);
        sub->add_option("--dg-mode", opt.dg_mode, "How constant-current DGs are held")
            ->check(CLI::IsMember({"power", "current"}));
        sub->add_option("--penetration", opt.penetration, "DG penetration in percent; comma list for sweep")
            ->delimiter(',')
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--jobs", opt.jobs, "Parallel scenarios")->check(CLI::PositiveNumber);
    };

    auto* solve_cmd = app.add_subcommand("solve", "Solve one operating point");
    auto* index_cmd = app.add_subcommand("index", "Per-bus C-index report");
    auto* fmatrix_cmd = app.add_subcommand("fmatrix", "Export the F matrix as CSV");
    auto* sweep_cmd = app.add_subcommand("sweep", "Proportional load sweep");
    auto* sens_cmd = app.add_subcommand("sensitivity", "C-index sensitivity to impedance or power factor");
    auto* verify_cmd = app.add_subcommand("verify", "Randomized Jacobian identity checks");

    for (auto* sub : {solve_cmd, index_cmd, fmatrix_cmd, sweep_cmd, sens_cmd}) {
        add_common(sub);
    }
    for (auto* sub : {solve_cmd, index_cmd, fmatrix_cmd, sens_cmd}) {
        sub->add_option("--lambda", opt.lambda, "Load scaling factor")->check(CLI::PositiveNumber);
    }
    sweep_cmd->add_option("--step", opt.step, "Loading step")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--max-lambda", opt.max_lambda, "Upper limit of the sweep");
    sens_cmd->add_option("--scale", opt.scale, "Admittance scale a in (0, 1]");
    sens_cmd->add_option("--pf", opt.pf, "Target lagging load power factor");

    verify_cmd->add_option("--case", opt.case_path, "'random' or a case file")->default_val("random");
    verify_cmd->add_option("--out", opt.out, "Output path (stdout when omitted)");
    verify_cmd->add_option("--n", opt.n, "Constant-power buses per case (default 2..8)")->check(CLI::Range(1, 64));
    verify_cmd->add_option("--trials", opt.trials, "Number of random trials")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--seed", opt.seed, "Random seed");
    verify_cmd->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*solve_cmd) return cmd_solve(opt, out);
        if (*index_cmd) return cmd_index(opt, out);
        if (*fmatrix_cmd) return cmd_fmatrix(opt, out);
        if (*sweep_cmd) return cmd_sweep(opt, out);
        if (*sens_cmd) return cmd_sensitivity(opt, out);
        if (*verify_cmd) return cmd_verify(opt, out);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return domain_error;
    }
    return usage_error;
}

}  // namespace solvcheck::cli
