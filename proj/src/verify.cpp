#include "solvcheck/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include <fmt/format.h>

#include "solvcheck/cindex.hpp"
#include "solvcheck/wjac.hpp"

namespace solvcheck {

namespace {

TrialResult draw_trial(const VerifyOptions& options, const std::optional<NetworkCase>& fixed_case, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    Rng rng(seq);
    ReducedNetwork net;
    if (fixed_case) {
        net = reduce(*fixed_case);
    } else {
        RandomCaseOptions rc;
        rc.n_min = options.n_min;
        rc.n_max = options.n_max;
        rc.current_buses_max = 2;
        rc.shunts = true;
        net = reduce(random_case(rng, rc));
    }
    // Spread the loading so that both sides of C = 1 get sampled.
    const double scale = std::exp(std::uniform_real_distribution<double>(std::log(0.05), std::log(4.0))(rng));
    return run_trial(net, random_snapshot(net, rng, scale), options);
}

}  // namespace

TrialResult run_trial(const ReducedNetwork& net, const Snapshot& snapshot, const VerifyOptions& options) {
    const JacobianBundle bundle = assemble_jacobians(net, snapshot);
    TrialResult r;
    r.n = bundle.n;
    r.det_deviation = Determinant::relative_deviation(bundle.det_jr, bundle.det_jz);
    r.lemma2_magnitude = std::abs(std::exp(bundle.det_jzp.log_abs - bundle.det_jz.log_abs) - 1.0);
    const Complex sign = bundle.n % 2 == 0 ? 1.0 : -1.0;
    r.lemma2_phase = std::abs(std::arg(bundle.det_jz.phase / (sign * bundle.det_jzp.phase)));
    r.c_min = c_index(net, snapshot).c_min;
    r.sigma_min = bundle.sigma_min;
    r.fd_deviation = wirtinger_fd_check(net, snapshot, options.fd_step);
    return r;
}

bool VerifyReport::ok() const {
    return theorem1_failures == 0 && lemma2_failures == 0 && theorem2_counterexamples == 0 &&
           wirtinger_failures == 0;
}

std::string VerifyReport::summary() const {
    auto status = [](int failures) { return failures == 0 ? std::string("OK") : fmt::format("FAILED ({})", failures); };
    double worst_det = 0.0;
    double worst_mag = 0.0;
    double worst_phase = 0.0;
    double worst_fd = 0.0;
    for (const auto& t : trials) {
        worst_det = std::max(worst_det, t.det_deviation);
        worst_mag = std::max(worst_mag, t.lemma2_magnitude);
        worst_phase = std::max(worst_phase, t.lemma2_phase);
        worst_fd = std::max(worst_fd, t.fd_deviation);
    }
    std::string out = fmt::format("theorem1 {}, lemma2 {}\n", status(theorem1_failures), status(lemma2_failures));
    out += fmt::format("theorem2 {} ({} of {} snapshots with all C > 1)\n", status(theorem2_counterexamples),
                       theorem2_applicable, trials.size());
    out += fmt::format("wirtinger {}\n", status(wirtinger_failures));
    out += fmt::format("trials={} seed={}\n", trials.size(), options.seed);
    out += fmt::format("max_det_deviation={:.3g}\n", worst_det);
    out += fmt::format("max_lemma2_magnitude={:.3g}\n", worst_mag);
    out += fmt::format("max_lemma2_phase={:.3g}\n", worst_phase);
    out += fmt::format("max_fd_deviation={:.3g}\n", worst_fd);
    return out;
}

VerifyReport run_verify(const VerifyOptions& options, const std::optional<NetworkCase>& fixed_case) {
    if (options.trials < 1 || options.jobs < 1) {
        throw std::invalid_argument("verify needs trials >= 1 and jobs >= 1");
    }
    VerifyReport report;
    report.options = options;
    report.trials.resize(static_cast<std::size_t>(options.trials));

    const int jobs = std::min(options.jobs, options.trials);
    std::vector<std::future<void>> workers;
    for (int w = 0; w < jobs; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (int t = w; t < options.trials; t += jobs) {
                report.trials[static_cast<std::size_t>(t)] = draw_trial(options, fixed_case, t);
            }
        }));
    }
    for (auto& worker : workers) {
        worker.get();
    }

    for (const auto& t : report.trials) {
        report.theorem1_failures += !(t.det_deviation < options.det_tol);
        report.lemma2_failures += !(t.lemma2_magnitude < options.det_tol && t.lemma2_phase < options.phase_tol);
        if (t.c_min > 1.0) {
            ++report.theorem2_applicable;
            report.theorem2_counterexamples += !(t.sigma_min > options.sigma_floor);
        }
        report.wirtinger_failures += !(t.fd_deviation < options.fd_tol);
    }
    return report;
}

}  // namespace solvcheck
