#include "bnsim/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace bnsim {

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::logic_sampling: return "logic";
        case Algorithm::likelihood_weighting: return "lw";
        case Algorithm::lw_integrated_full: return "lw-int-full";
        case Algorithm::lw_integrated_partial: return "lw-int-partial";
        case Algorithm::gibbs: return "gibbs";
    }
    return "?";
}

Algorithm algorithm_from_name(std::string_view name) {
    if (name == "logic") return Algorithm::logic_sampling;
    if (name == "lw") return Algorithm::likelihood_weighting;
    if (name == "lw-int-full") return Algorithm::lw_integrated_full;
    if (name == "lw-int-partial") return Algorithm::lw_integrated_partial;
    if (name == "gibbs") return Algorithm::gibbs;
    throw PreconditionError("unknown algorithm '" + std::string(name) + "'");
}

double accumulated_error(const Estimate& estimate, const ExactResult& truth,
                         const std::vector<std::string>& nodes) {
    double err = 0.0;
    for (const std::string& id : nodes) {
        const std::vector<double> est_row = estimate.posterior_row(id);
        const std::vector<double>& true_row = truth.posterior(id);
        for (std::size_t j = 0; j < est_row.size(); ++j) {
            err += std::abs(est_row[j] - true_row[j]);
        }
    }
    return err;
}

namespace {

Estimate run_algorithm(Algorithm a, const Network& net, const Evidence& evidence,
                       std::uint64_t trials, const RandomStream& rng, std::uint64_t burn_in) {
    switch (a) {
        case Algorithm::logic_sampling:
            return run_logic_sampling(net, evidence, trials, rng);
        case Algorithm::likelihood_weighting:
            return run_likelihood_weighting(net, evidence, trials, rng);
        case Algorithm::lw_integrated_full:
            return run_lw_integrated(net, evidence, trials, rng, IntegrationMode::full);
        case Algorithm::lw_integrated_partial:
            return run_lw_integrated(net, evidence, trials, rng, IntegrationMode::partial);
        case Algorithm::gibbs:
            return run_gibbs(net, evidence, trials, rng, burn_in);
    }
    throw PreconditionError("unknown algorithm");
}

struct CellResult {
    RunStats stats;
    std::vector<std::vector<double>> mean_posterior;
};

std::vector<std::string> state_node_ids(const Network& net, const Evidence& evidence) {
    std::vector<std::string> out;
    for (const Variable& var : net.variables()) {
        if (evidence.find(var.id) == evidence.end()) out.push_back(var.id);
    }
    return out;
}

CellResult run_cell(const Network& net, const Evidence& evidence, const ExactResult& truth,
                    Algorithm algorithm, std::uint64_t trials, std::uint64_t runs,
                    std::uint64_t master_seed, const ExperimentOptions& options) {
    using clock = std::chrono::steady_clock;

    const std::vector<std::string> nodes = state_node_ids(net, evidence);
    const std::uint64_t burn_in =
        (algorithm == Algorithm::gibbs && options.gibbs_burn_in == 0) ? trials / 10
                                                                      : options.gibbs_burn_in;

    struct PerRun {
        double error = std::numeric_limits<double>::quiet_NaN();
        double seconds = 0.0;
        bool failed = true;
        std::vector<std::vector<double>> posterior;
    };
    std::vector<PerRun> outcomes(runs);

    auto execute = [&](std::uint64_t r) {
        const RandomStream rng(RandomStream::derive_seed(master_seed, r));
        const auto t0 = clock::now();
        const Estimate est = run_algorithm(algorithm, net, evidence, trials, rng, burn_in);
        const auto t1 = clock::now();
        PerRun& out = outcomes[r];
        out.seconds = std::chrono::duration<double>(t1 - t0).count();
        if (est.defined()) {
            out.posterior = est.posteriors();
            out.error = accumulated_error(est, truth, nodes);
            out.failed = false;
        }
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || runs < 2) {
        for (std::uint64_t r = 0; r < runs; ++r) execute(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::uint64_t> next{0};
        const int workers = static_cast<int>(std::min<std::uint64_t>(jobs, runs));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) {
                    execute(r);
                }
            });
        }
        for (std::thread& th : pool) th.join();
        // Contention skews the inline timings; re-measure a few runs
        // sequentially.
        const std::uint64_t timed = std::min<std::uint64_t>(options.timing_runs, runs);
        for (std::uint64_t r = 0; r < timed; ++r) {
            const std::vector<std::vector<double>> keep = std::move(outcomes[r].posterior);
            const double err = outcomes[r].error;
            const bool failed = outcomes[r].failed;
            execute(r);
            outcomes[r].posterior = keep;
            outcomes[r].error = err;
            outcomes[r].failed = failed;
        }
        for (std::uint64_t r = timed; r < runs; ++r) outcomes[r].seconds = 0.0;
    }

    RunStats stats;
    stats.algorithm = algorithm_name(algorithm);
    stats.trials_per_run = trials;
    stats.runs = runs;
    stats.per_run_errors.reserve(runs);

    double err_sum = 0.0;
    double err_sq_sum = 0.0;
    double time_sum = 0.0;
    std::uint64_t ok = 0;
    std::uint64_t timed_runs = 0;
    CellResult result;
    for (std::uint64_t r = 0; r < runs; ++r) {
        const PerRun& out = outcomes[r];
        stats.per_run_errors.push_back(out.error);
        if (out.seconds > 0.0) {
            time_sum += out.seconds;
            ++timed_runs;
        }
        if (out.failed) {
            ++stats.failed_runs;
            continue;
        }
        ++ok;
        err_sum += out.error;
        err_sq_sum += out.error * out.error;
        if (result.mean_posterior.empty()) {
            result.mean_posterior = out.posterior;
        } else {
            for (std::size_t i = 0; i < out.posterior.size(); ++i) {
                for (std::size_t j = 0; j < out.posterior[i].size(); ++j) {
                    result.mean_posterior[i][j] += out.posterior[i][j];
                }
            }
        }
    }
    if (ok > 0) {
        stats.mean_error = err_sum / static_cast<double>(ok);
        const double mean_sq = err_sq_sum / static_cast<double>(ok);
        stats.error_spread = std::sqrt(std::max(0.0, mean_sq - stats.mean_error * stats.mean_error));
        for (auto& row : result.mean_posterior) {
            for (double& x : row) x /= static_cast<double>(ok);
        }
    }
    if (timed_runs > 0) {
        stats.mean_time_per_trial =
            time_sum / static_cast<double>(timed_runs) / static_cast<double>(trials);
    }
    result.stats = std::move(stats);
    return result;
}

} // namespace

RunStats experiment(const Network& net, const Evidence& evidence, Algorithm algorithm,
                    std::uint64_t trials_per_run, std::uint64_t runs, std::uint64_t master_seed,
                    const ExperimentOptions& options) {
    if (trials_per_run < 1 || runs < 1) throw PreconditionError("trials and runs must be >= 1");
    const ExactResult truth = exact_inference(net, evidence, options.state_cap);
    return run_cell(net, evidence, truth, algorithm, trials_per_run, runs, master_seed, options)
        .stats;
}

double convergence_slope(const SweepResult& sweep) {
    if (sweep.points.size() < 3) {
        throw PreconditionError("convergence_slope needs at least 3 sweep points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(sweep.points.size());
    for (const auto& [trials, stats] : sweep.points) {
        if (!(stats.mean_error > 0.0)) {
            throw PreconditionError("convergence_slope: mean error must be positive");
        }
        const double x = std::log(static_cast<double>(trials));
        const double y = std::log(stats.mean_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::pair<Network, Evidence> generate_extremal_network(std::size_t n_parents, double epsilon) {
    if (n_parents < 1) throw PreconditionError("n_parents must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw PreconditionError("epsilon must be in (0, 0.5)");

    NetworkBuilder builder("extremal");
    const std::vector<std::string> binary{"true", "false"};
    std::vector<std::string> roots;
    for (std::size_t i = 0; i < n_parents; ++i) {
        std::string id = "A" + std::to_string(i);
        builder.node(id, binary, {}, {{0.5, 0.5}});
        roots.push_back(std::move(id));
    }
    std::size_t rows = 1;
    for (std::size_t i = 0; i < n_parents; ++i) rows *= 2;
    builder.node("B", binary, roots, std::vector<std::vector<double>>(rows, {0.5, 0.5}));
    builder.node("OBS", binary, {"B"},
                 {{epsilon, 1.0 - epsilon}, {epsilon * epsilon, 1.0 - epsilon * epsilon}});

    Evidence evidence{{"OBS", 0}};
    return {std::move(builder).build(), std::move(evidence)};
}

const ComparisonCell& ComparisonReport::cell(Algorithm a, std::uint64_t trials) const {
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        if (algorithms[i] != a) continue;
        for (std::size_t j = 0; j < trials_list.size(); ++j) {
            if (trials_list[j] == trials) return cells[i][j];
        }
    }
    throw PreconditionError("no comparison cell for the requested algorithm/trials");
}

SweepResult ComparisonReport::sweep_for(Algorithm a) const {
    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        if (algorithms[i] != a) continue;
        SweepResult sweep;
        for (std::size_t j = 0; j < trials_list.size(); ++j) {
            sweep.points.emplace_back(trials_list[j], cells[i][j].stats);
        }
        return sweep;
    }
    throw PreconditionError("algorithm not present in report");
}

ComparisonReport compare_report(const Network& net, const Evidence& evidence,
                                const std::vector<Algorithm>& algorithms,
                                const std::vector<std::uint64_t>& trials_list, std::uint64_t runs,
                                std::uint64_t master_seed, const ExperimentOptions& options) {
    if (algorithms.empty() || trials_list.empty()) {
        throw PreconditionError("compare_report needs at least one algorithm and trial count");
    }
    for (std::size_t j = 1; j < trials_list.size(); ++j) {
        if (trials_list[j] <= trials_list[j - 1]) {
            throw PreconditionError("trial counts must be strictly increasing");
        }
    }

    ComparisonReport report;
    report.algorithms = algorithms;
    report.trials_list = trials_list;
    report.nodes = state_node_ids(net, evidence);
    report.truth = exact_inference(net, evidence, options.state_cap);
    report.runs = runs;
    report.master_seed = master_seed;
    report.cells.resize(algorithms.size());

    for (std::size_t i = 0; i < algorithms.size(); ++i) {
        for (std::size_t j = 0; j < trials_list.size(); ++j) {
            CellResult cell = run_cell(net, evidence, report.truth, algorithms[i], trials_list[j],
                                       runs, master_seed, options);
            report.cells[i].push_back({std::move(cell.stats), std::move(cell.mean_posterior)});
        }
    }
    return report;
}

} // namespace bnsim
