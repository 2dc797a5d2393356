#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bnsim/exact.hpp"
#include "bnsim/network.hpp"
#include "bnsim/samplers.hpp"

namespace bnsim {

enum class Algorithm {
    logic_sampling,
    likelihood_weighting,
    lw_integrated_full,
    lw_integrated_partial,
    gibbs,
};

const char* algorithm_name(Algorithm a);
// Accepts the CLI spellings: logic, lw, lw-int-full, lw-int-partial, gibbs.
Algorithm algorithm_from_name(std::string_view name);

// Aggregate over one experiment: N independent runs of one algorithm at a
// fixed trial count. mean_error is the run-average accumulated absolute
// error; error_spread is sqrt(mean(err^2) - mean(err)^2) over the
// successful runs. Failed runs (undefined estimates) are excluded from
// the statistics and counted. per_run_errors holds one entry per run,
// NaN for failed runs.
struct RunStats {
    std::string algorithm;
    std::uint64_t trials_per_run = 0;
    std::uint64_t runs = 0;
    double mean_error = 0.0;
    double error_spread = 0.0;
    double mean_time_per_trial = 0.0;  // seconds
    std::vector<double> per_run_errors;
    std::uint64_t failed_runs = 0;
};

// (trials_per_run, RunStats) pairs for one algorithm; trial counts
// strictly increasing.
struct SweepResult {
    std::vector<std::pair<std::uint64_t, RunStats>> points;
};

struct ExperimentOptions {
    std::uint64_t gibbs_burn_in = 0;  // 0: one tenth of the sweep count
    int jobs = 1;
    // With jobs > 1 the statistics pass runs concurrently and timing is
    // re-measured on this many dedicated sequential runs.
    std::uint64_t timing_runs = 5;
    std::uint64_t state_cap = kDefaultStateCap;
};

// Eq. 4 inner sum for one run: over the listed nodes and their states,
// sum of |estimated - true posterior|. Throws UndefinedEstimateError on
// an undefined estimate.
double accumulated_error(const Estimate& estimate, const ExactResult& truth,
                         const std::vector<std::string>& nodes);

// Executes `runs` independent runs (run r seeded with
// RandomStream::derive_seed(master_seed, r)) against the exact posterior
// and aggregates the error statistics and per-trial wall-clock time.
RunStats experiment(const Network& net, const Evidence& evidence, Algorithm algorithm,
                    std::uint64_t trials_per_run, std::uint64_t runs, std::uint64_t master_seed,
                    const ExperimentOptions& options = {});

// Least-squares slope of log(mean_error) against log(trials_per_run).
// Requires >= 3 points with strictly positive errors.
double convergence_slope(const SweepResult& sweep);

// Family with extremal evidence likelihoods: binary roots A0..A{n-1} with
// uniform priors, a binary node B uniform given all of them, and an
// observed binary child OBS of B with P(obs|b) = epsilon and
// P(obs|not b) = epsilon^2. Returns the network and the observation.
std::pair<Network, Evidence> generate_extremal_network(std::size_t n_parents, double epsilon);

// Full algorithm-by-trials comparison grid.
struct ComparisonCell {
    RunStats stats;
    // Ensemble mean posterior per state node (estimate order = `nodes`
    // of the report); empty when every run failed.
    std::vector<std::vector<double>> mean_posterior;
};

struct ComparisonReport {
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> trials_list;
    std::vector<std::string> nodes;  // state nodes, declaration order
    ExactResult truth;
    std::uint64_t runs = 0;
    std::uint64_t master_seed = 0;
    std::vector<std::vector<ComparisonCell>> cells;  // [algorithm][trials]

    const ComparisonCell& cell(Algorithm a, std::uint64_t trials) const;
    SweepResult sweep_for(Algorithm a) const;
};

ComparisonReport compare_report(const Network& net, const Evidence& evidence,
                                const std::vector<Algorithm>& algorithms,
                                const std::vector<std::uint64_t>& trials_list, std::uint64_t runs,
                                std::uint64_t master_seed, const ExperimentOptions& options = {});

} // namespace bnsim
