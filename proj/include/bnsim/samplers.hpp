#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnsim/network.hpp"
#include "bnsim/random.hpp"
#include "bnsim/transform.hpp"

namespace bnsim {

// One sampled full assignment of the state nodes and its likelihood
// weight. Logic-sampling trials carry weight 1; evidence-weighted trials
// carry the product of evidence likelihoods.
struct Trial {
    Assignment assignment;
    double weight = 0.0;
};

// Accumulated result of one simulation run. Rows cover the state
// (non-evidence) nodes in declaration order. total_weight == 0 marks an
// undefined estimate; posterior accessors throw rather than invent a
// uniform answer.
struct Estimate {
    std::vector<std::string> nodes;
    std::vector<std::vector<double>> tallies;
    double total_weight = 0.0;
    std::uint64_t trials_run = 0;
    std::uint64_t trials_accepted = 0;

    bool defined() const { return total_weight > 0.0; }
    // Normalized posterior rows; throws UndefinedEstimateError when undefined.
    std::vector<std::vector<double>> posteriors() const;
    std::vector<double> posterior_row(std::string_view id) const;
};

// Inverse-CDF draw from a normalized probability row; consumes exactly
// one uniform. Throws PreconditionError if the row is not normalized.
int draw_category(std::span<const double> row, RandomStream& rng);

// Samples every unclamped node in topological order from its local
// distribution given the already-assigned parents. Clamped nodes keep
// their value and consume no draw.
Assignment forward_sample(const Network& net, const Assignment& clamped, RandomStream& rng);

// Product over evidence nodes of P(node = observed | parents as assigned);
// parents that are themselves evidence nodes take their observed values.
// `assignment` must cover every state-node parent of an evidence node.
double trial_weight(const Network& net, const Evidence& evidence, const Assignment& assignment);

// One evidence-weighted trial: forward-samples the state nodes with the
// evidence clamped and attaches the likelihood weight.
Trial sample_trial(const Network& net, const Evidence& evidence, RandomStream& rng);

// Sampling distribution of `node` given its Markov blanket:
// row[j] proportional to P(node=j | parents) * prod_children P(child = assigned | parents).
// `others` must assign every variable except `node`. Throws SamplingError
// when every unnormalized score is zero.
std::vector<double> markov_blanket_distribution(const Network& net, std::string_view node,
                                                const Assignment& others);

// The run loops below derive one substream per trial (per sweep for
// Gibbs) from the stream's seed, so trial t is reproducible regardless of
// how many draws other trials consume.

// Forward-samples all nodes, evidence included; trials whose sampled
// evidence values disagree with the observations are discarded.
Estimate run_logic_sampling(const Network& net, const Evidence& evidence, std::uint64_t trials,
                            const RandomStream& rng);

// Forward-samples state nodes only (evidence clamped, never drawn) and
// tallies each trial with its likelihood weight; posteriors normalize by
// the total weight after all trials.
Estimate run_likelihood_weighting(const Network& net, const Evidence& evidence,
                                  std::uint64_t trials, const RandomStream& rng);

// Evidence weighting over an evidentially integrated network. Full mode
// conditions the network on the evidence and forward-samples with all
// weights 1; partial mode runs likelihood weighting on the transformed
// network with the surviving evidence nodes.
Estimate run_lw_integrated(const Network& net, const Evidence& evidence, std::uint64_t trials,
                           const RandomStream& rng, IntegrationMode mode);

// Markov-blanket (Gibbs) sampling: evidence clamped, free nodes
// initialized by forward sampling (retried until the evidence likelihood
// is positive), then resampled once per sweep in topological order.
// Sweeps after burn_in each count once toward the tallies.
Estimate run_gibbs(const Network& net, const Evidence& evidence, std::uint64_t sweeps,
                   const RandomStream& rng, std::uint64_t burn_in);

} // namespace bnsim
