#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bnsim/network.hpp"

namespace bnsim {

// One executed arc reversal and the parent-set changes it produced.
// uniform_filled_rows counts CPT rows of `from` whose denominator was
// zero; those configurations are unreachable and received a uniform row.
struct ReversalStep {
    std::string from;
    std::string to;
    std::vector<std::string> new_from_parents;
    std::vector<std::string> new_to_parents;
    std::size_t uniform_filled_rows = 0;
};

// Ordered record of the reversals applied by integrate_evidence.
// Replaying the (from, to) pairs with reverse_arc on the source network
// reproduces the output network.
struct ReversalPlan {
    std::vector<ReversalStep> steps;
};

enum class IntegrationMode { full, partial };

// Reverses the arc from -> to by Bayes' rule. In the result, `to` gets
// parents (pa(from) u pa(to)) \ {from} and `from` gets those plus `to`;
// new parent lists are ordered by declaration index. The joint
// distribution over all variables is unchanged.
//
// Throws StructuralError if the arc does not exist or another directed
// path from -> to makes the reversal cyclic.
Network reverse_arc(const Network& net, std::string_view from, std::string_view to);
Network reverse_arc(const Network& net, std::string_view from, std::string_view to,
                    ReversalStep& step);

// Integrates evidence into the network structure by repeated arc
// reversal. Evidence nodes are processed in topological order; within a
// node, parents are reversed latest-in-topological-order first.
//
//   full     every evidence node ends with no state-node parents
//   partial  only each evidence node's current direct state-node parents
//            are reversed, one layer; parents acquired during the layer
//            are left alone
//
// Throws IntegrationError naming the stuck evidence node when a required
// partial reversal is blocked by an alternate path under every ordering
// tried.
std::pair<Network, ReversalPlan> integrate_evidence(const Network& net, const Evidence& evidence,
                                                    IntegrationMode mode);

// Removes the evidence nodes from a fully integrated network, slicing the
// CPTs of their children at the observed values. The resulting network
// ranges over the state nodes only and its joint equals P(states | E).
//
// Preconditions: every evidence node's parents are themselves evidence
// nodes (run integrate_evidence in full mode first). Throws
// ImpossibleEvidenceError when the observed configuration has probability
// zero.
Network condition_network(const Network& net, const Evidence& evidence);

} // namespace bnsim
