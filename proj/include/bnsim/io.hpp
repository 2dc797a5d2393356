#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "bnsim/exact.hpp"
#include "bnsim/metrics.hpp"
#include "bnsim/network.hpp"
#include "bnsim/samplers.hpp"
#include "bnsim/transform.hpp"

namespace bnsim {

// Network document: JSON object {"name": ..., "nodes": [...]} where each
// node carries "id", "states", "parents" and "cpt". CPT rows follow the
// last-listed-parent-varies-fastest convention of bnsim::Cpt.
//
// Throws ParseError on malformed JSON and ValidationError (with the full
// violation report) when the parsed network is invalid.
Network parse_network(std::string_view text);

// Canonical form: nodes in topological order (declaration order breaking
// ties), states and parents in declared order, probabilities at full
// precision. parse_network(serialize_network(net)) is structurally equal
// to net.
std::string serialize_network(const Network& net);

// Flat JSON object of node label -> state label. Boolean literals are
// accepted as the labels "true"/"false". Throws ParseError for unknown
// nodes or state labels.
Evidence parse_evidence(std::string_view text, const Network& net);

std::string serialize_evidence(const Network& net, const Evidence& evidence);

// Reversal plan as a JSON array of steps, for audit alongside a
// transformed network.
std::string serialize_plan(const ReversalPlan& plan);

// Order-insensitive equality on the node set: same per-node states,
// parents and CPT values, same name.
bool structurally_equal(const Network& a, const Network& b);

// --- result documents -------------------------------------------------
//
// All result CSVs share one fixed column set:
//   record,algorithm,trials,runs,seed,node,state,estimate,truth,
//   abs_error,mean_error,error_spread,total_weight,trials_accepted,
//   failed_runs
// "estimate" records fill the per-state fields, "summary" records the
// aggregate ones. Fields that do not apply stay empty. Numeric fields are
// rendered in scientific notation with 13 significant digits, making the
// documents byte-stable for identical inputs. Wall-clock measurements are
// never part of these documents; see timing_csv.

// One sampling run. `truth` may be null (then truth/abs_error stay empty).
std::string estimate_csv(const Estimate& estimate, std::string_view algorithm,
                         std::uint64_t trials, std::uint64_t seed, const ExactResult* truth);

// The comparison grid: per cell, estimate records with the ensemble mean
// posterior and one summary record.
std::string comparison_csv(const ComparisonReport& report);

// Wall-clock sidecar for the comparison grid (Figure 7/8 style data):
//   algorithm,trials,runs,mean_time_per_trial_s,mean_run_time_s
// Not byte-stable across executions by nature.
std::string timing_csv(const ComparisonReport& report);

// Exact posteriors: record,node,state,value with one
// evidence_probability summary record.
std::string exact_csv(const ExactResult& result);

} // namespace bnsim
