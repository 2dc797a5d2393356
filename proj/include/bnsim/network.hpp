#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bnsim/errors.hpp"

namespace bnsim {

// A discrete variable: a unique id and an ordered list of state labels.
// State order is significant; it indexes CPT columns.
struct Variable {
    std::string id;
    std::vector<std::string> states;
};

// Conditional probability table of one variable given its parents.
//
// rows has one entry per parent configuration and each row has one
// probability per state of the owning variable. Rows are ordered with the
// last-listed parent varying fastest: for parents (P1, ..., Pk) the row
// index of configuration (v1, ..., vk) is
//     v1 * |P2|*...*|Pk| + ... + v_{k-1} * |Pk| + vk.
// A root node has a single row (its prior).
struct Cpt {
    std::vector<std::string> parents;
    std::vector<std::vector<double>> rows;
};

// Partial or full assignment of state indexes, keyed by variable id.
using Assignment = std::map<std::string, int, std::less<>>;

// Observed values for the designated evidence nodes.
using Evidence = Assignment;

// Row sums must match 1 within this tolerance.
inline constexpr double kRowSumTolerance = 1e-9;

// Immutable directed network of discrete variables. Construction only
// indexes ids; semantic invariants are checked by validate_network so
// that parsed documents can be diagnosed rather than rejected wholesale.
class Network {
public:
    Network() = default;
    Network(std::string name, std::vector<Variable> variables, std::vector<Cpt> cpts);

    const std::string& name() const { return name_; }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Cpt>& cpts() const { return cpts_; }
    std::size_t size() const { return variables_.size(); }

    const Variable& variable(std::size_t i) const { return variables_[i]; }
    const Cpt& cpt(std::size_t i) const { return cpts_[i]; }

    std::optional<std::size_t> find(std::string_view id) const;
    // Throws StructuralError when the id is unknown.
    std::size_t index_of(std::string_view id) const;

private:
    std::string name_;
    std::vector<Variable> variables_;
    std::vector<Cpt> cpts_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

// One violated invariant, with the location it was found at.
struct Violation {
    std::string where;
    std::string message;
};

// Checks every network invariant (duplicate ids, state counts, dangling or
// duplicate parents, row counts and widths, probability ranges, row sums,
// acyclicity) and returns all violations found. Empty result = valid.
std::vector<Violation> validate_network(const Network& net);

// Formats a violation list as one line per violation.
std::string format_violations(const std::vector<Violation>& violations);

// Variable ids ordered so that every variable appears after all its
// parents. Deterministic: ties are broken by declaration order.
// Throws StructuralError if the graph has a cycle.
std::vector<std::string> topological_order(const Network& net);

// The CPT row of `node` for the given parent configuration.
// Throws PreconditionError if a parent of `node` has no value.
std::vector<double> local_distribution(const Network& net, std::string_view node,
                                       const Assignment& parent_values);

// Product of local probabilities over all variables; `full` must assign
// every variable (PreconditionError otherwise).
double joint_probability(const Network& net, const Assignment& full);

// Dense, index-based view of a valid network used by the inference and
// sampling hot paths: parent/child index lists, row strides and the
// topological order, all resolved once.
class CompiledNetwork {
public:
    // Requires resolvable parents and an acyclic graph; throws
    // StructuralError otherwise. Row-level invariants are not rechecked.
    explicit CompiledNetwork(const Network& net);

    const Network& network() const { return *net_; }
    std::size_t size() const { return card_.size(); }
    int cardinality(std::size_t var) const { return card_[var]; }
    const std::vector<std::size_t>& topo_order() const { return topo_; }
    const std::vector<std::size_t>& parents(std::size_t var) const { return parents_[var]; }
    const std::vector<std::size_t>& children(std::size_t var) const { return children_[var]; }

    // Row index under the last-parent-fastest convention. `values` must
    // hold a valid state index for every parent of `var`.
    std::size_t row_index(std::size_t var, std::span<const int> values) const;
    std::span<const double> row(std::size_t var, std::size_t row_idx) const;

private:
    const Network* net_ = nullptr;
    std::vector<int> card_;
    std::vector<std::size_t> topo_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::vector<std::size_t>> strides_;
};

// Incremental construction helper; keeps variables and CPTs in lockstep.
class NetworkBuilder {
public:
    explicit NetworkBuilder(std::string name = "") : name_(std::move(name)) {}

    NetworkBuilder& node(std::string id, std::vector<std::string> states,
                         std::vector<std::string> parents,
                         std::vector<std::vector<double>> rows);

    Network build() &&;

private:
    std::string name_;
    std::vector<Variable> variables_;
    std::vector<Cpt> cpts_;
};

// Resolves `ev` against `net`: nodes must exist and values must be in
// range. Throws StructuralError / PreconditionError.
void check_evidence(const Network& net, const Evidence& ev);

} // namespace bnsim
