#include "bnsim/transform.hpp"

#include <algorithm>
#include <set>

namespace bnsim {

namespace {

// Iterates every configuration of `vars` (last entry varying fastest),
// writing state indexes into `vals` and calling fn once per configuration.
template <typename F>
void for_each_config(const CompiledNetwork& cn, const std::vector<std::size_t>& vars,
                     std::vector<int>& vals, F&& fn) {
    for (std::size_t v : vars) vals[v] = 0;
    bool done = false;
    while (!done) {
        fn();
        done = true;
        for (std::size_t k = vars.size(); k-- > 0;) {
            const std::size_t v = vars[k];
            if (++vals[v] < cn.cardinality(v)) {
                done = false;
                break;
            }
            vals[v] = 0;
        }
    }
}

std::size_t config_index(const CompiledNetwork& cn, const std::vector<std::size_t>& vars,
                         const std::vector<int>& vals) {
    std::size_t idx = 0;
    for (std::size_t v : vars) {
        idx = idx * static_cast<std::size_t>(cn.cardinality(v)) + static_cast<std::size_t>(vals[v]);
    }
    return idx;
}

// Directed path from -> to that does not use the direct arc.
bool has_other_path(const CompiledNetwork& cn, std::size_t from, std::size_t to) {
    std::vector<bool> visited(cn.size(), false);
    std::vector<std::size_t> stack{from};
    visited[from] = true;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t c : cn.children(v)) {
            if (v == from && c == to) continue;
            if (c == to) return true;
            if (!visited[c]) {
                visited[c] = true;
                stack.push_back(c);
            }
        }
    }
    return false;
}

std::vector<std::string> id_list(const Network& net, const std::vector<std::size_t>& vars) {
    std::vector<std::string> ids;
    ids.reserve(vars.size());
    for (std::size_t v : vars) ids.push_back(net.variable(v).id);
    return ids;
}

} // namespace

Network reverse_arc(const Network& net, std::string_view from, std::string_view to) {
    ReversalStep step;
    return reverse_arc(net, from, to, step);
}

Network reverse_arc(const Network& net, std::string_view from, std::string_view to,
                    ReversalStep& step) {
    const CompiledNetwork cn(net);
    const std::size_t f = net.index_of(from);
    const std::size_t t = net.index_of(to);

    const auto& old_to_parents = cn.parents(t);
    if (std::find(old_to_parents.begin(), old_to_parents.end(), f) == old_to_parents.end()) {
        throw StructuralError("no arc " + std::string(from) + " -> " + std::string(to));
    }
    if (has_other_path(cn, f, t)) {
        throw StructuralError("reversing " + std::string(from) + " -> " + std::string(to) +
                              " would create a cycle (alternate directed path exists)");
    }

    // Union parent sets, canonically ordered by declaration index.
    std::set<std::size_t> union_set(cn.parents(f).begin(), cn.parents(f).end());
    union_set.insert(old_to_parents.begin(), old_to_parents.end());
    union_set.erase(f);
    const std::vector<std::size_t> new_to_parents(union_set.begin(), union_set.end());
    union_set.insert(t);
    const std::vector<std::size_t> new_from_parents(union_set.begin(), union_set.end());

    const std::size_t card_f = static_cast<std::size_t>(cn.cardinality(f));
    const std::size_t card_t = static_cast<std::size_t>(cn.cardinality(t));
    std::vector<int> vals(net.size(), 0);

    // P'(to = y | u) = sum_x P(to = y | x, u) P(from = x | u).
    std::vector<std::vector<double>> to_rows;
    for_each_config(cn, new_to_parents, vals, [&] {
        std::vector<double> row(card_t, 0.0);
        for (std::size_t x = 0; x < card_f; ++x) {
            vals[f] = static_cast<int>(x);
            const double p_from = cn.row(f, cn.row_index(f, vals))[x];
            const auto to_row = cn.row(t, cn.row_index(t, vals));
            for (std::size_t y = 0; y < card_t; ++y) row[y] += to_row[y] * p_from;
        }
        to_rows.push_back(std::move(row));
    });

    // P'(from = x | to = y, u) = P(to = y | x, u) P(from = x | u) / P'(to = y | u).
    // Zero-denominator configurations are unreachable; they get a uniform
    // row and are counted in the step record.
    std::size_t uniform_rows = 0;
    std::vector<std::vector<double>> from_rows;
    for_each_config(cn, new_from_parents, vals, [&] {
        const std::size_t y = static_cast<std::size_t>(vals[t]);
        const double denom = to_rows[config_index(cn, new_to_parents, vals)][y];
        std::vector<double> row(card_f);
        if (denom > 0.0) {
            for (std::size_t x = 0; x < card_f; ++x) {
                vals[f] = static_cast<int>(x);
                const double p_from = cn.row(f, cn.row_index(f, vals))[x];
                const double p_to = cn.row(t, cn.row_index(t, vals))[y];
                row[x] = p_to * p_from / denom;
            }
        } else {
            std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(card_f));
            ++uniform_rows;
        }
        from_rows.push_back(std::move(row));
    });

    step.from = std::string(from);
    step.to = std::string(to);
    step.new_from_parents = id_list(net, new_from_parents);
    step.new_to_parents = id_list(net, new_to_parents);
    step.uniform_filled_rows = uniform_rows;

    std::vector<Variable> variables = net.variables();
    std::vector<Cpt> cpts = net.cpts();
    cpts[t] = Cpt{step.new_to_parents, std::move(to_rows)};
    cpts[f] = Cpt{step.new_from_parents, std::move(from_rows)};
    return Network(net.name(), std::move(variables), std::move(cpts));
}

namespace {

std::vector<std::size_t> state_parents(const CompiledNetwork& cn, std::size_t node,
                                       const std::vector<bool>& is_evidence) {
    std::vector<std::size_t> out;
    for (std::size_t p : cn.parents(node)) {
        if (!is_evidence[p]) out.push_back(p);
    }
    return out;
}

std::size_t topo_position(const CompiledNetwork& cn, std::size_t var) {
    const auto& order = cn.topo_order();
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), var) - order.begin());
}

} // namespace

std::pair<Network, ReversalPlan> integrate_evidence(const Network& net, const Evidence& evidence,
                                                    IntegrationMode mode) {
    check_evidence(net, evidence);
    if (evidence.empty()) throw PreconditionError("integrate_evidence: evidence is empty");

    std::vector<bool> is_evidence(net.size(), false);
    for (const auto& [id, value] : evidence) is_evidence[net.index_of(id)] = true;

    // Evidence nodes in topological order of the input network. Variable
    // indexes are stable across reversals, so index bookkeeping carries over.
    std::vector<std::size_t> ev_order;
    for (const std::string& id : topological_order(net)) {
        const std::size_t v = net.index_of(id);
        if (is_evidence[v]) ev_order.push_back(v);
    }

    Network current = net;
    ReversalPlan plan;
    const std::size_t step_cap = net.size() * std::max<std::size_t>(evidence.size(), 1) + 1;

    for (std::size_t e : ev_order) {
        const std::string& e_id = net.variable(e).id;
        if (mode == IntegrationMode::full) {
            std::size_t steps = 0;
            while (true) {
                const CompiledNetwork cn(current);
                const auto sp = state_parents(cn, e, is_evidence);
                if (sp.empty()) break;
                // Latest-in-topological-order parent first; such a parent
                // can never have an alternate path into the evidence node.
                const std::size_t p = *std::max_element(
                    sp.begin(), sp.end(), [&](std::size_t a, std::size_t b) {
                        return topo_position(cn, a) < topo_position(cn, b);
                    });
                ReversalStep step;
                current = reverse_arc(current, current.variable(p).id, e_id, step);
                plan.steps.push_back(std::move(step));
                if (++steps > step_cap) {
                    throw IntegrationError("evidential integration did not terminate at '" + e_id +
                                           "'");
                }
            }
        } else {
            // One layer: only the parents present when this node's
            // integration starts are reversed; newly acquired parents stay.
            std::vector<std::size_t> remaining;
            {
                const CompiledNetwork cn(current);
                remaining = state_parents(cn, e, is_evidence);
            }
            while (!remaining.empty()) {
                const CompiledNetwork cn(current);
                std::sort(remaining.begin(), remaining.end(), [&](std::size_t a, std::size_t b) {
                    return topo_position(cn, a) > topo_position(cn, b);
                });
                std::size_t picked = remaining.size();
                for (std::size_t k = 0; k < remaining.size(); ++k) {
                    if (!has_other_path(cn, remaining[k], e)) {
                        picked = k;
                        break;
                    }
                }
                if (picked == remaining.size()) {
                    throw IntegrationError("partial integration stuck at evidence node '" + e_id +
                                           "': every remaining parent arc is blocked by an "
                                           "alternate path");
                }
                ReversalStep step;
                current = reverse_arc(current, current.variable(remaining[picked]).id, e_id, step);
                plan.steps.push_back(std::move(step));
                remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(picked));
            }
        }
    }
    return {std::move(current), std::move(plan)};
}

Network condition_network(const Network& net, const Evidence& evidence) {
    check_evidence(net, evidence);
    const CompiledNetwork cn(net);

    std::vector<bool> is_evidence(net.size(), false);
    std::vector<int> observed(net.size(), -1);
    for (const auto& [id, value] : evidence) {
        const std::size_t v = net.index_of(id);
        is_evidence[v] = true;
        observed[v] = value;
    }

    double evidence_prob = 1.0;
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (!is_evidence[v]) continue;
        for (std::size_t p : cn.parents(v)) {
            if (!is_evidence[p]) {
                throw PreconditionError("evidence node '" + net.variable(v).id +
                                        "' still has state-node parent '" + net.variable(p).id +
                                        "'; run full integration first");
            }
        }
        evidence_prob *=
            cn.row(v, cn.row_index(v, observed))[static_cast<std::size_t>(observed[v])];
    }
    if (!(evidence_prob > 0.0)) {
        throw ImpossibleEvidenceError("observed configuration has probability zero");
    }

    std::vector<Variable> variables;
    std::vector<Cpt> cpts;
    std::vector<int> vals = observed;
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (is_evidence[v]) continue;
        variables.push_back(net.variable(v));

        std::vector<std::size_t> kept;
        bool sliced = false;
        for (std::size_t p : cn.parents(v)) {
            if (is_evidence[p]) {
                sliced = true;
            } else {
                kept.push_back(p);
            }
        }
        if (!sliced) {
            cpts.push_back(net.cpt(v));
            continue;
        }
        // Slice the CPT at the observed values of the evidence parents;
        // the kept parents preserve their relative order.
        std::vector<std::vector<double>> rows;
        for_each_config(cn, kept, vals, [&] {
            const auto row = cn.row(v, cn.row_index(v, vals));
            rows.emplace_back(row.begin(), row.end());
        });
        Cpt cpt;
        cpt.parents = id_list(net, kept);
        cpt.rows = std::move(rows);
        cpts.push_back(std::move(cpt));
    }
    return Network(net.name(), std::move(variables), std::move(cpts));
}

} // namespace bnsim
