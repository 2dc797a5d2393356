#include "bnsim/samplers.hpp"

#include <algorithm>
#include <cmath>

namespace bnsim {

namespace {

constexpr std::uint64_t kGibbsInitRetries = 1000;

int draw_from_row(std::span<const double> row, double u) {
    double cum = 0.0;
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
        cum += row[j];
        if (u < cum) return static_cast<int>(j);
    }
    return static_cast<int>(row.size() - 1);
}

// Dense scratch state shared by the run loops.
struct RunState {
    CompiledNetwork cn;
    std::vector<int> observed;           // -1 for unobserved
    std::vector<std::size_t> ev_nodes;   // declaration order
    std::vector<std::size_t> state_nodes;

    RunState(const Network& net, const Evidence& evidence) : cn(net), observed(net.size(), -1) {
        check_evidence(net, evidence);
        for (const auto& [id, value] : evidence) observed[net.index_of(id)] = value;
        for (std::size_t v = 0; v < net.size(); ++v) {
            if (observed[v] >= 0) {
                ev_nodes.push_back(v);
            } else {
                state_nodes.push_back(v);
            }
        }
    }

    void sample_forward(std::vector<int>& vals, RandomStream& rng) const {
        for (std::size_t v : cn.topo_order()) {
            if (vals[v] >= 0) continue;
            vals[v] = draw_from_row(cn.row(v, cn.row_index(v, vals)), rng.next_uniform());
        }
    }

    double weight(const std::vector<int>& vals) const {
        double w = 1.0;
        for (std::size_t e : ev_nodes) {
            w *= cn.row(e, cn.row_index(e, vals))[static_cast<std::size_t>(observed[e])];
        }
        return w;
    }

    Estimate make_estimate(const Network& net, std::uint64_t trials) const {
        Estimate est;
        est.trials_run = trials;
        est.nodes.reserve(state_nodes.size());
        est.tallies.reserve(state_nodes.size());
        for (std::size_t v : state_nodes) {
            est.nodes.push_back(net.variable(v).id);
            est.tallies.emplace_back(net.variable(v).states.size(), 0.0);
        }
        return est;
    }

    void tally(Estimate& est, const std::vector<int>& vals, double w) const {
        for (std::size_t k = 0; k < state_nodes.size(); ++k) {
            est.tallies[k][static_cast<std::size_t>(vals[state_nodes[k]])] += w;
        }
        est.total_weight += w;
    }
};

} // namespace

std::vector<std::vector<double>> Estimate::posteriors() const {
    if (!defined()) {
        throw UndefinedEstimateError("estimate undefined: zero total weight");
    }
    std::vector<std::vector<double>> rows = tallies;
    for (auto& row : rows) {
        for (double& x : row) x /= total_weight;
    }
    return rows;
}

std::vector<double> Estimate::posterior_row(std::string_view id) const {
    if (!defined()) {
        throw UndefinedEstimateError("estimate undefined: zero total weight");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == id) {
            std::vector<double> row = tallies[i];
            for (double& x : row) x /= total_weight;
            return row;
        }
    }
    throw StructuralError("no estimate row for '" + std::string(id) + "'");
}

int draw_category(std::span<const double> row, RandomStream& rng) {
    double sum = 0.0;
    for (double p : row) sum += p;
    if (row.empty() || std::abs(sum - 1.0) > kRowSumTolerance) {
        throw PreconditionError("draw_category: row is not normalized");
    }
    return draw_from_row(row, rng.next_uniform());
}

Assignment forward_sample(const Network& net, const Assignment& clamped, RandomStream& rng) {
    RunState rs(net, clamped);
    std::vector<int> vals = rs.observed;
    rs.sample_forward(vals, rng);
    Assignment out;
    for (std::size_t v = 0; v < net.size(); ++v) out[net.variable(v).id] = vals[v];
    return out;
}

double trial_weight(const Network& net, const Evidence& evidence, const Assignment& assignment) {
    RunState rs(net, evidence);
    std::vector<int> vals = rs.observed;
    for (const auto& [id, value] : assignment) {
        const std::size_t v = net.index_of(id);
        if (value < 0 || static_cast<std::size_t>(value) >= net.variable(v).states.size()) {
            throw PreconditionError("state index out of range for '" + id + "'");
        }
        if (vals[v] < 0) vals[v] = value;  // evidence values take precedence
    }
    for (std::size_t e : rs.ev_nodes) {
        for (std::size_t p : rs.cn.parents(e)) {
            if (vals[p] < 0) {
                throw PreconditionError("trial_weight: parent '" + net.variable(p).id +
                                        "' of evidence node '" + net.variable(e).id +
                                        "' unassigned");
            }
        }
    }
    return rs.weight(vals);
}

Trial sample_trial(const Network& net, const Evidence& evidence, RandomStream& rng) {
    RunState rs(net, evidence);
    std::vector<int> vals = rs.observed;
    rs.sample_forward(vals, rng);
    Trial trial;
    trial.weight = rs.weight(vals);
    for (std::size_t v : rs.state_nodes) trial.assignment[net.variable(v).id] = vals[v];
    return trial;
}

std::vector<double> markov_blanket_distribution(const Network& net, std::string_view node,
                                                const Assignment& others) {
    const CompiledNetwork cn(net);
    const std::size_t target = net.index_of(node);

    std::vector<int> vals(net.size(), -1);
    for (const auto& [id, value] : others) {
        const std::size_t v = net.index_of(id);
        if (v == target) continue;
        if (value < 0 || static_cast<std::size_t>(value) >= net.variable(v).states.size()) {
            throw PreconditionError("state index out of range for '" + id + "'");
        }
        vals[v] = value;
    }
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (v != target && vals[v] < 0) {
            throw PreconditionError("markov_blanket_distribution: '" + net.variable(v).id +
                                    "' unassigned");
        }
    }

    const std::size_t card = static_cast<std::size_t>(cn.cardinality(target));
    std::vector<double> scores(card, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < card; ++j) {
        vals[target] = static_cast<int>(j);
        double s = cn.row(target, cn.row_index(target, vals))[j];
        for (std::size_t c : cn.children(target)) {
            s *= cn.row(c, cn.row_index(c, vals))[static_cast<std::size_t>(vals[c])];
        }
        scores[j] = s;
        total += s;
    }
    if (!(total > 0.0)) {
        throw SamplingError("markov blanket of '" + std::string(node) +
                            "': assignment is inconsistent (all scores zero)");
    }
    for (double& s : scores) s /= total;
    return scores;
}

Estimate run_logic_sampling(const Network& net, const Evidence& evidence, std::uint64_t trials,
                            const RandomStream& rng) {
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    RunState rs(net, evidence);
    Estimate est = rs.make_estimate(net, trials);

    std::vector<int> vals(net.size());
    for (std::uint64_t t = 0; t < trials; ++t) {
        RandomStream stream = rng.substream(t);
        std::fill(vals.begin(), vals.end(), -1);
        rs.sample_forward(vals, stream);
        bool match = true;
        for (std::size_t e : rs.ev_nodes) {
            if (vals[e] != rs.observed[e]) {
                match = false;
                break;
            }
        }
        if (match) {
            ++est.trials_accepted;
            rs.tally(est, vals, 1.0);
        }
    }
    return est;
}

Estimate run_likelihood_weighting(const Network& net, const Evidence& evidence,
                                  std::uint64_t trials, const RandomStream& rng) {
    if (trials < 1) throw PreconditionError("trials must be >= 1");
    RunState rs(net, evidence);
    Estimate est = rs.make_estimate(net, trials);

    std::vector<int> vals(net.size());
    for (std::uint64_t t = 0; t < trials; ++t) {
        RandomStream stream = rng.substream(t);
        vals = rs.observed;
        rs.sample_forward(vals, stream);
        const double w = rs.weight(vals);
        if (w > 0.0) rs.tally(est, vals, w);
    }
    return est;
}

Estimate run_lw_integrated(const Network& net, const Evidence& evidence, std::uint64_t trials,
                           const RandomStream& rng, IntegrationMode mode) {
    auto [integrated, plan] = integrate_evidence(net, evidence, mode);
    if (mode == IntegrationMode::full) {
        const Network conditioned = condition_network(integrated, evidence);
        // No evidence left: plain forward sampling, every weight 1.
        return run_likelihood_weighting(conditioned, Evidence{}, trials, rng);
    }
    return run_likelihood_weighting(integrated, evidence, trials, rng);
}

Estimate run_gibbs(const Network& net, const Evidence& evidence, std::uint64_t sweeps,
                   const RandomStream& rng, std::uint64_t burn_in) {
    if (sweeps < 1) throw PreconditionError("sweeps must be >= 1");
    if (sweeps <= burn_in) throw PreconditionError("sweeps must exceed burn_in");
    RunState rs(net, evidence);
    Estimate est = rs.make_estimate(net, sweeps);

    std::vector<std::size_t> free_topo;  // sweep order
    for (std::size_t v : rs.cn.topo_order()) {
        if (rs.observed[v] < 0) free_topo.push_back(v);
    }

    RandomStream init_stream = rng.substream(0);
    std::vector<int> vals;
    bool initialized = false;
    for (std::uint64_t attempt = 0; attempt < kGibbsInitRetries; ++attempt) {
        vals = rs.observed;
        rs.sample_forward(vals, init_stream);
        if (rs.weight(vals) > 0.0) {
            initialized = true;
            break;
        }
    }
    if (!initialized) {
        throw SamplingError("gibbs initialization failed: no start state consistent with the "
                            "evidence after " +
                            std::to_string(kGibbsInitRetries) + " attempts");
    }

    std::vector<double> scores;
    for (std::uint64_t s = 0; s < sweeps; ++s) {
        RandomStream stream = rng.substream(1 + s);
        for (std::size_t v : free_topo) {
            const std::size_t card = static_cast<std::size_t>(rs.cn.cardinality(v));
            scores.assign(card, 0.0);
            double total = 0.0;
            for (std::size_t j = 0; j < card; ++j) {
                vals[v] = static_cast<int>(j);
                double score = rs.cn.row(v, rs.cn.row_index(v, vals))[j];
                for (std::size_t c : rs.cn.children(v)) {
                    score *= rs.cn.row(c, rs.cn.row_index(c, vals))[static_cast<std::size_t>(vals[c])];
                }
                scores[j] = score;
                total += score;
            }
            if (!(total > 0.0)) {
                throw SamplingError("gibbs sweep hit an inconsistent state at '" +
                                    net.variable(v).id + "'");
            }
            for (double& x : scores) x /= total;
            vals[v] = draw_from_row({scores.data(), scores.size()}, stream.next_uniform());
        }
        if (s >= burn_in) rs.tally(est, vals, 1.0);
    }
    return est;
}

} // namespace bnsim
