#include "bnsim/exact.hpp"

#include <limits>

namespace bnsim {

const std::vector<double>& ExactResult::posterior(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == id) return posteriors[i];
    }
    throw StructuralError("no posterior for '" + std::string(id) + "'");
}

ExactResult exact_inference(const Network& net, const Evidence& evidence,
                            std::uint64_t state_cap) {
    check_evidence(net, evidence);
    const CompiledNetwork cn(net);
    const std::size_t n = net.size();

    std::uint64_t joint_size = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t card = net.variable(i).states.size();
        if (joint_size > state_cap / card) {
            throw CapacityError("joint state space exceeds cap of " + std::to_string(state_cap) +
                                " configurations");
        }
        joint_size *= card;
    }

    std::vector<int> values(n, 0);
    std::vector<bool> fixed(n, false);
    std::vector<std::size_t> free_vars;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = evidence.find(net.variable(i).id);
        if (it != evidence.end()) {
            values[i] = it->second;
            fixed[i] = true;
        } else {
            free_vars.push_back(i);
        }
    }

    std::vector<std::vector<double>> tallies(n);
    for (std::size_t i = 0; i < n; ++i) tallies[i].assign(net.variable(i).states.size(), 0.0);

    double total = 0.0;
    // Odometer over the free variables; evidence stays clamped.
    bool done = false;
    while (!done) {
        double p = 1.0;
        for (std::size_t v = 0; v < n; ++v) {
            p *= cn.row(v, cn.row_index(v, values))[static_cast<std::size_t>(values[v])];
        }
        total += p;
        for (std::size_t v = 0; v < n; ++v) {
            tallies[v][static_cast<std::size_t>(values[v])] += p;
        }

        done = true;
        for (std::size_t k = free_vars.size(); k-- > 0;) {
            const std::size_t v = free_vars[k];
            if (++values[v] < cn.cardinality(v)) {
                done = false;
                break;
            }
            values[v] = 0;
        }
    }

    if (!(total > 0.0)) {
        throw ImpossibleEvidenceError("evidence has probability zero; posteriors undefined");
    }

    ExactResult result;
    result.evidence_probability = evidence.empty() ? 1.0 : total;
    result.nodes.reserve(n);
    result.posteriors.reserve(n);
    for (std::size_t v = 0; v < n; ++v) {
        result.nodes.push_back(net.variable(v).id);
        std::vector<double>& row = tallies[v];
        for (double& x : row) x /= total;
        result.posteriors.push_back(std::move(row));
    }
    return result;
}

} // namespace bnsim
