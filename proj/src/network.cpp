#include "bnsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bnsim {

Network::Network(std::string name, std::vector<Variable> variables, std::vector<Cpt> cpts)
    : name_(std::move(name)), variables_(std::move(variables)), cpts_(std::move(cpts)) {
    if (variables_.size() != cpts_.size()) {
        throw std::invalid_argument("Network: one Cpt per Variable required");
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        // First declaration wins; duplicates surface via validate_network.
        index_.emplace(variables_[i].id, i);
    }
}

std::optional<std::size_t> Network::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Network::index_of(std::string_view id) const {
    auto idx = find(id);
    if (!idx) throw StructuralError("unknown variable '" + std::string(id) + "'");
    return *idx;
}

namespace {

// Kahn's algorithm over parent indexes; ties picked in declaration order.
// Returns variable indexes, or nullopt if a cycle remains.
std::optional<std::vector<std::size_t>> kahn_order(const Network& net,
                                                   const std::vector<std::vector<std::size_t>>& parents) {
    const std::size_t n = net.size();
    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = parents[i].size();

    std::vector<bool> placed(n, false);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!placed[i] && remaining[i] == 0) {
                pick = i;
                break;
            }
        }
        if (pick == n) return std::nullopt;
        placed[pick] = true;
        order.push_back(pick);
        for (std::size_t i = 0; i < n; ++i) {
            if (placed[i]) continue;
            for (std::size_t p : parents[i]) {
                if (p == pick) --remaining[i];
            }
        }
    }
    return order;
}

// Parent index lists; unresolvable parents are skipped (the caller is
// expected to have reported them already).
std::vector<std::vector<std::size_t>> resolved_parents(const Network& net) {
    std::vector<std::vector<std::size_t>> parents(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (const std::string& pid : net.cpt(i).parents) {
            if (auto idx = net.find(pid)) parents[i].push_back(*idx);
        }
    }
    return parents;
}

} // namespace

std::vector<Violation> validate_network(const Network& net) {
    std::vector<Violation> out;
    auto add = [&out](const std::string& where, std::string message) {
        out.push_back({where, std::move(message)});
    };

    std::map<std::string_view, int> id_count;
    for (const Variable& v : net.variables()) ++id_count[v.id];
    for (const auto& [id, count] : id_count) {
        if (count > 1) add(std::string(id), "duplicate variable id");
    }

    bool structure_ok = true;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Variable& var = net.variable(i);
        const Cpt& cpt = net.cpt(i);

        if (var.states.size() < 2) {
            add(var.id, "variable needs at least 2 states");
        }
        std::map<std::string_view, int> state_count;
        for (const std::string& s : var.states) ++state_count[s];
        for (const auto& [label, count] : state_count) {
            if (count > 1) add(var.id, "duplicate state label '" + std::string(label) + "'");
        }

        bool parents_ok = true;
        std::map<std::string_view, int> parent_count;
        for (const std::string& pid : cpt.parents) {
            ++parent_count[pid];
            if (!net.find(pid)) {
                add(var.id, "dangling parent '" + pid + "'");
                parents_ok = false;
            } else if (pid == var.id) {
                add(var.id, "variable listed as its own parent");
                parents_ok = false;
            }
        }
        for (const auto& [pid, count] : parent_count) {
            if (count > 1) add(var.id, "duplicate parent '" + std::string(pid) + "'");
        }
        if (!parents_ok) {
            structure_ok = false;
            continue;
        }

        std::size_t expected_rows = 1;
        for (const std::string& pid : cpt.parents) {
            expected_rows *= net.variable(net.index_of(pid)).states.size();
        }
        if (cpt.rows.size() != expected_rows) {
            std::ostringstream msg;
            msg << "wrong row count: expected " << expected_rows << ", got " << cpt.rows.size();
            add(var.id, msg.str());
            continue;
        }
        for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
            const std::vector<double>& row = cpt.rows[r];
            std::string where = var.id + " row " + std::to_string(r);
            if (row.size() != var.states.size()) {
                add(where, "row width does not match state count");
                continue;
            }
            double sum = 0.0;
            bool in_range = true;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0)) in_range = false;
                sum += p;
            }
            if (!in_range) add(where, "probability outside [0,1]");
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                std::ostringstream msg;
                msg << "row sums to " << sum << ", expected 1";
                add(where, msg.str());
            }
        }
    }

    if (structure_ok && !kahn_order(net, resolved_parents(net))) {
        add(net.name().empty() ? "network" : net.name(), "graph contains a cycle");
    }
    return out;
}

std::string format_violations(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (const Violation& v : violations) {
        os << v.where << ": " << v.message << "\n";
    }
    return os.str();
}

std::vector<std::string> topological_order(const Network& net) {
    auto order = kahn_order(net, resolved_parents(net));
    if (!order) throw StructuralError("graph contains a cycle");
    std::vector<std::string> ids;
    ids.reserve(order->size());
    for (std::size_t i : *order) ids.push_back(net.variable(i).id);
    return ids;
}

std::vector<double> local_distribution(const Network& net, std::string_view node,
                                       const Assignment& parent_values) {
    const std::size_t v = net.index_of(node);
    const Cpt& cpt = net.cpt(v);

    std::size_t row = 0;
    for (const std::string& pid : cpt.parents) {
        const Variable& parent = net.variable(net.index_of(pid));
        auto it = parent_values.find(pid);
        if (it == parent_values.end()) {
            throw PreconditionError("missing value for parent '" + pid + "' of '" +
                                    std::string(node) + "'");
        }
        if (it->second < 0 || static_cast<std::size_t>(it->second) >= parent.states.size()) {
            throw PreconditionError("state index out of range for parent '" + pid + "'");
        }
        row = row * parent.states.size() + static_cast<std::size_t>(it->second);
    }
    return cpt.rows.at(row);
}

double joint_probability(const Network& net, const Assignment& full) {
    double p = 1.0;
    for (const Variable& var : net.variables()) {
        auto it = full.find(var.id);
        if (it == full.end()) {
            throw PreconditionError("joint_probability: '" + var.id + "' unassigned");
        }
        if (it->second < 0 || static_cast<std::size_t>(it->second) >= var.states.size()) {
            throw PreconditionError("state index out of range for '" + var.id + "'");
        }
        p *= local_distribution(net, var.id, full)[static_cast<std::size_t>(it->second)];
    }
    return p;
}

CompiledNetwork::CompiledNetwork(const Network& net) : net_(&net) {
    const std::size_t n = net.size();
    card_.resize(n);
    parents_.resize(n);
    children_.resize(n);
    strides_.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        card_[i] = static_cast<int>(net.variable(i).states.size());
        for (const std::string& pid : net.cpt(i).parents) {
            parents_[i].push_back(net.index_of(pid));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p : parents_[i]) children_[p].push_back(i);
        strides_[i].resize(parents_[i].size());
        std::size_t stride = 1;
        for (std::size_t k = parents_[i].size(); k-- > 0;) {
            strides_[i][k] = stride;
            stride *= static_cast<std::size_t>(card_[parents_[i][k]]);
        }
    }

    auto order = kahn_order(net, parents_);
    if (!order) throw StructuralError("graph contains a cycle");
    topo_ = std::move(*order);
}

std::size_t CompiledNetwork::row_index(std::size_t var, std::span<const int> values) const {
    std::size_t row = 0;
    const auto& ps = parents_[var];
    const auto& st = strides_[var];
    for (std::size_t k = 0; k < ps.size(); ++k) {
        row += static_cast<std::size_t>(values[ps[k]]) * st[k];
    }
    return row;
}

std::span<const double> CompiledNetwork::row(std::size_t var, std::size_t row_idx) const {
    const std::vector<double>& r = net_->cpt(var).rows[row_idx];
    return {r.data(), r.size()};
}

NetworkBuilder& NetworkBuilder::node(std::string id, std::vector<std::string> states,
                                     std::vector<std::string> parents,
                                     std::vector<std::vector<double>> rows) {
    variables_.push_back({std::move(id), std::move(states)});
    cpts_.push_back({std::move(parents), std::move(rows)});
    return *this;
}

Network NetworkBuilder::build() && {
    return Network(std::move(name_), std::move(variables_), std::move(cpts_));
}

void check_evidence(const Network& net, const Evidence& ev) {
    for (const auto& [id, value] : ev) {
        const std::size_t v = net.index_of(id);
        if (value < 0 || static_cast<std::size_t>(value) >= net.variable(v).states.size()) {
            throw PreconditionError("evidence value out of range for '" + id + "'");
        }
    }
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 2;
    if (dynamic_cast<const ValidationError*>(&e)) return 3;
    if (dynamic_cast<const ImpossibleEvidenceError*>(&e)) return 4;
    if (dynamic_cast<const CapacityError*>(&e)) return 5;
    if (dynamic_cast<const UndefinedEstimateError*>(&e)) return 6;
    if (dynamic_cast<const Error*>(&e)) return 7;
    return 70;
}

} // namespace bnsim
