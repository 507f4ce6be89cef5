#include "rspin/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rspin/error.hpp"

namespace rspin {

std::string_view to_string(Role role) {
    switch (role) {
    case Role::input: return "input";
    case Role::output: return "output";
    case Role::auxiliary_fixed: return "auxiliary_fixed";
    case Role::internal: return "internal";
    }
    return "internal";
}

Role role_from_string(std::string_view name) {
    if (name == "input") return Role::input;
    if (name == "output") return Role::output;
    if (name == "auxiliary_fixed") return Role::auxiliary_fixed;
    if (name == "internal") return Role::internal;
    throw InvalidInput("unknown node role '" + std::string(name) + "'");
}

SpinNetwork::SpinNetwork(std::size_t n)
    : roles_(n, Role::internal), clamps_(n), incident_(n) {}

std::size_t SpinNetwork::find_edge(std::size_t m, std::size_t n) const {
    const auto& inc = incident_[m];
    for (std::size_t e : inc) {
        const Edge& edge = edges_[e];
        if ((edge.m == m && edge.n == n) || (edge.m == n && edge.n == m)) return e;
    }
    return edges_.size();
}

void SpinNetwork::set_weight(std::size_t m, std::size_t n, double w) {
    if (m >= size() || n >= size())
        throw InvalidInput("edge (" + std::to_string(m) + ", " + std::to_string(n) +
                           ") out of range for network of size " + std::to_string(size()));
    if (m == n) throw InvalidInput("self loop on node " + std::to_string(m));
    if (!std::isfinite(w)) throw InvalidInput("non-finite weight");
    if (m > n) std::swap(m, n);
    std::size_t e = find_edge(m, n);
    if (e < edges_.size()) {
        edges_[e].weight = w;
        return;
    }
    edges_.push_back({m, n, w});
    incident_[m].push_back(edges_.size() - 1);
    incident_[n].push_back(edges_.size() - 1);
}

double SpinNetwork::weight(std::size_t m, std::size_t n) const {
    if (m >= size() || n >= size()) throw InvalidInput("weight lookup out of range");
    if (m == n) return 0.0;
    std::size_t e = find_edge(m, n);
    return e < edges_.size() ? edges_[e].weight : 0.0;
}

void SpinNetwork::scale_weight(std::size_t m, std::size_t n, double factor) {
    if (m >= size() || n >= size()) throw InvalidInput("weight lookup out of range");
    std::size_t e = find_edge(m, n);
    if (e < edges_.size()) edges_[e].weight *= factor;
}

void SpinNetwork::clamp(std::size_t node, PhasePoint at) {
    if (node >= size()) throw InvalidInput("clamp index " + std::to_string(node) + " out of range");
    clamps_[node] = at;
}

void SpinNetwork::unclamp(std::size_t node) {
    if (node >= size()) throw InvalidInput("clamp index " + std::to_string(node) + " out of range");
    clamps_[node].reset();
}

std::vector<std::size_t> SpinNetwork::clamped_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (clamps_[i]) out.push_back(i);
    return out;
}

std::vector<std::size_t> SpinNetwork::free_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (!clamps_[i]) out.push_back(i);
    return out;
}

void SpinNetwork::set_role(std::size_t node, Role role) {
    if (node >= size()) throw InvalidInput("role index " + std::to_string(node) + " out of range");
    roles_[node] = role;
}

double SpinNetwork::max_abs_weight() const {
    double m = 0.0;
    for (const auto& e : edges_) m = std::max(m, std::abs(e.weight));
    return m;
}

double SpinNetwork::max_row_abs_sum() const {
    std::vector<double> rows(size(), 0.0);
    for (const auto& e : edges_) {
        rows[e.m] += std::abs(e.weight);
        rows[e.n] += std::abs(e.weight);
    }
    return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

double SpinNetwork::total_weight() const {
    double s = 0.0;
    for (const auto& e : edges_) s += e.weight;
    return s;
}

double SpinNetwork::total_abs_weight() const {
    double s = 0.0;
    for (const auto& e : edges_) s += std::abs(e.weight);
    return s;
}

void SpinNetwork::validate() const {
    for (std::size_t i = 0; i < size(); ++i)
        if (roles_[i] == Role::auxiliary_fixed && !clamps_[i])
            throw InvalidInput("auxiliary_fixed node " + std::to_string(i) + " is not clamped");
}

} // namespace rspin
