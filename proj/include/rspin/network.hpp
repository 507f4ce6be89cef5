#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rspin/phase.hpp"

namespace rspin {

enum class Role { input, output, auxiliary_fixed, internal };

std::string_view to_string(Role role);
Role role_from_string(std::string_view name);

struct Edge {
    std::size_t m;
    std::size_t n;
    double weight;
};

// Weighted symmetric graph with per-node roles and clamp placements.
//
// Weights are stored once per unordered pair (m < n); A_{m,n} = A_{n,m} and
// the diagonal is zero by construction. Setting a weight to zero keeps the
// edge slot, so edge indices are stable for the lifetime of the network.
class SpinNetwork {
public:
    SpinNetwork() = default;
    explicit SpinNetwork(std::size_t n);

    std::size_t size() const { return roles_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    // Sets A_{m,n} = A_{n,m} = w. Self loops and out-of-range indices throw.
    void set_weight(std::size_t m, std::size_t n, double w);
    double weight(std::size_t m, std::size_t n) const;
    // Multiplies an existing weight; absent edges stay absent.
    void scale_weight(std::size_t m, std::size_t n, double factor);

    void clamp(std::size_t node, PhasePoint at);
    void unclamp(std::size_t node);
    bool is_clamped(std::size_t node) const { return clamps_.at(node).has_value(); }
    const std::optional<PhasePoint>& clamp_of(std::size_t node) const { return clamps_.at(node); }
    std::vector<std::size_t> clamped_nodes() const;
    std::vector<std::size_t> free_nodes() const;

    void set_role(std::size_t node, Role role);
    Role role(std::size_t node) const { return roles_.at(node); }

    double max_abs_weight() const;
    // max over m of sum_n |A_{m,n}|; bounds the stiffness of the regularized flow.
    double max_row_abs_sum() const;
    double total_weight() const;       // sum over m < n of A_{m,n}
    double total_abs_weight() const;   // sum over m < n of |A_{m,n}|

    // Throws InvalidInput if an auxiliary_fixed node is not clamped.
    void validate() const;

    // Edges incident to one node, as indices into edges().
    const std::vector<std::size_t>& incident(std::size_t node) const { return incident_.at(node); }

private:
    std::size_t find_edge(std::size_t m, std::size_t n) const;

    std::vector<Role> roles_;
    std::vector<std::optional<PhasePoint>> clamps_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
};

} // namespace rspin
