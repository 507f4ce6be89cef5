#include "rspin/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rspin/error.hpp"
#include "rspin/symmetry.hpp"

namespace rspin {

namespace {

// Couplings read off the full-adder Hamiltonian, over local slots
// (x, y, c_in, s, c_out).
struct LocalEdge {
    std::size_t a, b;
    double w;
};
constexpr std::array<LocalEdge, 10> kFullAdderEdges{{
    {4, 3, 2.0}, {4, 0, -2.0}, {4, 1, -2.0}, {4, 2, -2.0},
    {3, 0, -1.0}, {3, 1, -1.0}, {3, 2, -1.0},
    {0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0},
}};

} // namespace

std::array<std::size_t, 5> GateSpec::fa_nodes(std::size_t k) const {
    if (kind == GateKind::full_adder && k == 1) return {0, 1, 2, 3, 4};
    if (kind != GateKind::ripple_carry_adder || k == 0 || k > bits)
        throw InvalidInput("full adder index " + std::to_string(k) + " out of range");
    return {x_nodes[k - 1], y_nodes[k - 1], carries[k - 1], s_nodes[k - 1], carries[k]};
}

GateSpec and_or_gate(int sigma_f) {
    if (sigma_f != 1 && sigma_f != -1) throw InvalidInput("sigma_f must be +1 or -1");
    GateSpec g;
    g.kind = GateKind::and_or;
    g.net = SpinNetwork(4);
    enum { x, y, a, f };
    g.net.set_weight(x, y, 1.0);
    g.net.set_weight(x, a, -2.0);
    g.net.set_weight(y, a, -2.0);
    g.net.set_weight(x, f, -1.0);
    g.net.set_weight(y, f, -1.0);
    g.net.set_weight(a, f, 2.0);
    g.net.set_role(x, Role::input);
    g.net.set_role(y, Role::input);
    g.net.set_role(a, Role::output);
    g.net.set_role(f, Role::auxiliary_fixed);
    g.net.clamp(f, PhasePoint::from_spin(sigma_f, 0.0));
    g.input_nodes = {x, y};
    g.output_nodes = {a};
    g.fixed_nodes = {f};
    g.oracle = and_or_function();
    return g;
}

GateSpec full_adder() {
    GateSpec g;
    g.kind = GateKind::full_adder;
    g.bits = 1;
    g.net = SpinNetwork(5);
    for (const auto& e : kFullAdderEdges) g.net.set_weight(e.a, e.b, e.w);
    for (std::size_t i : {0, 1, 2}) g.net.set_role(i, Role::input);
    for (std::size_t i : {3, 4}) g.net.set_role(i, Role::output);
    g.input_nodes = {0, 1, 2};
    g.output_nodes = {3, 4};
    g.oracle = full_adder_function();
    return g;
}

GateSpec ripple_carry_adder(std::size_t bits, bool condition, std::uint64_t seed) {
    if (bits == 0) throw InvalidInput("ripple-carry adder needs N >= 1");
    GateSpec g;
    g.kind = GateKind::ripple_carry_adder;
    g.bits = bits;
    g.net = SpinNetwork(4 * bits + 1);
    g.carries.push_back(0);
    for (std::size_t k = 1; k <= bits; ++k) {
        g.x_nodes.push_back(k);
        g.y_nodes.push_back(bits + k);
        g.s_nodes.push_back(2 * bits + k);
        g.carries.push_back(3 * bits + k);
    }
    for (std::size_t k = 1; k <= bits; ++k) {
        const auto nodes = g.fa_nodes(k);
        for (const auto& e : kFullAdderEdges) g.net.set_weight(nodes[e.a], nodes[e.b], e.w);
    }
    g.input_nodes.push_back(g.carries[0]);
    g.input_nodes.insert(g.input_nodes.end(), g.x_nodes.begin(), g.x_nodes.end());
    g.input_nodes.insert(g.input_nodes.end(), g.y_nodes.begin(), g.y_nodes.end());
    g.output_nodes = g.s_nodes;
    g.output_nodes.push_back(g.carries[bits]);
    for (std::size_t i : g.input_nodes) g.net.set_role(i, Role::input);
    for (std::size_t i : g.output_nodes) g.net.set_role(i, Role::output);
    g.oracle = adder_function(bits);
    return condition ? condition_weights(g, seed) : g;
}

double conditioning_factor(std::uint64_t p) {
    const double root = std::sqrt(static_cast<double>(p));
    auto floor_root = static_cast<std::uint64_t>(root);
    while (floor_root * floor_root > p) --floor_root;
    while ((floor_root + 1) * (floor_root + 1) <= p) ++floor_root;
    return root / static_cast<double>(floor_root);
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
    if (count == 0) return {};
    double n = static_cast<double>(std::max<std::size_t>(count, 6));
    auto bound = static_cast<std::size_t>(n * (std::log(n) + std::log(std::log(n)))) + 16;
    std::vector<char> composite(bound + 1, 0);
    std::vector<std::uint64_t> primes;
    for (std::size_t i = 2; i <= bound && primes.size() < count; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::size_t j = i * i; j <= bound; j += i) composite[j] = 1;
    }
    return primes;
}

GateSpec condition_weights(const GateSpec& adder, std::uint64_t seed) {
    if (adder.kind != GateKind::ripple_carry_adder) throw InvalidInput("conditioning applies to ripple-carry adders");
    GateSpec g = adder;
    const std::size_t n_fa = g.bits;
    auto pool = first_primes(std::max(kPrimePool, n_fa));
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates: the first n_fa slots become the sample
    for (std::size_t k = 0; k < n_fa; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
        std::swap(pool[k], pool[pick(rng)]);
    }
    g.primes.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_fa));
    g.fa_scale.clear();
    for (std::size_t k = 1; k <= n_fa; ++k) {
        const auto nodes = g.fa_nodes(k);
        g.net.scale_weight(nodes[0], nodes[4], 1.1);
        g.net.scale_weight(nodes[1], nodes[4], 1.1);
        const double factor = conditioning_factor(g.primes[k - 1]);
        for (const auto& e : kFullAdderEdges) g.net.scale_weight(nodes[e.a], nodes[e.b], factor);
        g.fa_scale.push_back(factor);
    }
    g.conditioned = true;
    return g;
}

std::pair<ClampAssignment, BranchEncoding> encode_branches(const GateSpec& adder, std::uint64_t x, std::uint64_t y,
                                                           int c_in, const std::vector<std::size_t>& order,
                                                           std::pair<double, double> arc) {
    if (adder.kind != GateKind::ripple_carry_adder) throw InvalidInput("branch encoding needs a ripple-carry adder");
    const std::size_t bits = adder.bits;
    if (bits > kMaxEncodedBits) throw InvalidInput("branch encoding supports at most 62-bit operands");
    const std::uint64_t limit = std::uint64_t{1} << bits;
    if (x >= limit || y >= limit) throw InvalidInput("operand does not fit in " + std::to_string(bits) + " bits");
    if (c_in != 0 && c_in != 1) throw InvalidInput("carry-in must be 0 or 1");
    const auto [lo, hi] = arc;
    if (!(0.0 < lo && lo < hi && hi < 2.0)) throw InvalidInput("arc must satisfy 0 < lo < hi < 2");
    std::vector<char> listed(bits + 1, 0);
    for (std::size_t pos : order) {
        if (pos > bits) throw InvalidInput("flip position " + std::to_string(pos) + " exceeds N = " + std::to_string(bits));
        if (listed[pos]) throw InvalidInput("duplicate flip position " + std::to_string(pos));
        listed[pos] = 1;
    }

    BranchEncoding enc;
    enc.bits = bits;
    enc.order = order;
    enc.arc = arc;
    enc.flip_sequence = order;
    const double spacing = order.empty() ? 0.0 : (hi - lo) / static_cast<double>(order.size());
    for (std::size_t j = 0; j < order.size(); ++j)
        enc.placement.push_back({{order[j]}, hi - static_cast<double>(j) * spacing});
    GroupPlacement base{{}, lo};
    for (std::size_t pos = 0; pos <= bits; ++pos)
        if (!listed[pos]) base.positions.push_back(pos);
    if (!base.positions.empty()) enc.placement.push_back(std::move(base));

    ClampAssignment clamps;
    auto place = [&](std::size_t node, bool bit, double offset) {
        clamps.emplace_back(node, PhasePoint(bit ? offset : offset - 2.0));
    };
    for (const auto& group : enc.placement) {
        for (std::size_t pos : group.positions) {
            if (pos == 0) {
                place(adder.carries[0], c_in == 1, group.offset);
            } else {
                place(adder.x_nodes[pos - 1], (x >> (pos - 1)) & 1U, group.offset);
                place(adder.y_nodes[pos - 1], (y >> (pos - 1)) & 1U, group.offset);
            }
        }
    }
    std::sort(clamps.begin(), clamps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    BranchArgs args{x, y, c_in};
    enc.branch_args.push_back(args);
    for (std::size_t pos : order) {
        if (pos == 0) {
            args.c ^= 1;
        } else {
            args.x ^= std::uint64_t{1} << (pos - 1);
            args.y ^= std::uint64_t{1} << (pos - 1);
        }
        enc.branch_args.push_back(args);
    }
    return {std::move(clamps), std::move(enc)};
}

void apply_clamps(SpinNetwork& net, const ClampAssignment& clamps) {
    for (const auto& [node, at] : clamps) net.clamp(node, at);
}

std::vector<BranchResult> enumerate_branches(const BranchEncoding& enc) {
    std::vector<BranchResult> out;
    for (std::size_t j = 0; j < enc.branch_args.size(); ++j) {
        BranchResult r;
        if (j > 0) r.flipped = {enc.order[j - 1]};
        r.args = enc.branch_args[j];
        r.expected_sum = static_cast<std::uint64_t>(r.args.c) + r.args.x + r.args.y;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<double> branch_rotations(const BranchEncoding& enc) {
    // A group at offset o flips when the rotation reaches 2 - o.
    std::vector<double> crossing;
    for (const auto& g : enc.placement) crossing.push_back(kHalfPeriod - g.offset);
    std::vector<double> mids;
    for (std::size_t j = 0; j < enc.branch_args.size(); ++j) {
        double from = j == 0 ? crossing.back() - kHalfPeriod : crossing[j - 1];
        double to = j < crossing.size() ? crossing[j] : crossing.front() + kHalfPeriod;
        mids.push_back(0.5 * (from + to));
    }
    return mids;
}

std::uint64_t read_sum(const GateSpec& adder, const State& points, double rotation) {
    if (adder.kind != GateKind::ripple_carry_adder) throw InvalidInput("read_sum needs a ripple-carry adder");
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < adder.bits; ++k)
        if (points.at(adder.s_nodes[k]).rotated(rotation).sigma() > 0) sum |= std::uint64_t{1} << k;
    if (points.at(adder.carries[adder.bits]).rotated(rotation).sigma() > 0) sum |= std::uint64_t{1} << adder.bits;
    return sum;
}

DecodeReport decode_outputs(const TerminalState& term, const BranchEncoding& enc, const GateSpec& adder) {
    if (term.points.size() != adder.net.size()) throw InvalidInput("terminal state does not match the adder");
    DecodeReport rep;
    rep.certified = term.converged;
    const auto expected = enumerate_branches(enc);
    const auto rotations = branch_rotations(enc);
    for (std::size_t j = 0; j < expected.size(); ++j) {
        DecodedBranch d;
        d.flipped = expected[j].flipped;
        d.rotation = rotations[j];
        d.observed_sum = read_sum(adder, term.points, rotations[j]);
        d.expected_sum = expected[j].expected_sum;
        d.correct = d.observed_sum == d.expected_sum;
        rep.branches.push_back(std::move(d));
    }
    return rep;
}

std::optional<State> ideal_terminal_state(const GateSpec& adder, const BranchEncoding& enc,
                                          const ClampAssignment& clamps) {
    const std::size_t bits = adder.bits;
    // Argument sets over one half turn: after each group crossing in order.
    std::vector<BranchArgs> half{enc.branch_args.front()};
    for (const auto& g : enc.placement) {
        BranchArgs a = half.back();
        for (std::size_t pos : g.positions) {
            if (pos == 0) {
                a.c ^= 1;
            } else {
                a.x ^= std::uint64_t{1} << (pos - 1);
                a.y ^= std::uint64_t{1} << (pos - 1);
            }
        }
        half.push_back(a);
    }
    // Wire values: s_k is bit k-1 of the sum, c_k the carry out of bit k-1.
    auto wire = [&](const BranchArgs& a, bool carry, std::size_t k) -> bool {
        if (!carry) return ((a.x + a.y + static_cast<std::uint64_t>(a.c)) >> (k - 1)) & 1U;
        const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
        return (((a.x & mask) + (a.y & mask) + static_cast<std::uint64_t>(a.c)) >> k) & 1U;
    };

    State s(adder.net.size());
    for (const auto& [node, at] : clamps) s[node] = at;
    for (bool carry : {false, true}) {
        for (std::size_t k = 1; k <= bits; ++k) {
            std::size_t node = carry ? adder.carries[k] : adder.s_nodes[k - 1];
            std::size_t flips = 0, at = 0;
            for (std::size_t j = 1; j < half.size(); ++j) {
                if (wire(half[j], carry, k) != wire(half[j - 1], carry, k)) {
                    ++flips;
                    at = j - 1;
                }
            }
            if (flips != 1) return std::nullopt;
            const double offset = enc.placement[at].offset;
            s[node] = PhasePoint(wire(half.front(), carry, k) ? offset : offset - 2.0);
        }
    }
    return s;
}

} // namespace rspin

namespace rspin {

std::vector<std::size_t> argument_nodes(const GateSpec& gate) {
    std::vector<std::size_t> nodes = gate.input_nodes;
    nodes.insert(nodes.end(), gate.fixed_nodes.begin(), gate.fixed_nodes.end());
    return nodes;
}

ClampAssignment place_chain(const GateSpec& gate, const Spins& base_args, const FlipChain& chain,
                            std::pair<double, double> arc) {
    const auto nodes = argument_nodes(gate);
    if (base_args.size() != nodes.size())
        throw InvalidInput("expected " + std::to_string(nodes.size()) + " arguments, got " +
                           std::to_string(base_args.size()));
    if (chain.arity != nodes.size()) throw InvalidInput("chain arity does not match the gate");
    chain.validate();
    const auto [lo, hi] = arc;
    if (!(0.0 < lo && lo < hi && hi < 2.0)) throw InvalidInput("arc must satisfy 0 < lo < hi < 2");

    std::vector<std::vector<std::size_t>> groups = chain.steps;
    std::vector<char> named(nodes.size(), 0);
    for (const auto& inc : groups)
        for (std::size_t i : inc) named[i] = 1;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!named[i]) rest.push_back(i);
    if (!rest.empty()) groups.push_back(rest);

    ClampAssignment clamps;
    const double spacing = groups.size() > 1 ? (hi - lo) / static_cast<double>(groups.size() - 1) : 0.0;
    for (std::size_t j = 0; j < groups.size(); ++j) {
        const double offset = hi - static_cast<double>(j) * spacing;
        for (std::size_t arg : groups[j])
            clamps.emplace_back(nodes[arg], PhasePoint(base_args[arg] > 0 ? offset : offset - 2.0));
    }
    std::sort(clamps.begin(), clamps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return clamps;
}

GateChainCheck check_gate_chain(const GateSpec& gate, const State& points, double cluster_tol) {
    if (points.size() != gate.net.size()) throw InvalidInput("state does not match the gate");
    const auto args = argument_nodes(gate);
    GateChainCheck res;
    for (const auto& entry : chain_readout(points, cluster_tol).entries) {
        Spins in;
        for (std::size_t n : args) in.push_back(entry.sigma[n]);
        const Spins want = truth(gate.oracle, in);
        bool ok = true;
        for (std::size_t j = 0; j < gate.output_nodes.size(); ++j)
            ok = ok && entry.sigma[gate.output_nodes[j]] == want[j];
        ++res.entries;
        if (ok) ++res.consistent;
    }
    return res;
}

} // namespace rspin

namespace rspin {

Spins expected_free_assignment(const GateSpec& gate, const Spins& args) {
    const auto arg_nodes = argument_nodes(gate);
    if (args.size() != arg_nodes.size()) throw InvalidInput("argument count does not match the gate");
    Spins full(gate.net.size(), 0);
    for (std::size_t i = 0; i < args.size(); ++i) full[arg_nodes[i]] = args[i];
    if (gate.kind == GateKind::ripple_carry_adder) {
        for (std::size_t k = 1; k <= gate.bits; ++k) {
            const auto nodes = gate.fa_nodes(k);
            const Spins out = truth(full_adder_function(), {full[nodes[0]], full[nodes[1]], full[nodes[2]]});
            full[nodes[3]] = out[0];
            full[nodes[4]] = out[1];
        }
    } else {
        const Spins out = truth(gate.oracle, args);
        for (std::size_t j = 0; j < out.size(); ++j) full[gate.output_nodes[j]] = out[j];
    }
    return full;
}

GateVerification verify_gate(const GateSpec& gate, double tol) {
    const std::size_t n = gate.net.size();
    std::vector<char> is_arg(n, 0);
    for (std::size_t i : gate.input_nodes) is_arg[i] = 1;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_arg[i] && !gate.net.is_clamped(i)) free.push_back(i);
    if (free.size() > kMaxEnumeratedSpins) throw CapacityError("too many free spins for exhaustive verification");
    if (gate.input_nodes.size() > 20) throw CapacityError("too many argument assignments for exhaustive verification");

    GateVerification res;
    bool first_consistent = true, any_violator = false;
    const std::size_t n_in = gate.input_nodes.size();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n_in); ++a) {
        Spins sigma(n, 1);
        for (std::size_t i : gate.fixed_nodes) sigma[i] = gate.net.clamp_of(i)->sigma();
        Spins args;
        for (std::size_t k = 0; k < n_in; ++k) {
            sigma[gate.input_nodes[k]] = ((a >> k) & 1U) ? 1 : -1;
            args.push_back(sigma[gate.input_nodes[k]]);
        }
        for (std::size_t i : gate.fixed_nodes) args.push_back(sigma[i]);
        const Spins want = expected_free_assignment(gate, args);
        ++res.assignments;

        std::vector<std::optional<int>> partial(n);
        for (std::size_t i = 0; i < n; ++i)
            if (is_arg[i] || gate.net.is_clamped(i)) partial[i] = sigma[i];
        const GroundState gs = restricted_ground_state(gate.net, partial);
        for (std::size_t j = 0; j < gate.output_nodes.size(); ++j) {
            if (gs.sigma[gate.output_nodes[j]] != want[gate.output_nodes[j]]) {
                res.truth_ok = false;
                res.failures.push_back("ground state disagrees with the oracle for argument mask " + std::to_string(a));
                break;
            }
        }

        double consistent = 0.0, violator = -1e300;
        for (std::uint64_t f = 0; f < (std::uint64_t{1} << free.size()); ++f) {
            bool ok = true;
            for (std::size_t k = 0; k < free.size(); ++k) {
                sigma[free[k]] = ((f >> k) & 1U) ? 1 : -1;
                ok = ok && sigma[free[k]] == want[free[k]];
            }
            const double cut = discrete_cut(gate.net, sigma);
            if (ok) consistent = cut;
            else violator = std::max(violator, cut);
        }
        if (first_consistent) {
            res.consistent_cut = consistent;
            first_consistent = false;
        } else if (std::abs(consistent - res.consistent_cut) > tol) {
            res.degeneracy_ok = false;
            res.failures.push_back("consistent cut differs for argument mask " + std::to_string(a));
        }
        if (!free.empty()) {
            if (!any_violator || violator > res.best_violator_cut) res.best_violator_cut = violator;
            any_violator = true;
        }
    }
    if (any_violator && !(res.best_violator_cut < res.consistent_cut - tol)) {
        res.degeneracy_ok = false;
        res.failures.push_back("a violating configuration reaches the consistent cut");
    }
    return res;
}

} // namespace rspin
