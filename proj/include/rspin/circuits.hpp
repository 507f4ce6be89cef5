#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rspin/dynamics.hpp"
#include "rspin/network.hpp"
#include "rspin/oracle.hpp"
#include "rspin/phase.hpp"

namespace rspin {

enum class GateKind { and_or, full_adder, ripple_carry_adder };

struct GateSpec {
    GateKind kind = GateKind::and_or;
    std::size_t bits = 0;  // N for adders
    SpinNetwork net;
    std::vector<std::size_t> input_nodes;
    std::vector<std::size_t> output_nodes;
    std::vector<std::size_t> fixed_nodes;
    BooleanFunction oracle;

    // Adder wiring (index k-1 holds bit k); carries holds c_0..c_N.
    std::vector<std::size_t> x_nodes, y_nodes, s_nodes, carries;
    // Filled by condition_weights: per-FA prime and scale factor.
    std::vector<std::uint64_t> primes;
    std::vector<double> fa_scale;
    bool conditioned = false;

    // The five nodes (x, y, c_in, s, c_out) of full adder k in 1..N.
    std::array<std::size_t, 5> fa_nodes(std::size_t k) const;
};

// Nodes (x, y, a, f); f is clamped with sigma_f (+1 AND, -1 OR).
GateSpec and_or_gate(int sigma_f = 1);
// Nodes (x, y, c_in, s, c_out).
GateSpec full_adder();
// Nodes c_0, x_1..x_N, y_1..y_N, s_1..s_N, c_1..c_N. FA k reuses c_{k-1} as
// carry-in and c_k as carry-out.
GateSpec ripple_carry_adder(std::size_t bits, bool condition = false, std::uint64_t seed = 1);

// sqrt(p) / floor(sqrt(p)).
double conditioning_factor(std::uint64_t p);
// The first count primes.
std::vector<std::uint64_t> first_primes(std::size_t count);
inline constexpr std::size_t kPrimePool = 10000;

GateSpec condition_weights(const GateSpec& adder, std::uint64_t seed);

// Argument group of an adder: position 0 is the carry-in, position k the bit
// pair (x_k, y_k).
struct GroupPlacement {
    std::vector<std::size_t> positions;  // several only for the shared base group
    double offset;                       // theta on the sigma = +1 circle, in (0, 2)
};

struct BranchArgs {
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    int c = 0;
};

struct BranchEncoding {
    std::size_t bits = 0;
    std::vector<std::size_t> order;
    std::pair<double, double> arc{0.1, 1.9};
    // Groups in boundary-crossing order: listed groups, then the base group if
    // any position is unlisted.
    std::vector<GroupPlacement> placement;
    std::vector<std::size_t> flip_sequence;  // listed positions in crossing order
    std::vector<BranchArgs> branch_args;     // one per listed prefix, branch 0 unflipped
};

using ClampAssignment = std::vector<std::pair<std::size_t, PhasePoint>>;

inline constexpr std::size_t kMaxEncodedBits = 62;

std::pair<ClampAssignment, BranchEncoding> encode_branches(const GateSpec& adder, std::uint64_t x, std::uint64_t y,
                                                           int c_in, const std::vector<std::size_t>& order,
                                                           std::pair<double, double> arc = {0.1, 1.9});

void apply_clamps(SpinNetwork& net, const ClampAssignment& clamps);

struct BranchResult {
    std::vector<std::size_t> flipped;  // group newly inverted at this branch; empty for branch 0
    BranchArgs args;
    std::uint64_t expected_sum = 0;
};

std::vector<BranchResult> enumerate_branches(const BranchEncoding& enc);

struct DecodedBranch {
    std::vector<std::size_t> flipped;
    double rotation = 0.0;
    std::uint64_t observed_sum = 0;
    std::uint64_t expected_sum = 0;
    bool correct = false;
};

struct DecodeReport {
    std::vector<DecodedBranch> branches;
    bool certified = false;  // false when the terminal state had not converged
};

// Rotation midway through branch j's readout interval.
std::vector<double> branch_rotations(const BranchEncoding& enc);

std::uint64_t read_sum(const GateSpec& adder, const State& points, double rotation);

DecodeReport decode_outputs(const TerminalState& term, const BranchEncoding& enc, const GateSpec& adder);

// Every free wire clustered with the group whose crossing flips it, which is
// the terminal state the encoding asks for. Empty if some wire would flip
// more than once per half turn (the encoded chain is broken).
std::optional<State> ideal_terminal_state(const GateSpec& adder, const BranchEncoding& enc,
                                          const ClampAssignment& clamps);

// Oracle argument order for a gate: input nodes, then fixed nodes.
std::vector<std::size_t> argument_nodes(const GateSpec& gate);

// Clamps the gate's argument spins so that rotating through one half turn
// visits base_args, then each increment of the chain in turn. Arguments not
// named by any increment form a final group. Offsets are spread over arc as
// for adders; an argument with value +1 at offset o sits at theta = o.
ClampAssignment place_chain(const GateSpec& gate, const Spins& base_args, const FlipChain& chain,
                            std::pair<double, double> arc = {0.1, 1.9});

struct GateChainCheck {
    std::size_t entries = 0;
    std::size_t consistent = 0;
    bool all_consistent() const { return entries == consistent; }
};

// Compares every readout configuration of a full turn with the oracle.
GateChainCheck check_gate_chain(const GateSpec& gate, const State& points, double cluster_tol);

// Value every non-argument node should take for the given arguments (oracle
// order): gate outputs, and for adders every sum and carry wire.
Spins expected_free_assignment(const GateSpec& gate, const Spins& args);

struct GateVerification {
    std::size_t assignments = 0;
    bool truth_ok = true;       // restricted ground state matches the oracle everywhere
    bool degeneracy_ok = true;  // consistent configurations share one cut, violators lie strictly below
    double consistent_cut = 0.0;
    double best_violator_cut = 0.0;
    std::vector<std::string> failures;
};

// Exhaustive over every argument assignment and every free configuration.
// Fixed nodes keep their clamped sigma. Throws CapacityError past 24 free spins
// or 2^20 argument assignments.
GateVerification verify_gate(const GateSpec& gate, double tol = 1e-9);

} // namespace rspin
