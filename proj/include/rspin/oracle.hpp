#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rspin/network.hpp"
#include "rspin/phase.hpp"

namespace rspin {

// Spin-valued Boolean function, +1 <-> True.
struct BooleanFunction {
    std::string name;
    std::size_t arity = 0;
    std::size_t outputs = 0;
    std::function<Spins(const Spins&)> eval;
    // Argument permutations leaving eval invariant, as images of each index.
    std::vector<std::vector<std::size_t>> symmetries;
};

int maj(int a, int b, int c);

// (x, y, f) -> a; AND for f = +1, OR for f = -1.
BooleanFunction and_or_function();
// (x, y, c_in) -> (s, c_out).
BooleanFunction full_adder_function();
// (c_0, x_1..x_N, y_1..y_N) -> (s_1..s_N, c_N), index 1 being the least significant bit.
BooleanFunction adder_function(std::size_t bits);

Spins truth(const BooleanFunction& fn, const Spins& args);

// Bit-flip chain over argument positions, stored by increments.
struct FlipChain {
    std::vector<std::vector<std::size_t>> steps;
    std::size_t arity = 0;

    void validate() const;
};

struct IsotoneResult {
    bool isotone = true;
    std::vector<Spins> output_chain;
};

IsotoneResult isotone_check(const BooleanFunction& fn, const Spins& base_args, const FlipChain& chain);

struct GroundState {
    Spins sigma;               // lexicographically smallest minimizer (-1 < +1)
    double energy = 0.0;
    std::vector<Spins> ties;   // every minimizer, sorted
};

inline constexpr std::size_t kMaxEnumeratedSpins = 24;

// Exhaustive argmin of the Ising energy over unassigned spins.
GroundState restricted_ground_state(const SpinNetwork& net, const std::vector<std::optional<int>>& clamp_sigma);

// Which phase-circle and argument symmetries identify two chains.
struct ChainQuotient {
    bool origin_rotation = true;   // includes the half-turn, i.e. global inversion
    bool global_inversion = true;  // only consulted when origin_rotation is off
    bool reversal = false;
    bool argument_symmetry = true;
};

struct ChainCensus {
    std::size_t total = 0;
    // One representative per broken class: base arguments and chain increments.
    std::vector<std::pair<Spins, FlipChain>> broken;
};

// Enumerates full chains over argument groups (groups are co-placed arguments
// that flip together), skipping the trivial one-step chain whenever more than
// one group exists, and counts classes under the quotient.
ChainCensus enumerate_nontrivial_chains(const BooleanFunction& fn, const std::vector<std::vector<std::size_t>>& groups,
                                        const ChainQuotient& quotient = {});
ChainCensus enumerate_nontrivial_chains(const BooleanFunction& fn, const ChainQuotient& quotient = {});

struct DriftProfile {
    std::vector<double> boundaries;      // distinct clamped continuous components, ascending
    std::vector<int> signs;              // per interval, ascending X, free spin on the sigma = +1 circle
    std::vector<double> stable_thetas;   // attracting boundaries over the whole double circle
};

// Sign structure of the single free spin's rate over the intervals cut out by
// the clamped placements. Throws InvalidInput if more than one spin is free or
// if an interval has a vanishing field.
DriftProfile drift_sign_profile(const SpinNetwork& net, std::size_t free_node);

} // namespace rspin
