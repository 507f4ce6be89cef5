#include <gtest/gtest.h>

#include "rspin/circuits.hpp"
#include "rspin/error.hpp"
#include "rspin/oracle.hpp"

using namespace rspin;

namespace {

using Opt = std::vector<std::optional<int>>;

// All ordered set partitions of {0..n-1} with at least two blocks.
void ordered_partitions(std::vector<std::size_t> rest, std::vector<std::vector<std::size_t>>& cur,
                        std::vector<FlipChain>& out, std::size_t arity) {
    if (rest.empty()) {
        if (cur.size() > 1) out.push_back({cur, arity});
        return;
    }
    const std::size_t n = rest.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> block, left;
        for (std::size_t i = 0; i < n; ++i) (mask >> i & 1 ? block : left).push_back(rest[i]);
        cur.push_back(block);
        ordered_partitions(left, cur, out, arity);
        cur.pop_back();
    }
}

std::vector<FlipChain> all_chains(std::size_t arity) {
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < arity; ++i) all.push_back(i);
    std::vector<std::vector<std::size_t>> cur;
    std::vector<FlipChain> out;
    ordered_partitions(all, cur, out, arity);
    return out;
}

Spins spins_of(unsigned mask, std::size_t n) {
    Spins s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(mask >> i & 1 ? 1 : -1);
    return s;
}

} // namespace

TEST(Truth, MajorityAndAdders) {
    EXPECT_EQ(maj(1, 1, -1), 1);
    EXPECT_EQ(maj(-1, 1, -1), -1);
    EXPECT_EQ(truth(full_adder_function(), {1, 1, 1}), (Spins{1, 1}));
    // (c_0, x_1..x_3, y_1..y_3) for 0 + 6 + 3
    const Spins out = truth(adder_function(3), {-1, -1, 1, 1, 1, 1, -1});
    unsigned v = 0;
    for (std::size_t i = 0; i < out.size(); ++i) v |= (out[i] > 0 ? 1u : 0u) << i;
    EXPECT_EQ(v, 9u);
    EXPECT_THROW(truth(full_adder_function(), {1, 1}), InvalidInput);
}

TEST(Truth, AndOrSelectedByF) {
    const auto fn = and_or_function();
    for (unsigned m = 0; m < 4; ++m) {
        const int x = m & 1 ? 1 : -1, y = m & 2 ? 1 : -1;
        EXPECT_EQ(truth(fn, {x, y, 1})[0], x > 0 && y > 0 ? 1 : -1);
        EXPECT_EQ(truth(fn, {x, y, -1})[0], x > 0 || y > 0 ? 1 : -1);
    }
}

TEST(Isotone, ShortChainsAndConstantFunctionsAreIsotone) {
    const auto fa = full_adder_function();
    EXPECT_TRUE(isotone_check(fa, {1, -1, 1}, {{{0, 1, 2}}, 3}).isotone);
    EXPECT_TRUE(isotone_check(fa, {1, -1, 1}, {{{0}, {1, 2}}, 3}).isotone);
    BooleanFunction constant{"const", 3, 1, [](const Spins&) { return Spins{1}; }, {}};
    for (const auto& c : all_chains(3)) EXPECT_TRUE(isotone_check(constant, {1, 1, -1}, c).isotone);
}

TEST(Isotone, BrokenAndOrPlacementFromCensus) {
    const auto census = enumerate_nontrivial_chains(and_or_function());
    ASSERT_EQ(census.broken.size(), 1u);
    const auto& [base, chain] = census.broken.front();
    EXPECT_FALSE(isotone_check(and_or_function(), base, chain).isotone);
}

TEST(Census, AndOrElevenChainsOneBroken) {
    const auto census = enumerate_nontrivial_chains(and_or_function());
    EXPECT_EQ(census.total, 11u);
    EXPECT_EQ(census.broken.size(), 1u);
}

// Inversion and reversal alone, without the origin rotation.
TEST(Census, LiteralInversionReversalQuotient) {
    ChainQuotient q;
    q.origin_rotation = false;
    q.global_inversion = true;
    q.reversal = true;
    const auto census = enumerate_nontrivial_chains(and_or_function(), q);
    EXPECT_EQ(census.total, 14u);
    EXPECT_EQ(census.broken.size(), 2u);
}

TEST(Census, FullAdderWithClusteredPairHasNoBrokenChain) {
    const auto census = enumerate_nontrivial_chains(full_adder_function(), {{0, 1}, {2}});
    EXPECT_GT(census.total, 0u);
    EXPECT_TRUE(census.broken.empty());
}

TEST(Census, SingleArgumentFunction) {
    BooleanFunction id{"id", 1, 1, [](const Spins& a) { return a; }, {}};
    const auto census = enumerate_nontrivial_chains(id);
    EXPECT_EQ(census.total, 1u);
    EXPECT_TRUE(census.broken.empty());
}

TEST(GroundState, AndAndFullAdderExamples) {
    const auto g_and = and_or_gate(1);
    auto gs = restricted_ground_state(g_and.net, Opt{1, 1, std::nullopt, 1});
    EXPECT_EQ(gs.sigma[2], 1);
    EXPECT_EQ(gs.energy, -3.0);
    EXPECT_EQ(restricted_ground_state(g_and.net, Opt{1, -1, std::nullopt, 1}).sigma[2], -1);

    const auto fa = full_adder();
    gs = restricted_ground_state(fa.net, Opt{1, 1, 1, std::nullopt, std::nullopt});
    EXPECT_EQ(gs.sigma[3], 1);
    EXPECT_EQ(gs.sigma[4], 1);
    EXPECT_EQ(gs.energy, -4.0);
    gs = restricted_ground_state(fa.net, Opt{1, -1, -1, std::nullopt, std::nullopt});
    EXPECT_EQ(gs.sigma[3], 1);
    EXPECT_EQ(gs.sigma[4], -1);
    gs = restricted_ground_state(fa.net, Opt{-1, -1, 1, std::nullopt, std::nullopt});
    EXPECT_EQ(gs.sigma[3], 1);
    EXPECT_EQ(gs.sigma[4], -1);
}

TEST(GroundState, K5ReportsAllMaxCutTies) {
    SpinNetwork net(5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) net.set_weight(i, j, 1.0);
    const auto gs = restricted_ground_state(net, Opt(5));
    EXPECT_EQ(gs.ties.size(), 20u);  // every 2/3 split
    for (const auto& t : gs.ties) EXPECT_EQ(discrete_cut(net, t), 6.0);
    EXPECT_EQ(gs.sigma, gs.ties.front());
}

TEST(GroundState, CapacityAndShapeErrors) {
    EXPECT_THROW(restricted_ground_state(SpinNetwork(25), Opt(25)), CapacityError);
    EXPECT_THROW(restricted_ground_state(SpinNetwork(3), Opt(2)), InvalidInput);
}

TEST(Drift, IsotonePlacementHasOneStableBoundary) {
    // AND with x, y sharing the highest placement and f below: chain (1,1,1) -> (-1,-1,1) -> all inverted
    auto g = and_or_gate(1);
    apply_clamps(g.net, place_chain(g, {1, 1, 1}, {{{0, 1}, {2}}, 3}));
    const auto prof = drift_sign_profile(g.net, 2);
    EXPECT_EQ(prof.stable_thetas.size(), 1u);
    EXPECT_EQ(prof.signs.front(), -prof.signs.back());
    int changes = 0;
    for (std::size_t i = 1; i < prof.signs.size(); ++i) changes += prof.signs[i] != prof.signs[i - 1];
    EXPECT_EQ(changes, 1);
}

TEST(Drift, BrokenPlacementHasSeveralStableBoundaries) {
    const auto census = enumerate_nontrivial_chains(and_or_function());
    const auto& [base, chain] = census.broken.front();
    auto g = and_or_gate(base[2]);
    apply_clamps(g.net, place_chain(g, base, chain));
    EXPECT_GE(drift_sign_profile(g.net, 2).stable_thetas.size(), 2u);
}

// One stable boundary exactly when the induced chain is isotone, over every
// full chain and base assignment of the AND/OR arguments.
TEST(Drift, StabilityMatchesIsotonicity) {
    const auto fn = and_or_function();
    int broken = 0;
    for (const auto& chain : all_chains(3)) {
        for (unsigned m = 0; m < 8; ++m) {
            const Spins base = spins_of(m, 3);
            auto g = and_or_gate(base[2]);
            apply_clamps(g.net, place_chain(g, base, chain));
            const bool iso = isotone_check(fn, base, chain).isotone;
            const auto prof = drift_sign_profile(g.net, 2);
            EXPECT_EQ(prof.stable_thetas.size() == 1, iso);
            broken += !iso;
        }
    }
    EXPECT_GT(broken, 0);
}

TEST(Drift, RejectsSeveralFreeSpins) {
    const auto fa = full_adder();
    EXPECT_THROW(drift_sign_profile(fa.net, 3), InvalidInput);
}
