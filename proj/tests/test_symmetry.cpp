#include <gtest/gtest.h>

#include <random>

#include "rspin/dynamics.hpp"
#include "rspin/symmetry.hpp"

using namespace rspin;

namespace {

SpinNetwork k5() {
    SpinNetwork net(5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) net.set_weight(i, j, 1.0);
    return net;
}

// Three strong clusters {0}, {1,2}, {3,4} with base sigma (-1, 1, -1, -1, 1).
State k5_three_clusters() {
    return {PhasePoint::from_spin(-1, 0.6), PhasePoint::from_spin(1, 0.0), PhasePoint::from_spin(-1, 0.0),
            PhasePoint::from_spin(-1, -0.6), PhasePoint::from_spin(1, -0.6)};
}

Spins negate(Spins s) {
    for (int& v : s) v = -v;
    return s;
}

} // namespace

TEST(Rotate, IdentityHalfTurnAndFullTurn) {
    const State st{PhasePoint(-1.7), PhasePoint(0.2), PhasePoint(1.3)};
    EXPECT_EQ(rotate(st, 0.0), st);
    const State half = rotate(st, 2.0);
    for (std::size_t i = 0; i < st.size(); ++i) {
        EXPECT_EQ(half[i].sigma(), -st[i].sigma());
        EXPECT_NEAR(half[i].x(), st[i].x(), 1e-12);
    }
    const State full = rotate(st, 4.0);
    for (std::size_t i = 0; i < st.size(); ++i) EXPECT_NEAR(full[i].theta(), st[i].theta(), 1e-12);
}

TEST(CriticalRotations, SingleSpinAndMergedCluster) {
    const auto r = critical_rotations({PhasePoint(0.5)});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0], 1.5, 1e-12);
    EXPECT_NEAR(r[1], 3.5, 1e-12);
    EXPECT_EQ(critical_rotations({PhasePoint(0.5), PhasePoint(0.5)}).size(), 2u);
    // antipodal members of one cluster cross boundaries together
    EXPECT_EQ(critical_rotations({PhasePoint(0.5), PhasePoint(-1.5)}).size(), 2u);
}

TEST(CriticalRotations, K5ThreeRotationsBeforeHalfTurn) {
    const auto r = critical_rotations(k5_three_clusters());
    ASSERT_EQ(r.size(), 6u);
    EXPECT_NEAR(r[0], 0.4, 1e-12);
    EXPECT_NEAR(r[1], 1.0, 1e-12);
    EXPECT_NEAR(r[2], 1.6, 1e-12);
    EXPECT_GT(r[3], 2.0);
}

TEST(ChainReadout, K5RotationSequence) {
    const auto chain = chain_readout(k5_three_clusters());
    ASSERT_EQ(chain.entries.size(), 7u);
    EXPECT_EQ(chain.base_sigma, (Spins{-1, 1, -1, -1, 1}));
    EXPECT_EQ(chain.entries[0].r, 0.0);
    EXPECT_EQ(chain.entries[1].sigma, (Spins{1, 1, -1, -1, 1}));
    EXPECT_EQ(chain.entries[2].sigma, (Spins{1, -1, 1, -1, 1}));
    EXPECT_EQ(chain.entries[3].sigma, (Spins{1, -1, 1, 1, -1}));
    EXPECT_EQ(chain.entries[3].sigma, negate(chain.base_sigma));
    EXPECT_EQ(chain.entries[6].sigma, chain.base_sigma);
    EXPECT_EQ(chain.entries[2].flipped, (std::vector<std::size_t>{1, 2}));
}

TEST(ChainReadout, FlipOncePerHalfTurnAndPeriodicity) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        State st;
        for (int i = 0; i < 6; ++i) st.emplace_back(u(rng));
        const auto chain = chain_readout(st);
        std::vector<int> seen(6, 0);
        for (const auto& e : chain.entries) {
            if (e.r >= 2.0) break;
            for (auto m : e.flipped) EXPECT_EQ(++seen[m], 1);
        }
        EXPECT_EQ(sigma_at(st, 2.0 + 1e-9), negate(sigma_at(st, 1e-9)));
        EXPECT_EQ(chain.entries.back().sigma, chain.base_sigma);
        for (std::size_t i = 1; i < chain.entries.size(); ++i) {
            Spins prev = chain.entries[i - 1].sigma;
            for (auto m : chain.entries[i].flipped) prev[m] = -prev[m];
            EXPECT_EQ(prev, chain.entries[i].sigma);
        }
    }
}

TEST(ChainReadout, SingleClusterGivesBaseAndInversion) {
    const State st{PhasePoint(0.3), PhasePoint(-1.7), PhasePoint(0.3)};
    const auto chain = chain_readout(st);
    ASSERT_EQ(chain.entries.size(), 3u);
    EXPECT_EQ(chain.entries[1].sigma, negate(chain.base_sigma));
}

TEST(SnapClusters, MovesMembersAcrossTheSeam) {
    // node 1 sits just past the X = 1 boundary from node 0's continuous component
    const State st{PhasePoint::from_spin(1, 0.998), PhasePoint(-1.999)};
    const State snapped = snap_clusters(st, 0.01);
    EXPECT_NEAR(continuous_distance(snapped[0].theta(), snapped[1].theta()), 0.0, 1e-12);
    EXPECT_NEAR(circular_distance(snapped[1].theta(), st[1].theta()), 0.003, 1e-9);
}

TEST(CutInvariance, K5EquilibriumKeepsMaximumCut) {
    const auto net = k5();
    const auto inv = verify_cut_invariance(net, k5_three_clusters());
    EXPECT_TRUE(inv.invariant);
    EXPECT_EQ(inv.min_cut, 6.0);
    EXPECT_EQ(inv.max_cut, 6.0);
    EXPECT_TRUE(verify_cut_invariance(SpinNetwork(1), {PhasePoint(0.7)}).invariant);
}

TEST(RotationInvariance, RelaxedCutUnchangedByRotation) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.0, 2.0), w(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        SpinNetwork net(5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j) net.set_weight(i, j, w(rng));
        State st;
        for (int i = 0; i < 5; ++i) st.emplace_back(u(rng));
        const double r = u(rng) + 2.0;
        EXPECT_NEAR(relaxed_cut(net, rotate(st, r)), relaxed_cut(net, st), 1e-9);
    }
}

TEST(Equivariance, EvolveCommutesWithRotation) {
    const auto net = k5();
    IntegratorConfig cfg;
    cfg.seed = 31;
    const auto init = sample_initial(net, cfg);
    const double r = 0.77;
    const auto a = evolve(net, rotate(init, r), cfg);
    const auto b = evolve(net, init, cfg);
    const double tol = cfg.resolved_cluster_tol();
    const auto ca = chain_readout(a.points, tol);
    const auto cb = chain_readout(rotate(b.points, r), tol);
    ASSERT_EQ(ca.entries.size(), cb.entries.size());
    for (std::size_t i = 0; i < ca.entries.size(); ++i) EXPECT_EQ(ca.entries[i].sigma, cb.entries[i].sigma);
}
