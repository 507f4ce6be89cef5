#pragma once

#include <cstddef>
#include <vector>

#include "rspin/network.hpp"
#include "rspin/phase.hpp"

namespace rspin {

struct ChainEntry {
    double r = 0.0;                    // rotation at which this configuration begins
    Spins sigma;
    std::vector<std::size_t> flipped;  // nodes inverted relative to the previous entry
};

// Discrete configurations met while the phase circle turns through r in [0, 4).
struct ChainReadout {
    Spins base_sigma;
    std::vector<ChainEntry> entries;
};

State rotate(const State& points, double r);

// Discrete configuration of rotate(points, r).
Spins sigma_at(const State& points, double r);

// Rotations in (0, 4) at which some theta reaches 0 or 2, merged within 1e-12.
std::vector<double> critical_rotations(const State& points);

// Moves every member of a continuous-component cluster onto the continuous
// component of the cluster's smallest-index member. A member may change sigma
// if jitter had left it on the other side of a boundary.
State snap_clusters(const State& points, double cluster_tol);

// Configurations are sampled at interval midpoints, after snapping clusters
// within cluster_tol so that a cluster always flips as one unit.
ChainReadout chain_readout(const State& points, double cluster_tol = 0.0);

struct CutInvariance {
    double min_cut = 0.0;
    double max_cut = 0.0;
    bool invariant = true;
};

CutInvariance verify_cut_invariance(const SpinNetwork& net, const State& points, double cluster_tol = 0.0,
                                    double tol_abs = 1e-9);

} // namespace rspin
