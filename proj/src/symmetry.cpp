#include "rspin/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "rspin/dynamics.hpp"

namespace rspin {

namespace {
constexpr double kMergeTol = 1e-12;
}

State rotate(const State& points, double r) {
    State out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.rotated(r));
    return out;
}

Spins sigma_at(const State& points, double r) {
    Spins s;
    s.reserve(points.size());
    for (const auto& p : points) s.push_back(p.rotated(r).sigma());
    return s;
}

std::vector<double> critical_rotations(const State& points) {
    std::vector<double> rs;
    rs.reserve(2 * points.size());
    for (const auto& p : points) {
        // theta + r reaches +2 (wrap) and 0 (sector change)
        for (double target : {kHalfPeriod, 0.0}) {
            double r = std::fmod(target - p.theta() + 2.0 * kCircumference, kCircumference);
            if (r > kMergeTol && r < kCircumference - kMergeTol) rs.push_back(r);
        }
    }
    std::sort(rs.begin(), rs.end());
    std::vector<double> merged;
    for (double r : rs)
        if (merged.empty() || r - merged.back() > kMergeTol) merged.push_back(r);
    return merged;
}

State snap_clusters(const State& points, double cluster_tol) {
    State out = points;
    for (const auto& group : detect_clusters(points, cluster_tol)) {
        const double ref = points[group.front()].theta();
        for (std::size_t i : group) {
            // shortest signed move modulo 2, so members across the X = +-1 seam
            // land beside the representative rather than opposite it
            double d = std::remainder(ref - points[i].theta(), kHalfPeriod);
            out[i] = PhasePoint(points[i].theta() + d);
        }
    }
    return out;
}

ChainReadout chain_readout(const State& points, double cluster_tol) {
    const State snapped = cluster_tol > 0.0 ? snap_clusters(points, cluster_tol) : points;
    ChainReadout out;
    out.base_sigma = sigmas(snapped);
    out.entries.push_back({0.0, out.base_sigma, {}});

    const auto crit = critical_rotations(snapped);
    for (std::size_t i = 0; i < crit.size(); ++i) {
        double next = i + 1 < crit.size() ? crit[i + 1] : crit.front() + kCircumference;
        ChainEntry entry;
        entry.r = crit[i];
        entry.sigma = sigma_at(snapped, 0.5 * (crit[i] + next));
        const auto& prev = out.entries.back().sigma;
        for (std::size_t m = 0; m < entry.sigma.size(); ++m)
            if (entry.sigma[m] != prev[m]) entry.flipped.push_back(m);
        out.entries.push_back(std::move(entry));
    }
    return out;
}

CutInvariance verify_cut_invariance(const SpinNetwork& net, const State& points, double cluster_tol,
                                    double tol_abs) {
    const auto chain = chain_readout(points, cluster_tol);
    CutInvariance res;
    bool first = true;
    for (const auto& e : chain.entries) {
        double c = discrete_cut(net, e.sigma);
        if (first) {
            res.min_cut = res.max_cut = c;
            first = false;
        }
        res.min_cut = std::min(res.min_cut, c);
        res.max_cut = std::max(res.max_cut, c);
    }
    res.invariant = res.max_cut - res.min_cut <= tol_abs;
    return res;
}

} // namespace rspin
