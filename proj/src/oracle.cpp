#include "rspin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "rspin/dynamics.hpp"
#include "rspin/error.hpp"

namespace rspin {

int maj(int a, int b, int c) { return a + b + c > 0 ? 1 : -1; }

BooleanFunction and_or_function() {
    BooleanFunction fn;
    fn.name = "and_or";
    fn.arity = 3;
    fn.outputs = 1;
    fn.eval = [](const Spins& a) { return Spins{maj(a[0], a[1], -a[2])}; };
    fn.symmetries = {{1, 0, 2}};
    return fn;
}

BooleanFunction full_adder_function() {
    BooleanFunction fn;
    fn.name = "fa";
    fn.arity = 3;
    fn.outputs = 2;
    fn.eval = [](const Spins& a) { return Spins{a[0] * a[1] * a[2], maj(a[0], a[1], a[2])}; };
    fn.symmetries = {{1, 0, 2}, {0, 2, 1}};
    return fn;
}

BooleanFunction adder_function(std::size_t bits) {
    if (bits == 0) throw InvalidInput("adder needs at least one bit");
    BooleanFunction fn;
    fn.name = "adder_" + std::to_string(bits);
    fn.arity = 2 * bits + 1;
    fn.outputs = bits + 1;
    fn.eval = [bits](const Spins& a) {
        Spins out(bits + 1);
        int carry = a[0];
        for (std::size_t k = 0; k < bits; ++k) {
            int x = a[1 + k];
            int y = a[1 + bits + k];
            out[k] = x * y * carry;
            carry = maj(x, y, carry);
        }
        out[bits] = carry;
        return out;
    };
    for (std::size_t k = 0; k < bits; ++k) {
        std::vector<std::size_t> swap(fn.arity);
        for (std::size_t i = 0; i < fn.arity; ++i) swap[i] = i;
        std::swap(swap[1 + k], swap[1 + bits + k]);
        fn.symmetries.push_back(std::move(swap));
    }
    return fn;
}

Spins truth(const BooleanFunction& fn, const Spins& args) {
    if (args.size() != fn.arity)
        throw InvalidInput(fn.name + " expects " + std::to_string(fn.arity) + " arguments, got " +
                           std::to_string(args.size()));
    for (int s : args)
        if (s != 1 && s != -1) throw InvalidInput("arguments must be +1 or -1");
    return fn.eval(args);
}

void FlipChain::validate() const {
    std::vector<char> seen(arity, 0);
    for (const auto& inc : steps) {
        if (inc.empty()) throw InvalidInput("flip chain has an empty increment");
        for (std::size_t i : inc) {
            if (i >= arity) throw InvalidInput("flip chain index out of range");
            if (seen[i]) throw InvalidInput("flip chain increments overlap");
            seen[i] = 1;
        }
    }
}

IsotoneResult isotone_check(const BooleanFunction& fn, const Spins& base_args, const FlipChain& chain) {
    if (chain.arity != fn.arity) throw InvalidInput("chain arity does not match function");
    chain.validate();
    IsotoneResult res;
    Spins args = base_args;
    res.output_chain.push_back(truth(fn, args));
    for (const auto& inc : chain.steps) {
        for (std::size_t i : inc) args[i] = -args[i];
        res.output_chain.push_back(truth(fn, args));
    }
    for (std::size_t bit = 0; bit < fn.outputs; ++bit) {
        int changes = 0;
        for (std::size_t j = 1; j < res.output_chain.size(); ++j)
            if (res.output_chain[j][bit] != res.output_chain[j - 1][bit]) ++changes;
        if (changes > 1) res.isotone = false;
    }
    return res;
}

GroundState restricted_ground_state(const SpinNetwork& net, const std::vector<std::optional<int>>& clamp_sigma) {
    const std::size_t n = net.size();
    if (clamp_sigma.size() != n)
        throw InvalidInput("clamp assignment has length " + std::to_string(clamp_sigma.size()) + ", network has " +
                           std::to_string(n));
    std::vector<std::size_t> free;
    Spins sigma(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (clamp_sigma[i]) {
            if (*clamp_sigma[i] != 1 && *clamp_sigma[i] != -1) throw InvalidInput("clamped spins must be +1 or -1");
            sigma[i] = *clamp_sigma[i];
        } else {
            free.push_back(i);
        }
    }
    if (free.size() > kMaxEnumeratedSpins)
        throw CapacityError(std::to_string(free.size()) + " free spins exceed the enumeration limit of " +
                            std::to_string(kMaxEnumeratedSpins));

    std::vector<double> a(n * n, 0.0);
    for (const auto& e : net.edges()) {
        a[e.m * n + e.n] += e.weight;
        a[e.n * n + e.m] += e.weight;
    }
    std::vector<double> field(n, 0.0);
    auto resync = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            double h = 0.0;
            for (std::size_t j = 0; j < n; ++j) h += a[i * n + j] * sigma[j];
            field[i] = h;
        }
        return ising_energy(net, sigma);
    };
    double energy = resync();
    const double tol = 1e-9 * (1.0 + net.total_abs_weight());

    GroundState best;
    best.energy = energy;
    best.ties.push_back(sigma);
    auto consider = [&](double h) {
        if (h < best.energy - tol) {
            best.energy = h;
            best.ties.assign(1, sigma);
        } else if (std::abs(h - best.energy) <= tol) {
            best.ties.push_back(sigma);
        }
    };

    const std::uint64_t count = std::uint64_t{1} << free.size();
    for (std::uint64_t g = 1; g < count; ++g) {
        // Gray code: flip the lowest set bit of g
        std::size_t bit = 0;
        while (!((g >> bit) & 1U)) ++bit;
        std::size_t i = free[bit];
        energy -= 2.0 * sigma[i] * field[i];
        sigma[i] = -sigma[i];
        for (std::size_t j = 0; j < n; ++j) field[j] += 2.0 * a[j * n + i] * sigma[i];
        if ((g & 1023U) == 0) energy = resync();
        consider(energy);
    }
    std::sort(best.ties.begin(), best.ties.end());
    best.sigma = best.ties.front();
    best.energy = ising_energy(net, best.sigma);
    return best;
}

namespace {

using Mask = std::uint32_t;

Mask apply_perm(Mask s, const std::vector<std::size_t>& perm) {
    Mask out = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        if ((s >> i) & 1U) out |= Mask{1} << perm[i];
    return out;
}

Spins mask_to_spins(Mask s, std::size_t arity) {
    Spins out(arity);
    for (std::size_t i = 0; i < arity; ++i) out[i] = ((s >> i) & 1U) ? 1 : -1;
    return out;
}

// Closure of the generators, restricted to permutations that map every group
// onto a group.
std::vector<std::vector<std::size_t>> symmetry_group(const BooleanFunction& fn,
                                                     const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<std::size_t> id(fn.arity);
    for (std::size_t i = 0; i < fn.arity; ++i) id[i] = i;
    std::set<std::vector<std::size_t>> seen{id};
    std::vector<std::vector<std::size_t>> frontier{id};
    while (!frontier.empty()) {
        auto p = frontier.back();
        frontier.pop_back();
        for (const auto& gen : fn.symmetries) {
            std::vector<std::size_t> q(fn.arity);
            for (std::size_t i = 0; i < fn.arity; ++i) q[i] = gen[p[i]];
            if (seen.insert(q).second) frontier.push_back(q);
        }
    }
    std::set<std::vector<std::size_t>> group_sets;
    for (auto g : groups) {
        std::sort(g.begin(), g.end());
        group_sets.insert(g);
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& p : seen) {
        bool ok = true;
        for (const auto& g : groups) {
            std::vector<std::size_t> img;
            for (std::size_t i : g) img.push_back(p[i]);
            std::sort(img.begin(), img.end());
            if (!group_sets.count(img)) ok = false;
        }
        if (ok) out.push_back(p);
    }
    return out;
}

// All ordered partitions of {0..g-1} into k non-empty blocks.
void ordered_partitions(std::size_t g, std::vector<std::vector<std::vector<std::size_t>>>& out) {
    for (std::size_t k = 1; k <= g; ++k) {
        std::vector<std::size_t> label(g, 0);
        while (true) {
            std::vector<std::vector<std::size_t>> blocks(k);
            for (std::size_t i = 0; i < g; ++i) blocks[label[i]].push_back(i);
            bool surjective = std::all_of(blocks.begin(), blocks.end(), [](const auto& b) { return !b.empty(); });
            if (surjective) out.push_back(std::move(blocks));
            std::size_t pos = 0;
            while (pos < g && ++label[pos] == k) label[pos++] = 0;
            if (pos == g) break;
        }
    }
}

bool window_isotone(const BooleanFunction& fn, const std::vector<Mask>& states, std::size_t from, std::size_t len) {
    std::vector<Spins> outs;
    for (std::size_t j = 0; j < len; ++j) outs.push_back(truth(fn, mask_to_spins(states[(from + j) % states.size()], fn.arity)));
    for (std::size_t bit = 0; bit < fn.outputs; ++bit) {
        int changes = 0;
        for (std::size_t j = 1; j < outs.size(); ++j)
            if (outs[j][bit] != outs[j - 1][bit]) ++changes;
        if (changes > 1) return false;
    }
    return true;
}

} // namespace

ChainCensus enumerate_nontrivial_chains(const BooleanFunction& fn, const std::vector<std::vector<std::size_t>>& groups,
                                        const ChainQuotient& quotient) {
    if (fn.arity > 16) throw CapacityError("chain enumeration supports at most 16 arguments");
    if (groups.size() > 6) throw CapacityError("chain enumeration supports at most 6 argument groups");
    {
        std::vector<char> seen(fn.arity, 0);
        for (const auto& g : groups) {
            if (g.empty()) throw InvalidInput("empty argument group");
            for (std::size_t i : g) {
                if (i >= fn.arity || seen[i]) throw InvalidInput("argument groups must partition the arguments");
                seen[i] = 1;
            }
        }
        if (std::count(seen.begin(), seen.end(), 0)) throw InvalidInput("argument groups must cover every argument");
    }

    const auto perms = quotient.argument_symmetry ? symmetry_group(fn, groups)
                                                  : symmetry_group(BooleanFunction{fn.name, fn.arity, fn.outputs, fn.eval, {}}, groups);
    std::vector<std::vector<std::vector<std::size_t>>> partitions;
    ordered_partitions(groups.size(), partitions);

    const Mask full = fn.arity == 32 ? ~Mask{0} : (Mask{1} << fn.arity) - 1;
    std::set<std::vector<Mask>> classes;
    ChainCensus census;

    for (const auto& blocks : partitions) {
        if (blocks.size() == 1 && groups.size() > 1) continue;
        std::vector<Mask> block_masks;
        for (const auto& b : blocks) {
            Mask m = 0;
            for (std::size_t gi : b)
                for (std::size_t arg : groups[gi]) m |= Mask{1} << arg;
            block_masks.push_back(m);
        }
        const std::size_t k = block_masks.size();
        for (Mask base = 0; base <= full; ++base) {
            std::vector<Mask> seq{base};
            for (Mask bm : block_masks) seq.push_back(seq.back() ^ bm);
            std::vector<Mask> cyc(seq.begin(), seq.end() - 1);
            for (std::size_t j = 0; j < k; ++j) cyc.push_back(cyc[j] ^ full);

            std::vector<Mask> key;
            bool broken = false;
            auto offer = [&](std::vector<Mask> cand) {
                if (key.empty() || cand < key) key = std::move(cand);
            };
            if (quotient.origin_rotation) {
                for (std::size_t i = 0; i < cyc.size() && !broken; ++i)
                    if (!window_isotone(fn, cyc, i, k + 1)) broken = true;
                for (const auto& p : perms) {
                    std::vector<Mask> img;
                    for (Mask s : cyc) img.push_back(apply_perm(s, p));
                    for (int dir = 0; dir < (quotient.reversal ? 2 : 1); ++dir) {
                        if (dir == 1) std::reverse(img.begin(), img.end());
                        for (std::size_t sh = 0; sh < img.size(); ++sh) {
                            std::vector<Mask> rot(img.size());
                            for (std::size_t i = 0; i < img.size(); ++i) rot[i] = img[(i + sh) % img.size()];
                            offer(std::move(rot));
                        }
                    }
                }
            } else {
                broken = !window_isotone(fn, seq, 0, seq.size());
                for (const auto& p : perms) {
                    std::vector<Mask> img;
                    for (Mask s : seq) img.push_back(apply_perm(s, p));
                    offer(img);
                    if (quotient.global_inversion) {
                        std::vector<Mask> inv;
                        for (Mask s : img) inv.push_back(s ^ full);
                        offer(inv);
                    }
                    if (quotient.reversal) {
                        std::vector<Mask> rev;
                        for (auto it = img.rbegin(); it != img.rend(); ++it) rev.push_back(*it ^ full);
                        offer(rev);
                        if (quotient.global_inversion) {
                            std::vector<Mask> rev_inv(img.rbegin(), img.rend());
                            offer(rev_inv);
                        }
                    }
                }
            }
            if (classes.insert(key).second && broken) {
                FlipChain chain;
                chain.arity = fn.arity;
                for (Mask bm : block_masks) {
                    std::vector<std::size_t> inc;
                    for (std::size_t i = 0; i < fn.arity; ++i)
                        if ((bm >> i) & 1U) inc.push_back(i);
                    chain.steps.push_back(std::move(inc));
                }
                census.broken.emplace_back(mask_to_spins(base, fn.arity), std::move(chain));
            }
            if (base == full) break;
        }
    }
    census.total = classes.size();
    return census;
}

ChainCensus enumerate_nontrivial_chains(const BooleanFunction& fn, const ChainQuotient& quotient) {
    std::vector<std::vector<std::size_t>> singletons;
    for (std::size_t i = 0; i < fn.arity; ++i) singletons.push_back({i});
    return enumerate_nontrivial_chains(fn, singletons, quotient);
}

DriftProfile drift_sign_profile(const SpinNetwork& net, std::size_t free_node) {
    if (free_node >= net.size()) throw InvalidInput("free node out of range");
    const auto free = net.free_nodes();
    if (free.size() != 1 || free.front() != free_node)
        throw InvalidInput("drift profile needs exactly one free spin, the requested node");

    struct Anchor {
        double x;
        int sigma;
        double w;
    };
    std::vector<Anchor> anchors;
    for (std::size_t e : net.incident(free_node)) {
        const Edge& edge = net.edges()[e];
        std::size_t other = edge.m == free_node ? edge.n : edge.m;
        if (edge.weight == 0.0) continue;
        const PhasePoint p = *net.clamp_of(other);
        anchors.push_back({p.x(), p.sigma(), edge.weight});
    }
    std::sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) { return a.x < b.x; });

    DriftProfile prof;
    for (const auto& a : anchors)
        if (prof.boundaries.empty() || a.x - prof.boundaries.back() > 1e-12) prof.boundaries.push_back(a.x);
    const std::size_t d = prof.boundaries.size();

    // Field after the k highest placements have flipped; the interval it governs
    // is the k-th from the right.
    std::vector<int> from_right(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
        const double threshold = k == 0 ? 2.0 : prof.boundaries[d - k] - 1e-12;
        double field = 0.0;
        for (const auto& a : anchors) field += a.w * (a.x >= threshold ? -a.sigma : a.sigma);
        if (std::abs(field) < 1e-12) throw InvalidInput("degenerate placement: vanishing field on an interval");
        from_right[k] = field > 0.0 ? 1 : -1;
    }
    for (std::size_t i = 0; i <= d; ++i) prof.signs.push_back(from_right[d - i]);

    // Around the double circle: sigma = -1 sector (signs negated), then sigma = +1.
    std::vector<int> ring;
    std::vector<double> right_edge;
    for (int sector : {-1, 1}) {
        for (std::size_t i = 0; i <= d; ++i) {
            ring.push_back(sector * prof.signs[i]);
            right_edge.push_back(i < d ? sector + prof.boundaries[i] : sector + 1.0);
        }
    }
    for (std::size_t i = 0; i < ring.size(); ++i) {
        std::size_t next = (i + 1) % ring.size();
        if (ring[i] > 0 && ring[next] < 0) prof.stable_thetas.push_back(wrap_theta(right_edge[i]));
    }
    return prof;
}

} // namespace rspin
