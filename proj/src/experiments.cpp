#include "rspin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "rspin/error.hpp"
#include "rspin/symmetry.hpp"

#ifndef RSPIN_VERSION
#define RSPIN_VERSION "0.0.0"
#endif

namespace rspin {

const char* library_version() { return RSPIN_VERSION; }

std::string to_string(Mode mode) { return mode == Mode::concurrent ? "concurrent" : "sequential"; }

Mode mode_from_string(const std::string& name) {
    if (name == "concurrent") return Mode::concurrent;
    if (name == "sequential") return Mode::sequential;
    throw InvalidInput("unknown mode '" + name + "' (expected concurrent or sequential)");
}

void CircuitDescription::validate() const {
    if (type != "adder" && type != "and_or") throw InvalidInput("circuit type must be 'adder' or 'and_or', got '" + type + "'");
    if (!(0.0 < arc.first && arc.first < arc.second && arc.second < 2.0))
        throw InvalidInput("arc must satisfy 0 < lo < hi < 2");
    if (type == "and_or") {
        if (x > 1 || y > 1) throw InvalidInput("and_or inputs must be single bits");
        if (sigma_f != 1 && sigma_f != -1) throw InvalidInput("sigma_f must be +1 or -1");
        std::vector<char> seen(3, 0);
        for (std::size_t a : order) {
            if (a > 2) throw InvalidInput("and_or order entries must be 0 (x), 1 (y) or 2 (f)");
            if (seen[a]) throw InvalidInput("duplicate argument in order");
            seen[a] = 1;
        }
        return;
    }
    if (bits == 0) throw InvalidInput("ripple-carry adder needs N >= 1");
    if (bits > kMaxEncodedBits) throw InvalidInput("adders wider than 62 bits are not supported");
    if (c_in != 0 && c_in != 1) throw InvalidInput("carry-in must be 0 or 1");
}

void ExperimentConfig::validate() const {
    circuit.validate();
    integrator.validate();
    if (trials == 0) throw InvalidInput("trials must be at least 1");
    if (durations.empty()) throw InvalidInput("at least one duration is required");
    for (std::size_t i = 0; i < durations.size(); ++i) {
        if (!(durations[i] >= 0.0) || !std::isfinite(durations[i])) throw InvalidInput("durations must be finite and non-negative");
        if (i > 0 && !(durations[i] > durations[i - 1])) throw InvalidInput("durations must be strictly increasing");
    }
    if (mode == Mode::sequential && circuit.type != "adder") throw InvalidInput("sequential mode applies to adders only");
}

namespace {

// Readout midpoints for groups whose offsets are given in crossing order.
std::vector<double> midpoints(const std::vector<double>& offsets, std::size_t branches) {
    std::vector<double> crossing;
    for (double o : offsets) crossing.push_back(kHalfPeriod - o);
    std::vector<double> mids;
    for (std::size_t j = 0; j < branches; ++j) {
        double from = j == 0 ? crossing.back() - kHalfPeriod : crossing[j - 1];
        double to = j < crossing.size() ? crossing[j] : crossing.front() + kHalfPeriod;
        mids.push_back(0.5 * (from + to));
    }
    return mids;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <typename Fn>
void for_each_trial(std::size_t trials, std::size_t threads, Fn&& fn) {
    std::size_t workers = threads ? threads : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min(workers, trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = w; t < trials; t += workers) fn(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

SuccessReport empty_report(const ExperimentConfig& cfg, const PreparedCircuit& pc, Mode mode) {
    SuccessReport rep;
    rep.circuit_type = cfg.circuit.type;
    rep.mode = mode;
    rep.seed = cfg.seed;
    rep.config_hash = config_hash(cfg);
    rep.version = library_version();
    rep.durations = cfg.durations;
    rep.branches = pc.rotations.size();
    for (double d : cfg.durations) {
        for (std::size_t b = 0; b < rep.branches; ++b) {
            BranchCell c;
            c.duration = d;
            c.branch = b;
            c.flip_set = pc.flip_sets[b];
            c.expected = pc.expected[b];
            c.trials = cfg.trials;
            rep.cells.push_back(std::move(c));
        }
    }
    return rep;
}

// outcome[trial][duration * branches + branch]: bit 0 correct, bit 1 certified
using Outcomes = std::vector<std::vector<unsigned char>>;

void tally(SuccessReport& rep, const Outcomes& outcomes) {
    for (const auto& trial : outcomes) {
        for (std::size_t i = 0; i < trial.size(); ++i) {
            rep.cells[i].successes += trial[i] & 1U;
            rep.cells[i].certified += (trial[i] >> 1) & 1U;
        }
    }
}

} // namespace

PreparedCircuit prepare_circuit(const CircuitDescription& desc) {
    desc.validate();
    PreparedCircuit pc;
    if (desc.type == "adder") {
        pc.gate = ripple_carry_adder(desc.bits, desc.condition, desc.seed);
        auto [clamps, enc] = encode_branches(pc.gate, desc.x, desc.y, desc.c_in, desc.order, desc.arc);
        apply_clamps(pc.gate.net, clamps);
        pc.rotations = branch_rotations(enc);
        for (const auto& b : enumerate_branches(enc)) {
            pc.flip_sets.push_back(b.flipped);
            pc.expected.push_back(b.expected_sum);
        }
        pc.encoding = std::move(enc);
        return pc;
    }

    pc.gate = and_or_gate(desc.sigma_f);
    const Spins base{desc.x ? 1 : -1, desc.y ? 1 : -1, desc.sigma_f};
    FlipChain chain;
    chain.arity = 3;
    for (std::size_t a : desc.order) chain.steps.push_back({a});
    const auto clamps = place_chain(pc.gate, base, chain, desc.arc);
    apply_clamps(pc.gate.net, clamps);

    // Offsets in crossing order: listed arguments first, then the rest.
    std::vector<double> offsets;
    std::vector<std::vector<std::size_t>> groups = chain.steps;
    std::vector<std::size_t> rest;
    for (std::size_t a = 0; a < 3; ++a)
        if (std::find(desc.order.begin(), desc.order.end(), a) == desc.order.end()) rest.push_back(a);
    if (!rest.empty()) groups.push_back(rest);
    const auto args = argument_nodes(pc.gate);
    for (const auto& g : groups) offsets.push_back(pc.gate.net.clamp_of(args[g.front()])->x() + 1.0);
    pc.rotations = midpoints(offsets, groups.size());

    Spins cur = base;
    for (std::size_t j = 0; j < groups.size(); ++j) {
        if (j > 0)
            for (std::size_t a : groups[j - 1]) cur[a] = -cur[a];
        pc.flip_sets.push_back(j > 0 ? groups[j - 1] : std::vector<std::size_t>{});
        const Spins out = truth(pc.gate.oracle, cur);
        std::uint64_t w = 0;
        for (std::size_t k = 0; k < out.size(); ++k)
            if (out[k] > 0) w |= std::uint64_t{1} << k;
        pc.expected.push_back(w);
    }
    return pc;
}

std::uint64_t output_word(const GateSpec& gate, const State& points, double r) {
    std::uint64_t w = 0;
    for (std::size_t k = 0; k < gate.output_nodes.size(); ++k)
        if (points.at(gate.output_nodes[k]).rotated(r).sigma() > 0) w |= std::uint64_t{1} << k;
    return w;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(splitmix64(seed) ^ (trial + 1) * 0xd1342543de82ef95ULL);
}

SuccessReport run_concurrent(const ExperimentConfig& cfg) {
    cfg.validate();
    const PreparedCircuit pc = prepare_circuit(cfg.circuit);
    SuccessReport rep = empty_report(cfg, pc, Mode::concurrent);
    const std::size_t nb = rep.branches;
    Outcomes outcomes(cfg.trials);

    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t trial) {
        IntegratorConfig ic = cfg.integrator;
        ic.seed = trial_seed(cfg.seed, trial);
        ic.t_max = cfg.durations.back();
        ic.trace_interval = 0.0;
        Integrator integ(pc.gate.net, sample_initial(pc.gate.net, ic), ic);
        auto& out = outcomes[trial];
        out.assign(cfg.durations.size() * nb, 0);
        for (std::size_t d = 0; d < cfg.durations.size(); ++d) {
            integ.advance_to(cfg.durations[d]);
            const State s = integ.state();
            const unsigned char cert = integ.converged() ? 2 : 0;
            for (std::size_t b = 0; b < nb; ++b) {
                const bool ok = output_word(pc.gate, s, pc.rotations[b]) == pc.expected[b];
                out[d * nb + b] = static_cast<unsigned char>((ok ? 1 : 0) | cert);
            }
        }
    });
    tally(rep, outcomes);
    return rep;
}

SuccessReport run_sequential(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.circuit.type != "adder") throw InvalidInput("sequential mode applies to adders only");
    const PreparedCircuit pc = prepare_circuit(cfg.circuit);
    SuccessReport rep = empty_report(cfg, pc, Mode::sequential);
    const std::size_t nb = rep.branches;
    const GateSpec& adder = pc.gate;
    const std::size_t bits = adder.bits;

    // Stand-alone copy of each full adder's five nodes, in local slots
    // (x, y, c_in, s, c_out), carrying the adder's own (possibly conditioned)
    // weights.
    std::vector<SpinNetwork> stages;
    for (std::size_t k = 1; k <= bits; ++k) {
        const auto nodes = adder.fa_nodes(k);
        SpinNetwork fa(5);
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = a + 1; b < 5; ++b) {
                const double w = adder.net.weight(nodes[a], nodes[b]);
                if (w != 0.0) fa.set_weight(a, b, w);
            }
        for (std::size_t a = 0; a < 2; ++a) fa.clamp(a, *adder.net.clamp_of(nodes[a]));
        stages.push_back(std::move(fa));
    }

    Outcomes outcomes(cfg.trials);
    for_each_trial(cfg.trials, cfg.threads, [&](std::size_t trial) {
        IntegratorConfig ic = cfg.integrator;
        ic.seed = trial_seed(cfg.seed, trial);
        ic.trace_interval = 0.0;
        // Same draw as the concurrent run, so both modes start from one state.
        const State initial = sample_initial(adder.net, ic);
        auto& out = outcomes[trial];
        out.assign(cfg.durations.size() * nb, 0);
        for (std::size_t d = 0; d < cfg.durations.size(); ++d) {
            ic.t_max = cfg.durations[d];
            State s = initial;
            bool certified = true;
            for (std::size_t k = 1; k <= bits; ++k) {
                const auto nodes = adder.fa_nodes(k);
                SpinNetwork& fa = stages[k - 1];
                fa.clamp(2, s[nodes[2]]);
                State local(5);
                for (std::size_t a = 0; a < 5; ++a) local[a] = s[nodes[a]];
                Integrator integ(fa, local, ic);
                integ.advance_to(ic.t_max);
                certified = certified && integ.converged();
                const State res = integ.state();
                s[nodes[3]] = res[3];
                s[nodes[4]] = res[4];
            }
            const unsigned char cert = certified ? 2 : 0;
            for (std::size_t b = 0; b < nb; ++b) {
                const bool ok = output_word(adder, s, pc.rotations[b]) == pc.expected[b];
                out[d * nb + b] = static_cast<unsigned char>((ok ? 1 : 0) | cert);
            }
        }
    });
    tally(rep, outcomes);
    return rep;
}

SuccessReport run_experiment(const ExperimentConfig& cfg) {
    return cfg.mode == Mode::concurrent ? run_concurrent(cfg) : run_sequential(cfg);
}

std::vector<GroupStat> group_analysis(const SuccessReport& report) {
    std::vector<GroupStat> out;
    for (std::size_t d = 0; d < report.durations.size(); ++d) {
        std::map<std::uint64_t, std::size_t> slot;
        for (std::size_t b = 0; b < report.branches; ++b) {
            const BranchCell& c = report.cell(d, b);
            auto [it, fresh] = slot.emplace(c.expected, out.size());
            if (fresh) {
                GroupStat g;
                g.duration = c.duration;
                g.expected = c.expected;
                g.min_probability = g.max_probability = c.probability();
                out.push_back(g);
            }
            GroupStat& g = out[it->second];
            g.branches.push_back(b);
            g.min_probability = std::min(g.min_probability, c.probability());
            g.max_probability = std::max(g.max_probability, c.probability());
        }
    }
    return out;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    if (successes > trials) throw InvalidInput("successes exceed trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    const auto& c = cfg.circuit;
    os << c.type << '|' << c.bits << '|' << c.condition << '|' << c.seed << '|' << c.x << '|' << c.y << '|' << c.c_in
       << '|' << c.sigma_f << '|' << c.arc.first << '|' << c.arc.second << "|o";
    for (auto v : c.order) os << ',' << v;
    os << "|d";
    for (auto v : cfg.durations) os << ',' << v;
    const auto& ic = cfg.integrator;
    os << '|' << cfg.trials << '|' << to_string(cfg.mode) << '|' << cfg.seed << '|' << ic.dt << '|' << ic.epsilon << '|'
       << ic.eq_window << '|' << (ic.eq_tol ? *ic.eq_tol : -1.0) << '|' << (ic.cluster_tol ? *ic.cluster_tol : -1.0);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : os.str()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace rspin
