// Command-line driver: Monte Carlo success experiments, chain census, gate
// verification and single-run readouts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rspin/circuits.hpp"
#include "rspin/dynamics.hpp"
#include "rspin/error.hpp"
#include "rspin/experiments.hpp"
#include "rspin/io.hpp"
#include "rspin/oracle.hpp"
#include "rspin/symmetry.hpp"

namespace {

using namespace rspin;
using io::json;

constexpr const char* kOutDirEnv = "RSPIN_OUT_DIR";

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::vector<double> durations;
    std::string mode;
    std::string out;
    std::optional<double> dt;
    std::optional<double> epsilon;
    std::optional<std::size_t> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_mode) {
    cmd->add_option("--config", o.config, "Experiment or circuit JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed for initial states");
    cmd->add_option("--trials", o.trials, "Trials per duration")->check(CLI::PositiveNumber);
    cmd->add_option("--durations", o.durations, "Evolution durations, strictly increasing")->delimiter(',');
    if (with_mode)
        cmd->add_option("--mode", o.mode, "concurrent or sequential")->check(CLI::IsMember({"concurrent", "sequential"}));
    cmd->add_option("--out", o.out, "Output directory (default $RSPIN_OUT_DIR, else stdout only)");
    cmd->add_option("--dt", o.dt, "Integrator step");
    cmd->add_option("--epsilon", o.epsilon, "Sign regularization half-width");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

ExperimentConfig load_config(const CommonOptions& o) {
    ExperimentConfig cfg;
    if (!o.config.empty()) {
        const auto dir = std::filesystem::path(o.config).parent_path().string();
        cfg = io::experiment_from_json(io::read_json_file(o.config), o.config, dir.empty() ? "." : dir);
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) cfg.trials = *o.trials;
    if (!o.durations.empty()) cfg.durations = o.durations;
    if (!o.mode.empty()) cfg.mode = mode_from_string(o.mode);
    if (!o.out.empty()) cfg.out = o.out;
    if (o.dt) cfg.integrator.dt = *o.dt;
    if (o.epsilon) cfg.integrator.epsilon = *o.epsilon;
    if (o.threads) cfg.threads = *o.threads;
    if (cfg.out.empty())
        if (const char* env = std::getenv(kOutDirEnv)) cfg.out = env;
    return cfg;
}

std::string output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutDirEnv)) return env;
    return {};
}

void emit(const json& j, const std::string& dir, const std::string& name) {
    std::cout << j.dump(2) << '\n';
    if (!dir.empty()) io::write_text_file((std::filesystem::path(dir) / name).string(), j.dump(2) + "\n");
}

void run_and_write(const ExperimentConfig& cfg, const std::string& stem) {
    const SuccessReport rep = run_experiment(cfg);
    std::ostringstream csv;
    io::write_report_csv(csv, rep);
    std::cout << csv.str();
    if (!cfg.out.empty()) {
        const std::filesystem::path dir(cfg.out);
        io::write_text_file((dir / (stem + ".csv")).string(), csv.str());
        json j = io::report_to_json(rep);
        j["config"] = io::experiment_to_json(cfg);
        io::write_text_file((dir / (stem + ".json")).string(), j.dump(2) + "\n");
        std::cerr << "wrote " << (dir / (stem + ".csv")).string() << " and " << (dir / (stem + ".json")).string() << '\n';
    }
}

std::vector<std::vector<std::size_t>> parse_groups(const std::string& text, std::size_t arity) {
    std::vector<std::vector<std::size_t>> groups;
    if (text.empty()) {
        for (std::size_t i = 0; i < arity; ++i) groups.push_back({i});
        return groups;
    }
    std::stringstream ss(text);
    std::string block;
    while (std::getline(ss, block, ';')) {
        std::vector<std::size_t> g;
        std::stringstream bs(block);
        std::string item;
        while (std::getline(bs, item, ',')) {
            try {
                g.push_back(std::stoul(item));
            } catch (const std::exception&) {
                throw InvalidInput("bad group entry '" + item + "'");
            }
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

int run(int argc, char** argv) {
    CLI::App app{"Relaxed-spin network simulator with rotation-symmetry readout"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));

    // run-gate
    CommonOptions gate_opts;
    int sigma_f = 1;
    unsigned gate_x = 0, gate_y = 0;
    std::vector<std::size_t> gate_order;
    auto* run_gate = app.add_subcommand("run-gate", "Success probability of an AND/OR placement");
    add_common(run_gate, gate_opts, false);
    run_gate->add_option("--sigma-f", sigma_f, "+1 for AND, -1 for OR")->check(CLI::IsMember({-1, 1}));
    run_gate->add_option("--x", gate_x, "x bit")->check(CLI::Range(0, 1));
    run_gate->add_option("--y", gate_y, "y bit")->check(CLI::Range(0, 1));
    run_gate->add_option("--order", gate_order, "Arguments in crossing order (0=x, 1=y, 2=f)")->delimiter(',');

    // run-adder
    CommonOptions add_opts;
    std::optional<std::size_t> bits;
    std::string add_x, add_y;
    std::optional<int> c_in;
    std::vector<std::size_t> add_order;
    bool no_condition = false;
    std::optional<std::uint64_t> circuit_seed;
    auto* run_adder = app.add_subcommand("run-adder", "Success probabilities of encoded adder branches");
    add_common(run_adder, add_opts, true);
    run_adder->add_option("--bits", bits, "Operand width N")->check(CLI::Range(1, 62));
    run_adder->add_option("--x", add_x, "x operand (decimal)");
    run_adder->add_option("--y", add_y, "y operand (decimal)");
    run_adder->add_option("--c-in", c_in, "Carry-in bit")->check(CLI::Range(0, 1));
    run_adder->add_option("--order", add_order, "Flip positions in crossing order (0 = carry-in)")->delimiter(',');
    run_adder->add_flag("--no-condition", no_condition, "Use the plain gate weights");
    run_adder->add_option("--circuit-seed", circuit_seed, "Seed for the conditioning primes");

    // enumerate-chains
    std::string fn_name = "and_or", groups_text, chains_out;
    auto* chains = app.add_subcommand("enumerate-chains", "Count chain classes and list broken ones");
    chains->add_option("--function", fn_name, "and_or or fa")->check(CLI::IsMember({"and_or", "fa"}));
    chains->add_option("--groups", groups_text, "Argument groups, e.g. '0,1;2' (default: singletons)");
    chains->add_option("--out", chains_out, "Output directory");

    // verify-gate
    std::string gate_name = "and";
    std::size_t verify_bits = 2;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify-gate", "Exhaustive truth-table and cut-degeneracy check");
    verify->add_option("--gate", gate_name, "and, or, fa or adder")->check(CLI::IsMember({"and", "or", "fa", "adder"}));
    verify->add_option("--bits", verify_bits, "Adder width")->check(CLI::Range(1, 5));
    verify->add_option("--out", verify_out, "Output directory");

    // readout
    std::string net_file, state_file, trajectory, readout_out;
    std::uint64_t readout_seed = 1;
    std::optional<double> r_dt, r_eps, r_tmax;
    auto* readout = app.add_subcommand("readout", "Evolve a network once and print its rotation readout");
    readout->add_option("--network", net_file, "Network JSON")->required()->check(CLI::ExistingFile);
    readout->add_option("--state", state_file, "Initial theta values (JSON array); random if omitted")->check(CLI::ExistingFile);
    readout->add_option("--seed", readout_seed, "Seed for the random initial state");
    readout->add_option("--dt", r_dt, "Integrator step");
    readout->add_option("--epsilon", r_eps, "Sign regularization half-width");
    readout->add_option("--t-max", r_tmax, "Maximum evolution time");
    readout->add_option("--trajectory", trajectory, "Write a trajectory CSV here");
    readout->add_option("--out", readout_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    if (*run_gate) {
        ExperimentConfig cfg = load_config(gate_opts);
        if (gate_opts.config.empty()) cfg.circuit.type = "and_or";
        if (cfg.circuit.type != "and_or") throw InvalidInput("run-gate expects an and_or circuit");
        if (run_gate->count("--sigma-f")) cfg.circuit.sigma_f = sigma_f;
        if (run_gate->count("--x")) cfg.circuit.x = gate_x;
        if (run_gate->count("--y")) cfg.circuit.y = gate_y;
        if (run_gate->count("--order")) cfg.circuit.order = gate_order;
        run_and_write(cfg, "gate_report");
    } else if (*run_adder) {
        ExperimentConfig cfg = load_config(add_opts);
        if (cfg.circuit.type != "adder") throw InvalidInput("run-adder expects an adder circuit");
        auto parse = [](const std::string& s, const char* what) {
            try {
                std::size_t used = 0;
                const auto v = std::stoull(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return static_cast<std::uint64_t>(v);
            } catch (const std::exception&) {
                throw InvalidInput(std::string("bad ") + what + " operand '" + s + "'");
            }
        };
        if (bits) cfg.circuit.bits = *bits;
        if (!add_x.empty()) cfg.circuit.x = parse(add_x, "x");
        if (!add_y.empty()) cfg.circuit.y = parse(add_y, "y");
        if (c_in) cfg.circuit.c_in = *c_in;
        if (run_adder->count("--order")) cfg.circuit.order = add_order;
        if (no_condition) cfg.circuit.condition = false;
        if (circuit_seed) cfg.circuit.seed = *circuit_seed;
        run_and_write(cfg, "adder_report");
    } else if (*chains) {
        const BooleanFunction fn = fn_name == "fa" ? full_adder_function() : and_or_function();
        const auto groups = parse_groups(groups_text, fn.arity);
        ChainQuotient literal;
        literal.origin_rotation = false;
        literal.global_inversion = true;
        literal.reversal = true;
        json j;
        j["function"] = fn_name;
        j["groups"] = groups;
        j["cyclic"] = io::census_to_json(enumerate_nontrivial_chains(fn, groups));
        j["linear_inversion_reversal"] = io::census_to_json(enumerate_nontrivial_chains(fn, groups, literal));
        emit(j, output_dir(chains_out), "chains.json");
    } else if (*verify) {
        GateSpec g = gate_name == "and"  ? and_or_gate(1)
                     : gate_name == "or" ? and_or_gate(-1)
                     : gate_name == "fa" ? full_adder()
                                         : ripple_carry_adder(verify_bits);
        const GateVerification v = verify_gate(g);
        json j;
        j["gate"] = gate_name;
        if (gate_name == "adder") j["N"] = verify_bits;
        j["assignments"] = v.assignments;
        j["truth_ok"] = v.truth_ok;
        j["degeneracy_ok"] = v.degeneracy_ok;
        j["consistent_cut"] = v.consistent_cut;
        j["best_violator_cut"] = v.best_violator_cut;
        j["failures"] = v.failures;
        emit(j, output_dir(verify_out), "verify_" + gate_name + ".json");
        if (!v.truth_ok || !v.degeneracy_ok) return static_cast<int>(ExitCode::data);
    } else if (*readout) {
        const SpinNetwork net = io::network_from_json(io::read_json_file(net_file), net_file);
        IntegratorConfig ic;
        ic.seed = readout_seed;
        if (r_dt) ic.dt = *r_dt;
        if (r_eps) ic.epsilon = *r_eps;
        if (r_tmax) ic.t_max = *r_tmax;
        State initial = state_file.empty() ? sample_initial(net, ic)
                                           : io::state_from_json(io::read_json_file(state_file), state_file);
        if (initial.size() != net.size()) throw DataError(state_file + ": state length does not match the network");
        std::ofstream traj;
        StepObserver obs;
        if (!trajectory.empty()) {
            traj.open(trajectory);
            if (!traj) throw DataError(trajectory + ": cannot write file");
            io::write_trajectory_header(traj, net.size());
            io::write_trajectory_row(traj, 0.0, initial, relaxed_cut(net, initial));
            const double every = ic.trace_interval > 0.0 ? ic.trace_interval : ic.dt;
            auto next = std::make_shared<double>(every);
            obs = [&, next, every](double t, const State& s) {
                if (t + 1e-12 < *next) return;
                io::write_trajectory_row(traj, t, s, relaxed_cut(net, s));
                *next = t + every;
            };
        }
        const TerminalState term = evolve(net, initial, ic, obs);
        const double tol = ic.resolved_cluster_tol();
        const CutInvariance inv = verify_cut_invariance(net, term.points, tol);
        json j;
        j["terminal"] = io::terminal_to_json(term);
        j["readout"] = io::readout_to_json(chain_readout(term.points, tol));
        j["cut_invariance"] = {{"min_cut", inv.min_cut}, {"max_cut", inv.max_cut}, {"invariant", inv.invariant}};
        j["relaxed_cut"] = relaxed_cut(net, term.points);
        emit(j, output_dir(readout_out), "readout.json");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rspin::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(rspin::ExitCode::data);
    }
}
