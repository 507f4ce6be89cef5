#include "rspin/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rspin/error.hpp"

namespace rspin::io {

namespace {

[[noreturn]] void schema_error(const std::string& origin, const std::string& where, const std::string& what) {
    throw DataError(origin + ": " + (where.empty() ? "" : where + ": ") + what);
}

const json& require(const json& j, const char* key, const std::string& origin) {
    if (!j.is_object()) schema_error(origin, "", "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(origin, "", std::string("missing key '") + key + "'");
    return *it;
}

template <typename T>
T get_as(const json& j, const std::string& origin, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        schema_error(origin, where, e.what());
    }
}

double get_number(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_number()) schema_error(origin, where, "expected a number");
    return j.get<double>();
}

std::size_t get_index(const json& j, const std::string& origin, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        schema_error(origin, where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::uint64_t parse_u64(const json& j, const std::string& origin, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (!j.is_string()) schema_error(origin, where, "expected a decimal string");
    const std::string s = j.get<std::string>();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        schema_error(origin, where, "'" + s + "' is not an unsigned decimal integer");
    return v;
}

// Shortest text that reads back as the same double.
std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

} // namespace

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(origin + ":" + line_column(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot write file");
    out << text;
    if (!out) throw DataError(path + ": write failed");
}

json network_to_json(const SpinNetwork& net) {
    json j;
    j["nodes"] = net.size();
    json roles = json::array();
    for (std::size_t i = 0; i < net.size(); ++i) roles.push_back(std::string(to_string(net.role(i))));
    j["roles"] = roles;
    json clamps = json::array();
    for (std::size_t i : net.clamped_nodes()) clamps.push_back({{"node", i}, {"theta", net.clamp_of(i)->theta()}});
    j["clamps"] = clamps;
    json edges = json::array();
    for (const auto& e : net.edges()) edges.push_back(json::array({e.m, e.n, e.weight}));
    j["edges"] = edges;
    return j;
}

SpinNetwork network_from_json(const json& j, const std::string& origin) {
    const std::size_t n = get_index(require(j, "nodes", origin), origin, "nodes");
    SpinNetwork net(n);
    try {
        if (j.contains("roles")) {
            const auto& roles = j["roles"];
            if (!roles.is_array() || roles.size() != n) schema_error(origin, "roles", "expected one role per node");
            for (std::size_t i = 0; i < n; ++i)
                net.set_role(i, role_from_string(get_as<std::string>(roles[i], origin, "roles[" + std::to_string(i) + "]")));
        }
        if (j.contains("edges")) {
            const auto& edges = j["edges"];
            if (!edges.is_array()) schema_error(origin, "edges", "expected an array");
            for (std::size_t k = 0; k < edges.size(); ++k) {
                const std::string where = "edges[" + std::to_string(k) + "]";
                const auto& e = edges[k];
                std::size_t m = 0, nn = 0;
                double w = 0.0;
                if (e.is_array()) {
                    if (e.size() != 3) schema_error(origin, where, "expected [m, n, weight]");
                    m = get_index(e[0], origin, where);
                    nn = get_index(e[1], origin, where);
                    w = get_number(e[2], origin, where);
                } else {
                    m = get_index(require(e, "m", origin), origin, where);
                    nn = get_index(require(e, "n", origin), origin, where);
                    w = get_number(require(e, "weight", origin), origin, where);
                }
                try {
                    net.set_weight(m, nn, w);
                } catch (const InvalidInput& err) {
                    schema_error(origin, where, err.what());
                }
            }
        }
        if (j.contains("clamps")) {
            const auto& clamps = j["clamps"];
            if (!clamps.is_array()) schema_error(origin, "clamps", "expected an array");
            for (std::size_t k = 0; k < clamps.size(); ++k) {
                const std::string where = "clamps[" + std::to_string(k) + "]";
                const double theta = get_number(require(clamps[k], "theta", origin), origin, where);
                if (!(theta >= -kHalfPeriod && theta < kHalfPeriod)) schema_error(origin, where, "theta must lie in [-2, 2)");
                net.clamp(get_index(require(clamps[k], "node", origin), origin, where), PhasePoint(theta));
            }
        }
        net.validate();
    } catch (const DataError&) {
        throw;
    } catch (const Error& e) {
        schema_error(origin, "", e.what());
    }
    return net;
}

json circuit_to_json(const CircuitDescription& d) {
    json j;
    j["type"] = d.type;
    j["N"] = d.bits;
    j["condition"] = d.condition;
    j["seed"] = d.seed;
    j["inputs"] = {{"x", std::to_string(d.x)}, {"y", std::to_string(d.y)}, {"c_in", d.c_in}};
    j["order"] = d.order;
    j["arc"] = json::array({d.arc.first, d.arc.second});
    j["sigma_f"] = d.sigma_f;
    return j;
}

CircuitDescription circuit_from_json(const json& j, const std::string& origin) {
    CircuitDescription d;
    d.type = get_as<std::string>(require(j, "type", origin), origin, "type");
    if (j.contains("N")) d.bits = get_index(j["N"], origin, "N");
    if (j.contains("condition")) d.condition = get_as<bool>(j["condition"], origin, "condition");
    if (j.contains("seed")) d.seed = parse_u64(j["seed"], origin, "seed");
    if (j.contains("inputs")) {
        const auto& in = j["inputs"];
        if (!in.is_object()) schema_error(origin, "inputs", "expected an object");
        if (in.contains("x")) d.x = parse_u64(in["x"], origin, "inputs.x");
        if (in.contains("y")) d.y = parse_u64(in["y"], origin, "inputs.y");
        if (in.contains("c_in")) {
            const auto& c = in["c_in"];
            d.c_in = static_cast<int>(c.is_string() ? parse_u64(c, origin, "inputs.c_in") : get_index(c, origin, "inputs.c_in"));
        }
    }
    if (j.contains("order")) {
        const auto& o = j["order"];
        if (!o.is_array()) schema_error(origin, "order", "expected an array");
        for (std::size_t k = 0; k < o.size(); ++k) d.order.push_back(get_index(o[k], origin, "order[" + std::to_string(k) + "]"));
    }
    if (j.contains("arc")) {
        const auto& a = j["arc"];
        if (!a.is_array() || a.size() != 2) schema_error(origin, "arc", "expected [theta_lo, theta_hi]");
        d.arc = {get_number(a[0], origin, "arc[0]"), get_number(a[1], origin, "arc[1]")};
    }
    if (j.contains("sigma_f")) d.sigma_f = get_as<int>(j["sigma_f"], origin, "sigma_f");
    try {
        d.validate();
    } catch (const InvalidInput& e) {
        schema_error(origin, "", e.what());
    }
    return d;
}

json integrator_to_json(const IntegratorConfig& c) {
    json j;
    j["dt"] = c.dt;
    j["epsilon"] = c.epsilon;
    j["t_max"] = c.t_max;
    j["eq_window"] = c.eq_window;
    j["trace_interval"] = c.trace_interval;
    j["seed"] = c.seed;
    if (c.eq_tol) j["eq_tol"] = *c.eq_tol;
    if (c.cluster_tol) j["cluster_tol"] = *c.cluster_tol;
    return j;
}

void integrator_update_from_json(IntegratorConfig& c, const json& j, const std::string& origin) {
    if (!j.is_object()) schema_error(origin, "integrator", "expected an object");
    if (j.contains("dt")) c.dt = get_number(j["dt"], origin, "integrator.dt");
    if (j.contains("epsilon")) c.epsilon = get_number(j["epsilon"], origin, "integrator.epsilon");
    if (j.contains("t_max")) c.t_max = get_number(j["t_max"], origin, "integrator.t_max");
    if (j.contains("eq_window")) c.eq_window = get_number(j["eq_window"], origin, "integrator.eq_window");
    if (j.contains("trace_interval")) c.trace_interval = get_number(j["trace_interval"], origin, "integrator.trace_interval");
    if (j.contains("seed")) c.seed = parse_u64(j["seed"], origin, "integrator.seed");
    if (j.contains("eq_tol")) c.eq_tol = get_number(j["eq_tol"], origin, "integrator.eq_tol");
    if (j.contains("cluster_tol")) c.cluster_tol = get_number(j["cluster_tol"], origin, "integrator.cluster_tol");
}

ExperimentConfig experiment_from_json(const json& j, const std::string& origin, const std::string& base_dir) {
    if (!j.is_object()) schema_error(origin, "", "expected an object");
    ExperimentConfig cfg;
    if (j.contains("type")) {
        cfg.circuit = circuit_from_json(j, origin);
        return cfg;
    }
    if (j.contains("circuit")) {
        cfg.circuit = circuit_from_json(j["circuit"], origin + ": circuit");
    } else if (j.contains("circuit_file")) {
        std::filesystem::path p(get_as<std::string>(j["circuit_file"], origin, "circuit_file"));
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        cfg.circuit = circuit_from_json(read_json_file(p.string()), p.string());
    } else {
        schema_error(origin, "", "expected 'type', 'circuit' or 'circuit_file'");
    }
    if (j.contains("durations")) {
        const auto& d = j["durations"];
        if (!d.is_array()) schema_error(origin, "durations", "expected an array");
        cfg.durations.clear();
        for (std::size_t k = 0; k < d.size(); ++k) cfg.durations.push_back(get_number(d[k], origin, "durations[" + std::to_string(k) + "]"));
    }
    if (j.contains("trials")) cfg.trials = get_index(j["trials"], origin, "trials");
    if (j.contains("mode")) {
        try {
            cfg.mode = mode_from_string(get_as<std::string>(j["mode"], origin, "mode"));
        } catch (const InvalidInput& e) {
            schema_error(origin, "mode", e.what());
        }
    }
    if (j.contains("seed")) cfg.seed = parse_u64(j["seed"], origin, "seed");
    if (j.contains("out")) cfg.out = get_as<std::string>(j["out"], origin, "out");
    if (j.contains("threads")) cfg.threads = get_index(j["threads"], origin, "threads");
    if (j.contains("integrator")) integrator_update_from_json(cfg.integrator, j["integrator"], origin);
    return cfg;
}

json experiment_to_json(const ExperimentConfig& cfg) {
    json j;
    j["circuit"] = circuit_to_json(cfg.circuit);
    j["durations"] = cfg.durations;
    j["trials"] = cfg.trials;
    j["mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["integrator"] = integrator_to_json(cfg.integrator);
    if (!cfg.out.empty()) j["out"] = cfg.out;
    return j;
}

json state_to_json(const State& points) {
    json a = json::array();
    for (const auto& p : points) a.push_back(p.theta());
    return a;
}

State state_from_json(const json& j, const std::string& origin) {
    const json& arr = j.is_object() ? require(j, "points", origin) : j;
    if (!arr.is_array()) schema_error(origin, "", "expected an array of theta values");
    State s;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const double th = get_number(arr[k], origin, "[" + std::to_string(k) + "]");
        if (!std::isfinite(th)) schema_error(origin, "[" + std::to_string(k) + "]", "theta must be finite");
        s.emplace_back(th);
    }
    return s;
}

json terminal_to_json(const TerminalState& term) {
    json j;
    j["points"] = state_to_json(term.points);
    j["clusters"] = term.clusters;
    j["elapsed"] = term.elapsed;
    j["converged"] = term.converged;
    json trace = json::array();
    for (const auto& [t, c] : term.lyapunov_trace) trace.push_back(json::array({t, c}));
    j["lyapunov_trace"] = trace;
    return j;
}

json readout_to_json(const ChainReadout& chain) {
    json j;
    j["base_sigma"] = chain.base_sigma;
    json entries = json::array();
    for (const auto& e : chain.entries) entries.push_back({{"r", e.r}, {"sigma", e.sigma}, {"flipped", e.flipped}});
    j["entries"] = entries;
    return j;
}

json decode_to_json(const DecodeReport& rep) {
    json j;
    j["certified"] = rep.certified;
    json branches = json::array();
    for (const auto& b : rep.branches)
        branches.push_back({{"flipped", b.flipped},
                            {"rotation", b.rotation},
                            {"observed_sum", std::to_string(b.observed_sum)},
                            {"expected_sum", std::to_string(b.expected_sum)},
                            {"correct", b.correct}});
    j["branches"] = branches;
    return j;
}

json encoding_to_json(const BranchEncoding& enc) {
    json j;
    j["N"] = enc.bits;
    j["order"] = enc.order;
    j["arc"] = json::array({enc.arc.first, enc.arc.second});
    json placement = json::array();
    for (const auto& g : enc.placement) placement.push_back({{"positions", g.positions}, {"offset", g.offset}});
    j["placement"] = placement;
    j["flip_sequence"] = enc.flip_sequence;
    json args = json::array();
    for (const auto& a : enc.branch_args)
        args.push_back({{"x", std::to_string(a.x)}, {"y", std::to_string(a.y)}, {"c_in", a.c}});
    j["branch_args"] = args;
    return j;
}

json census_to_json(const ChainCensus& census) {
    json j;
    j["total"] = census.total;
    json broken = json::array();
    for (const auto& [base, chain] : census.broken) broken.push_back({{"base", base}, {"steps", chain.steps}});
    j["broken"] = broken;
    j["broken_count"] = census.broken.size();
    return j;
}

json report_to_json(const SuccessReport& r) {
    json j;
    j["metadata"] = {{"circuit_type", r.circuit_type},
                     {"mode", to_string(r.mode)},
                     {"seed", r.seed},
                     {"config_hash", r.config_hash},
                     {"version", r.version}};
    j["durations"] = r.durations;
    json cells = json::array();
    for (const auto& c : r.cells) {
        const Interval ci = wilson_interval(c.successes, c.trials);
        cells.push_back({{"duration", c.duration},
                         {"branch_id", c.branch},
                         {"flip_set", c.flip_set},
                         {"expected", std::to_string(c.expected)},
                         {"trials", c.trials},
                         {"successes", c.successes},
                         {"certified", c.certified},
                         {"probability", c.probability()},
                         {"wilson95", json::array({ci.lo, ci.hi})}});
    }
    j["cells"] = cells;
    json groups = json::array();
    for (const auto& g : group_analysis(r))
        groups.push_back({{"duration", g.duration},
                          {"expected", std::to_string(g.expected)},
                          {"branches", g.branches},
                          {"min_probability", g.min_probability},
                          {"max_probability", g.max_probability},
                          {"spread", g.spread()}});
    j["groups"] = groups;
    return j;
}

void write_report_csv(std::ostream& os, const SuccessReport& r) {
    os << "duration,branch_id,flip_set,trials,successes,probability\n";
    for (const auto& c : r.cells) {
        std::string flips;
        for (std::size_t i = 0; i < c.flip_set.size(); ++i) flips += (i ? " " : "") + std::to_string(c.flip_set[i]);
        os << shortest(c.duration) << ',' << c.branch << ',' << '"' << flips << '"' << ',' << c.trials << ','
           << c.successes << ',' << shortest(c.probability()) << '\n';
    }
}

void write_trajectory_header(std::ostream& os, std::size_t n) {
    os << 't';
    for (std::size_t i = 0; i < n; ++i) os << ",theta_" << i;
    os << ",C_V2\n";
}

void write_trajectory_row(std::ostream& os, double t, const State& points, double cut) {
    os << shortest(t);
    for (const auto& p : points) os << ',' << shortest(p.theta());
    os << ',' << shortest(cut) << '\n';
}

} // namespace rspin::io
