#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rspin/circuits.hpp"
#include "rspin/error.hpp"
#include "rspin/io.hpp"

using namespace rspin;
using io::json;

TEST(NetworkJson, RoundTripIsExact) {
    auto g = ripple_carry_adder(3, true, 4);
    auto [clamps, enc] = encode_branches(g, 5, 2, 1, {2, 0});
    apply_clamps(g.net, clamps);
    const json j = io::network_to_json(g.net);
    const auto back = io::network_from_json(io::parse_json(j.dump(), "mem"));
    ASSERT_EQ(back.size(), g.net.size());
    ASSERT_EQ(back.edges().size(), g.net.edges().size());
    for (const auto& e : g.net.edges()) EXPECT_EQ(back.weight(e.m, e.n), e.weight);
    for (std::size_t i = 0; i < g.net.size(); ++i) {
        EXPECT_EQ(back.role(i), g.net.role(i));
        EXPECT_EQ(back.is_clamped(i), g.net.is_clamped(i));
        if (back.is_clamped(i)) EXPECT_EQ(back.clamp_of(i)->theta(), g.net.clamp_of(i)->theta());
    }
}

TEST(NetworkJson, DecimalWeightsAndObjectEdges) {
    const auto net = io::network_from_json(io::parse_json(
        R"({"nodes": 3, "edges": [[0, 1, 0.1], {"m": 1, "n": 2, "weight": -2.5}], "clamps": [{"node": 2, "theta": 1.5}]})",
        "mem"));
    EXPECT_EQ(net.weight(1, 0), 0.1);
    EXPECT_EQ(net.weight(2, 1), -2.5);
    EXPECT_EQ(net.clamp_of(2)->theta(), 1.5);
}

TEST(NetworkJson, SchemaErrorsNameTheLocation) {
    try {
        io::network_from_json(io::parse_json(R"({"nodes": 2, "edges": [[0, 5, 1.0]]})", "net.json"), "net.json");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("net.json"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("edges[0]"), std::string::npos);
    }
    EXPECT_THROW(io::network_from_json(json::object(), "x"), DataError);
}

TEST(ParseJson, SyntaxErrorCarriesLineAndColumn) {
    try {
        io::parse_json("{\n  \"nodes\": 3,\n  oops\n}", "bad.json");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.json:3:"), std::string::npos) << e.what();
    }
}

TEST(CircuitJson, RoundTripKeepsLargeOperands) {
    CircuitDescription d;
    d.bits = 62;
    d.x = (std::uint64_t{1} << 61) + 12345;
    d.y = 98765;
    d.c_in = 1;
    d.order = {3, 0, 61};
    d.condition = false;
    d.seed = 44;
    d.arc = {0.2, 1.8};
    const auto back = io::circuit_from_json(io::circuit_to_json(d));
    EXPECT_EQ(back.bits, d.bits);
    EXPECT_EQ(back.x, d.x);
    EXPECT_EQ(back.y, d.y);
    EXPECT_EQ(back.c_in, d.c_in);
    EXPECT_EQ(back.order, d.order);
    EXPECT_EQ(back.condition, d.condition);
    EXPECT_EQ(back.seed, d.seed);
    EXPECT_EQ(back.arc, d.arc);
}

TEST(ExperimentJson, CircuitFileResolvesRelativeToConfig) {
    const auto dir = std::filesystem::temp_directory_path() / "rspin_io_test";
    std::filesystem::create_directories(dir);
    io::write_text_file((dir / "adder.json").string(),
                        R"({"type": "adder", "N": 4, "inputs": {"x": "9", "y": "3", "c_in": 0}, "order": [0]})");
    const auto cfg = io::experiment_from_json(
        io::parse_json(R"({"circuit_file": "adder.json", "durations": [1, 2, 8], "trials": 7, "mode": "sequential",
                          "seed": 5, "integrator": {"dt": 0.002, "epsilon": 0.02}})",
                       "cfg"),
        "cfg", dir.string());
    EXPECT_EQ(cfg.circuit.bits, 4u);
    EXPECT_EQ(cfg.circuit.x, 9u);
    EXPECT_EQ(cfg.circuit.order, (std::vector<std::size_t>{0}));
    EXPECT_EQ(cfg.durations, (std::vector<double>{1, 2, 8}));
    EXPECT_EQ(cfg.trials, 7u);
    EXPECT_EQ(cfg.mode, Mode::sequential);
    EXPECT_EQ(cfg.integrator.dt, 0.002);
    EXPECT_EQ(cfg.integrator.epsilon, 0.02);

    const auto again = io::experiment_from_json(io::experiment_to_json(cfg));
    EXPECT_EQ(config_hash(again), config_hash(cfg));
    std::filesystem::remove_all(dir);
}

TEST(ExperimentJson, RejectsUnknownMode) {
    EXPECT_THROW(io::experiment_from_json(io::parse_json(R"({"circuit": {"type": "adder"}, "mode": "fast"})", "c")), DataError);
}

TEST(StateJson, RoundTrip) {
    const State st{PhasePoint(-1.25), PhasePoint(0.0), PhasePoint(1.999)};
    EXPECT_EQ(io::state_from_json(io::state_to_json(st)), st);
}

TEST(ReportCsv, HeaderAndRows) {
    SuccessReport rep;
    rep.durations = {2.0};
    rep.branches = 1;
    BranchCell c;
    c.duration = 2.0;
    c.flip_set = {0, 3};
    c.trials = 4;
    c.successes = 3;
    rep.cells.push_back(c);
    std::ostringstream os;
    io::write_report_csv(os, rep);
    EXPECT_EQ(os.str(), "duration,branch_id,flip_set,trials,successes,probability\n2,0,\"0 3\",4,3,0.75\n");
    const json j = io::report_to_json(rep);
    EXPECT_EQ(j["cells"][0]["successes"], 3);
    EXPECT_EQ(j["groups"].size(), 1u);
}

TEST(Trajectory, HeaderNamesEveryNode) {
    std::ostringstream os;
    io::write_trajectory_header(os, 3);
    EXPECT_EQ(os.str(), "t,theta_0,theta_1,theta_2,C_V2\n");
}
