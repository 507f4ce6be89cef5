#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rspin/circuits.hpp"
#include "rspin/dynamics.hpp"
#include "rspin/experiments.hpp"
#include "rspin/network.hpp"
#include "rspin/oracle.hpp"
#include "rspin/symmetry.hpp"

namespace rspin::io {

using nlohmann::json;

// Parses text, turning syntax errors into DataError carrying origin:line:column.
json parse_json(const std::string& text, const std::string& origin);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// {"nodes": n, "roles": [...], "clamps": [{"node", "theta"}], "edges": [[m, n, w], ...]}
json network_to_json(const SpinNetwork& net);
SpinNetwork network_from_json(const json& j, const std::string& origin = "network");

// {"type", "N", "condition", "seed", "inputs": {"x", "y", "c_in"}, "order", "arc", "sigma_f"}
// with x and y as decimal strings.
json circuit_to_json(const CircuitDescription& desc);
CircuitDescription circuit_from_json(const json& j, const std::string& origin = "circuit");

// Either a bare circuit description or {"circuit" | "circuit_file", "durations",
// "trials", "mode", "seed", "out", "integrator": {...}}. Relative circuit_file
// paths resolve against base_dir.
ExperimentConfig experiment_from_json(const json& j, const std::string& origin = "config",
                                      const std::string& base_dir = ".");
json experiment_to_json(const ExperimentConfig& cfg);

json integrator_to_json(const IntegratorConfig& cfg);
void integrator_update_from_json(IntegratorConfig& cfg, const json& j, const std::string& origin);

json state_to_json(const State& points);
State state_from_json(const json& j, const std::string& origin = "state");

json terminal_to_json(const TerminalState& term);
json readout_to_json(const ChainReadout& chain);
json decode_to_json(const DecodeReport& rep);
json encoding_to_json(const BranchEncoding& enc);
json census_to_json(const ChainCensus& census);

json report_to_json(const SuccessReport& report);
// duration,branch_id,flip_set,trials,successes,probability
void write_report_csv(std::ostream& os, const SuccessReport& report);

// t,theta_0..theta_{n-1},C_V2
void write_trajectory_header(std::ostream& os, std::size_t n);
void write_trajectory_row(std::ostream& os, double t, const State& points, double cut);

} // namespace rspin::io
