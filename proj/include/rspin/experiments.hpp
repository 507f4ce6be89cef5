#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rspin/circuits.hpp"
#include "rspin/dynamics.hpp"

namespace rspin {

enum class Mode { concurrent, sequential };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

// What to build and how its inputs sit on the phase circle.
//
// For adders, order lists flip positions (0 = carry-in, k = bit pair k). For
// and_or, order lists argument indices (0 = x, 1 = y, 2 = f); x and y are
// single bits and unlisted arguments share the last group.
struct CircuitDescription {
    std::string type = "adder";  // "adder" | "and_or"
    std::size_t bits = 4;
    bool condition = true;
    std::uint64_t seed = 1;
    std::uint64_t x = 0;
    std::uint64_t y = 0;
    int c_in = 0;
    int sigma_f = 1;
    std::vector<std::size_t> order;
    std::pair<double, double> arc{0.1, 1.9};

    void validate() const;
};

struct ExperimentConfig {
    CircuitDescription circuit;
    std::vector<double> durations{10.0};
    std::size_t trials = 100;
    Mode mode = Mode::concurrent;
    IntegratorConfig integrator;
    std::uint64_t seed = 1;
    std::string out;
    // 0 uses every hardware thread. Results never depend on this.
    std::size_t threads = 0;

    void validate() const;
};

// Compiled circuit ready for trials: clamped network plus branch bookkeeping.
struct PreparedCircuit {
    GateSpec gate;  // clamps applied
    std::optional<BranchEncoding> encoding;  // adders only
    std::vector<double> rotations;           // readout rotation per branch
    std::vector<std::vector<std::size_t>> flip_sets;
    std::vector<std::uint64_t> expected;     // expected output word per branch
};

PreparedCircuit prepare_circuit(const CircuitDescription& desc);

// Output word of a gate at rotation r: output spin j is bit j.
std::uint64_t output_word(const GateSpec& gate, const State& points, double r);

struct BranchCell {
    double duration = 0.0;
    std::size_t branch = 0;
    std::vector<std::size_t> flip_set;
    std::uint64_t expected = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t certified = 0;  // trials whose run had converged

    double probability() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
};

struct SuccessReport {
    std::string circuit_type;
    Mode mode = Mode::concurrent;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string version;
    std::vector<double> durations;
    std::size_t branches = 0;
    std::vector<BranchCell> cells;  // duration-major

    const BranchCell& cell(std::size_t duration_index, std::size_t branch) const {
        return cells.at(duration_index * branches + branch);
    }
};

// Independent stream per trial; equal (seed, trial) always gives equal streams.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

SuccessReport run_concurrent(const ExperimentConfig& cfg);
// Adders only: full adders relax one at a time in index order, each for the
// full duration, with carry-in clamped where the previous carry-out settled.
SuccessReport run_sequential(const ExperimentConfig& cfg);
SuccessReport run_experiment(const ExperimentConfig& cfg);

struct GroupStat {
    double duration = 0.0;
    std::uint64_t expected = 0;
    std::vector<std::size_t> branches;
    double min_probability = 0.0;
    double max_probability = 0.0;
    double spread() const { return max_probability - min_probability; }
};

// Branches grouped by expected output, per duration, ordered by first branch.
std::vector<GroupStat> group_analysis(const SuccessReport& report);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

// FNV-1a over a canonical text form of the configuration.
std::string config_hash(const ExperimentConfig& cfg);

const char* library_version();

} // namespace rspin
