#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rspin/network.hpp"
#include "rspin/phase.hpp"

namespace rspin {

struct IntegratorConfig {
    double dt = 1e-3;
    // Half-width of the piecewise-linear sign regularization; 0 selects exact sgn.
    double epsilon = 1e-2;
    double t_max = 50.0;
    // Defaults to 1e-6 * max|A| when unset.
    std::optional<double> eq_tol;
    double eq_window = 1.0;
    // Defaults to 10 * epsilon when unset.
    std::optional<double> cluster_tol;
    // Spacing of lyapunov_trace samples in time units; 0 disables sampling.
    double trace_interval = 0.1;
    std::uint64_t seed = 1;

    double resolved_eq_tol(const SpinNetwork& net) const;
    double resolved_cluster_tol() const;
    void validate() const;
};

using Partition = std::vector<std::vector<std::size_t>>;

struct TerminalState {
    State points;
    Partition clusters;
    double elapsed = 0.0;
    std::vector<std::pair<double, double>> lyapunov_trace; // (t, C_V2)
    bool converged = false;
};

// Regularized sign of a signed circular difference d in [-2, 2). Odd in d,
// vanishes at coincidence and at the antipode, and is +-1 elsewhere once
// epsilon -> 0. For epsilon == 0 this is sgn with sgn(0) = 0.
double coupling_sign(double d, double epsilon);

// dX/dt per node; clamped nodes report 0.
std::vector<double> rate(const SpinNetwork& net, const State& points, const IntegratorConfig& cfg);
State step(const SpinNetwork& net, const State& points, const IntegratorConfig& cfg);

double discrete_cut(const SpinNetwork& net, const Spins& sigma);
double ising_energy(const SpinNetwork& net, const Spins& sigma);
double cut_correction(const SpinNetwork& net, const State& points);
double relaxed_cut(const SpinNetwork& net, const State& points);
// Lyapunov function of the regularized flow; equals relaxed_cut at epsilon = 0
// and stays within epsilon * sum|A| / 2 of it otherwise.
double regularized_cut(const SpinNetwork& net, const State& points, double epsilon);

// Clusters of coinciding continuous components (theta modulo 2), closed
// transitively under distance <= tol. Groups are ordered by smallest member.
Partition detect_clusters(const State& points, double cluster_tol);

State sample_initial(const SpinNetwork& net, const IntegratorConfig& cfg);

// Called after every accepted step with (t, state).
using StepObserver = std::function<void(double, const State&)>;

// Explicit first-order integrator with the stopping rule used by evolve().
// Exposed so callers can snapshot a single trajectory at several durations.
class Integrator {
public:
    Integrator(const SpinNetwork& net, State initial, const IntegratorConfig& cfg);

    // Advances until t >= t_stop or equilibrium is declared. Returns converged().
    bool advance_to(double t_stop, const StepObserver& observer = {});

    double time() const { return t_; }
    bool converged() const { return converged_; }
    State state() const;
    TerminalState terminal() const;

private:
    void compute_rates();
    void sample_trace();

    const SpinNetwork& net_;
    IntegratorConfig cfg_;
    double eq_tol_;
    double cluster_tol_;
    std::vector<double> theta_;
    std::vector<double> rates_;
    std::vector<char> clamped_;
    double t_ = 0.0;
    double calm_since_ = -1.0;
    double next_trace_ = 0.0;
    bool converged_ = false;
    std::vector<std::pair<double, double>> trace_;
};

TerminalState evolve(const SpinNetwork& net, const State& initial, const IntegratorConfig& cfg,
                     const StepObserver& observer = {});

} // namespace rspin
