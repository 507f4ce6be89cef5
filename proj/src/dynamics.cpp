#include "rspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "rspin/error.hpp"

namespace rspin {

double IntegratorConfig::resolved_eq_tol(const SpinNetwork& net) const {
    return eq_tol ? *eq_tol : 1e-6 * net.max_abs_weight();
}

double IntegratorConfig::resolved_cluster_tol() const {
    return cluster_tol ? *cluster_tol : 10.0 * epsilon;
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be positive");
    if (!(epsilon >= 0.0) || epsilon >= 1.0) throw InvalidInput("epsilon must lie in [0, 1)");
    if (!(t_max >= 0.0)) throw InvalidInput("t_max must be non-negative");
    if (eq_tol && !(*eq_tol >= 0.0)) throw InvalidInput("eq_tol must be non-negative");
    if (!(eq_window >= 0.0)) throw InvalidInput("eq_window must be non-negative");
    if (cluster_tol && !(*cluster_tol >= 0.0)) throw InvalidInput("cluster_tol must be non-negative");
    if (!(trace_interval >= 0.0)) throw InvalidInput("trace_interval must be non-negative");
}

double coupling_sign(double d, double epsilon) {
    if (epsilon <= 0.0) {
        if (d == 0.0 || std::abs(d) >= kHalfPeriod) return 0.0;
        return d > 0.0 ? 1.0 : -1.0;
    }
    double near_zero = std::clamp(d / epsilon, -1.0, 1.0);
    double near_antipode = std::clamp((kHalfPeriod - std::abs(d)) / epsilon, 0.0, 1.0);
    return near_zero * near_antipode;
}

namespace {

void check_size(const SpinNetwork& net, std::size_t n, const char* what) {
    if (n != net.size())
        throw InvalidInput(std::string(what) + " has length " + std::to_string(n) +
                           ", network has " + std::to_string(net.size()) + " nodes");
}

void accumulate_rates(const SpinNetwork& net, const double* theta, double epsilon, double* out) {
    std::fill(out, out + net.size(), 0.0);
    for (const auto& e : net.edges()) {
        double g = e.weight * coupling_sign(circular_diff(theta[e.m], theta[e.n]), epsilon);
        out[e.m] += g;
        out[e.n] -= g;
    }
}

// Antiderivative of coupling_sign on [0, 2], normalized so that it equals the
// circular distance when epsilon == 0.
double smoothed_distance(double delta, double epsilon) {
    if (epsilon <= 0.0) return delta;
    if (delta <= epsilon) return delta * delta / (2.0 * epsilon);
    if (delta <= kHalfPeriod - epsilon) return delta - epsilon / 2.0;
    double tail = kHalfPeriod - delta;
    return kHalfPeriod - 1.5 * epsilon + (epsilon * epsilon - tail * tail) / (2.0 * epsilon);
}

} // namespace

std::vector<double> rate(const SpinNetwork& net, const State& points, const IntegratorConfig& cfg) {
    check_size(net, points.size(), "state");
    std::vector<double> theta(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) theta[i] = points[i].theta();
    std::vector<double> out(points.size());
    accumulate_rates(net, theta.data(), cfg.epsilon, out.data());
    for (std::size_t i = 0; i < points.size(); ++i)
        if (net.is_clamped(i)) out[i] = 0.0;
    return out;
}

State step(const SpinNetwork& net, const State& points, const IntegratorConfig& cfg) {
    auto r = rate(net, points, cfg);
    State next = points;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(r[i])) throw NumericError("non-finite rate at node " + std::to_string(i));
        if (r[i] != 0.0) next[i] = PhasePoint(points[i].theta() + cfg.dt * r[i]);
    }
    return next;
}

double discrete_cut(const SpinNetwork& net, const Spins& sigma) {
    check_size(net, sigma.size(), "spin vector");
    double c = 0.0;
    for (const auto& e : net.edges())
        if (sigma[e.m] != sigma[e.n]) c += e.weight;
    return c;
}

double ising_energy(const SpinNetwork& net, const Spins& sigma) {
    check_size(net, sigma.size(), "spin vector");
    double h = 0.0;
    for (const auto& e : net.edges()) h += e.weight * sigma[e.m] * sigma[e.n];
    return h;
}

double cut_correction(const SpinNetwork& net, const State& points) {
    check_size(net, points.size(), "state");
    double c = 0.0;
    for (const auto& e : net.edges()) {
        const auto& a = points[e.m];
        const auto& b = points[e.n];
        c += e.weight * a.sigma() * b.sigma() * std::abs(a.x() - b.x());
    }
    return 0.5 * c;
}

double relaxed_cut(const SpinNetwork& net, const State& points) {
    return discrete_cut(net, sigmas(points)) + cut_correction(net, points);
}

double regularized_cut(const SpinNetwork& net, const State& points, double epsilon) {
    check_size(net, points.size(), "state");
    double c = 0.0;
    for (const auto& e : net.edges())
        c += e.weight * smoothed_distance(circular_distance(points[e.m].theta(), points[e.n].theta()), epsilon);
    return 0.5 * c;
}

Partition detect_clusters(const State& points, double cluster_tol) {
    const std::size_t n = points.size();
    if (n == 0) return {};
    std::vector<double> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = points[i].x() + 1.0; // in [0, 2)
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return pos[a] < pos[b]; });

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (pos[order[k + 1]] - pos[order[k]] <= cluster_tol) unite(order[k], order[k + 1]);
    if (n > 1 && pos[order.front()] + kHalfPeriod - pos[order.back()] <= cluster_tol)
        unite(order.front(), order.back());

    Partition groups;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = find(i);
        if (slot[root] == n) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(i);
    }
    return groups;
}

State sample_initial(const SpinNetwork& net, const IntegratorConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(-kHalfPeriod, kHalfPeriod);
    State s(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (const auto& c = net.clamp_of(i)) s[i] = *c;
        else s[i] = PhasePoint(uniform(rng));
    }
    return s;
}

Integrator::Integrator(const SpinNetwork& net, State initial, const IntegratorConfig& cfg)
    : net_(net), cfg_(cfg) {
    cfg_.validate();
    net_.validate();
    check_size(net_, initial.size(), "initial state");
    eq_tol_ = cfg_.resolved_eq_tol(net_);
    cluster_tol_ = cfg_.resolved_cluster_tol();
    theta_.resize(initial.size());
    rates_.assign(initial.size(), 0.0);
    clamped_.resize(initial.size());
    bool any_free = false;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        clamped_[i] = net_.is_clamped(i) ? 1 : 0;
        theta_[i] = clamped_[i] ? net_.clamp_of(i)->theta() : initial[i].theta();
        any_free = any_free || !clamped_[i];
    }
    converged_ = !any_free;
    if (cfg_.trace_interval > 0.0) sample_trace();
}

void Integrator::compute_rates() {
    accumulate_rates(net_, theta_.data(), cfg_.epsilon, rates_.data());
}

void Integrator::sample_trace() {
    trace_.emplace_back(t_, relaxed_cut(net_, state()));
    next_trace_ = t_ + cfg_.trace_interval;
}

bool Integrator::advance_to(double t_stop, const StepObserver& observer) {
    const double dt = cfg_.dt;
    const std::size_t n = theta_.size();
    // Step count from a fixed origin keeps t free of accumulated rounding.
    auto steps_done = static_cast<long long>(std::llround(t_ / dt));
    while (!converged_ && t_ < t_stop - 1e-12 * dt) {
        compute_rates();
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (clamped_[i]) continue;
            if (!std::isfinite(rates_[i]))
                throw NumericError("non-finite rate at node " + std::to_string(i) + ", t = " + std::to_string(t_));
            peak = std::max(peak, std::abs(rates_[i]));
        }
        if (peak <= eq_tol_) {
            if (calm_since_ < 0.0) calm_since_ = t_;
            if (t_ - calm_since_ >= cfg_.eq_window) {
                converged_ = true;
                break;
            }
        } else {
            calm_since_ = -1.0;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (!clamped_[i] && rates_[i] != 0.0) theta_[i] = wrap_theta(theta_[i] + dt * rates_[i]);
        ++steps_done;
        t_ = static_cast<double>(steps_done) * dt;
        if (observer) observer(t_, state());
        if (cfg_.trace_interval > 0.0 && t_ >= next_trace_ - 1e-12) sample_trace();
    }
    return converged_;
}

State Integrator::state() const {
    State s;
    s.reserve(theta_.size());
    for (double th : theta_) s.emplace_back(th);
    return s;
}

TerminalState Integrator::terminal() const {
    TerminalState ts;
    ts.points = state();
    ts.clusters = detect_clusters(ts.points, cluster_tol_);
    ts.elapsed = t_;
    ts.lyapunov_trace = trace_;
    ts.converged = converged_;
    return ts;
}

TerminalState evolve(const SpinNetwork& net, const State& initial, const IntegratorConfig& cfg,
                     const StepObserver& observer) {
    Integrator integ(net, initial, cfg);
    integ.advance_to(cfg.t_max, observer);
    return integ.terminal();
}

} // namespace rspin
