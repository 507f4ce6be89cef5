#pragma once

#include <cmath>
#include <vector>

namespace rspin {

// The double phase circle: theta in [-2, 2), sigma = +1 on [0, 2).
inline constexpr double kCircumference = 4.0;
inline constexpr double kHalfPeriod = 2.0;

inline double wrap_theta(double theta) {
    double w = theta - kCircumference * std::floor((theta + kHalfPeriod) / kCircumference);
    // floor() can leave w == 2 after rounding
    if (w >= kHalfPeriod) w -= kCircumference;
    if (w < -kHalfPeriod) w += kCircumference;
    return w;
}

// Signed difference a - b folded into [-2, 2).
inline double circular_diff(double a, double b) {
    double d = a - b;
    if (d >= kHalfPeriod) d -= kCircumference;
    else if (d < -kHalfPeriod) d += kCircumference;
    return d;
}

// Distance on the circumference-4 circle, in [0, 2].
inline double circular_distance(double a, double b) {
    return std::abs(circular_diff(a, b));
}

// Distance between continuous components, i.e. theta taken modulo 2; in [0, 1].
inline double continuous_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), kHalfPeriod);
    return d > 1.0 ? kHalfPeriod - d : d;
}

// Canonical coordinate of one relaxed spin. Holds theta = sigma + X wrapped
// into [-2, 2); sigma and X are derived.
class PhasePoint {
public:
    constexpr PhasePoint() = default;
    explicit PhasePoint(double theta) : theta_(wrap_theta(theta)) {}

    static PhasePoint from_spin(int sigma, double x) {
        return PhasePoint(static_cast<double>(sigma < 0 ? -1 : 1) + x);
    }

    double theta() const { return theta_; }
    int sigma() const { return theta_ >= 0.0 ? 1 : -1; }
    double x() const { return theta_ - static_cast<double>(sigma()); }

    PhasePoint rotated(double r) const { return PhasePoint(theta_ + r); }

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;

private:
    double theta_ = 0.0;
};

using State = std::vector<PhasePoint>;
using Spins = std::vector<int>;

inline Spins sigmas(const State& points) {
    Spins s;
    s.reserve(points.size());
    for (const auto& p : points) s.push_back(p.sigma());
    return s;
}

} // namespace rspin
