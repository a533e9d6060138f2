// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls into the library's numerical code.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "sgim/interest.hpp"
#include "sgim/motion.hpp"
#include "sgim/table.hpp"

namespace oracle {

struct Sound {
    double f = 0.0;
    double l = 0.0;
    double b = 0.0;
};

/// Burst sound written directly from its definition on a W x H table.
inline Sound burst(double width, double height, double radius, sgim::Vec2 blue, sgim::Vec2 green) {
    const double diag = std::sqrt(width * width + height * height);
    const double dx0 = blue.x, dx1 = width - blue.x;
    const double dy0 = blue.y, dy1 = height - blue.y;
    const double d_min = std::min({std::sqrt(dx0 * dx0 + dy0 * dy0), std::sqrt(dx1 * dx1 + dy0 * dy0),
                                   std::sqrt(dx0 * dx0 + dy1 * dy1), std::sqrt(dx1 * dx1 + dy1 * dy1)});
    const double r_min = 2.0 * radius;
    const double ex = green.x - blue.x, ey = green.y - blue.y;
    const double r = std::max(std::sqrt(ex * ex + ey * ey), r_min);
    const double abs_phi = std::atan2(std::fabs(ey), ex);

    Sound s;
    s.f = 1.0 - 4.0 * d_min / diag;
    s.l = 1.0 - 2.0 * std::log(r / r_min) / std::log(diag / r_min);
    s.b = 0.05 + 0.95 * abs_phi / std::numbers::pi;
    return s;
}

inline double duration(double width, double height, sgim::Vec2 green, sgim::Vec2 touch) {
    const double dx = touch.x - green.x, dy = touch.y - green.y;
    return std::sqrt(dx * dx + dy * dy) / std::sqrt(width * width + height * height);
}

/// Tip position as a sum of unit phasors along the chain.
inline sgim::Vec2 tip(const sgim::JointVector& q, const sgim::ArmModel& arm) {
    std::complex<double> z(arm.base.x, arm.base.y);
    double angle = arm.base_angle;
    for (std::size_t j = 0; j < sgim::kJointCount; ++j) {
        angle += q[j];
        z += std::polar(arm.links[j], angle);
    }
    return {z.real(), z.imag()};
}

/// Single-joint DMP endpoint by classical RK4 on (x, v, s), single basis
/// function (forcing = s), no joint limits.
inline double dmp_endpoint_rk4(double x0, double goal, double weight, double stiffness, double damping,
                               double alpha, double tau, double duration, std::size_t steps) {
    struct State {
        double x, v, s;
    };
    auto deriv = [&](const State& y) {
        const double acc = (stiffness * (goal - y.x) - damping * y.v + (goal - x0) * weight * y.s) / tau;
        return State{y.v / tau, acc, -alpha * y.s / tau};
    };
    auto axpy = [](const State& y, double h, const State& k) {
        return State{y.x + h * k.x, y.v + h * k.v, y.s + h * k.s};
    };
    const double h = duration / static_cast<double>(steps);
    State y{x0, 0.0, 1.0};
    for (std::size_t i = 0; i < steps; ++i) {
        const State k1 = deriv(y);
        const State k2 = deriv(axpy(y, h / 2, k1));
        const State k3 = deriv(axpy(y, h / 2, k2));
        const State k4 = deriv(axpy(y, h, k3));
        y.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        y.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
        y.s += h / 6 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
    }
    return y.x;
}

/// Survival function of the chi-square distribution for 1 or 2 degrees of freedom.
inline double chi_square_sf(double statistic, int dof) {
    if (dof == 1) return std::erfc(std::sqrt(statistic / 2.0));
    if (dof == 2) return std::exp(-statistic / 2.0);
    return std::nan("");
}

inline double chi_square(std::span<const std::size_t> observed, std::span<const double> probability) {
    std::size_t total = 0;
    for (std::size_t o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = probability[i] * static_cast<double>(total);
        const double diff = static_cast<double>(observed[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

/// Regions of one subspace tile the unit cube: volumes add up to one and
/// every stored sample lies in the region holding it and in no other.
inline bool tiles_unit_cube(const sgim::InterestMap& map, sgim::Subspace s) {
    const auto& regions = map.regions(s);
    double volume = 0.0;
    for (const auto& r : regions) {
        volume += r.volume();
        for (const auto& p : r.points) {
            if (!r.contains(p.unit)) return false;
            std::size_t owners = 0;
            for (const auto& other : regions) owners += other.contains(p.unit) ? 1 : 0;
            if (owners != 1) return false;
        }
    }
    return std::fabs(volume - 1.0) < 1e-9;
}

/// Exactly one region contains the probe point.
inline bool single_owner(const sgim::InterestMap& map, sgim::Subspace s, const sgim::Coords& u) {
    std::size_t owners = 0;
    for (const auto& r : map.regions(s)) owners += r.contains(u) ? 1 : 0;
    return owners == 1;
}

}  // namespace oracle
