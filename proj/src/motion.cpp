#include "sgim/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sgim {

std::array<double, kPrimitiveDim> DmpParams::flatten() const {
    std::array<double, kPrimitiveDim> out{};
    for (std::size_t j = 0; j < kJointCount; ++j) {
        out[2 * j] = joints[j].weight;
        out[2 * j + 1] = joints[j].goal;
    }
    return out;
}

DmpParams DmpParams::from_flat(std::span<const double> values) {
    if (values.size() != kPrimitiveDim) {
        throw std::invalid_argument("primitive needs " + std::to_string(kPrimitiveDim) +
                                    " parameters, got " + std::to_string(values.size()));
    }
    DmpParams p;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        p.joints[j].weight = values[2 * j];
        p.joints[j].goal = values[2 * j + 1];
    }
    return p;
}

std::size_t DmpConstants::steps() const {
    return static_cast<std::size_t>(std::llround(duration / dt));
}

void DmpConstants::validate() const {
    if (!(stiffness > 0.0 && damping > 0.0 && phase_decay > 0.0 && tau > 0.0)) {
        throw std::invalid_argument("DMP constants K, D, alpha, tau must be positive");
    }
    if (!(dt > 0.0 && dt < duration)) {
        throw std::invalid_argument("DMP step must satisfy 0 < dt < duration");
    }
    if (centers.empty() || centers.size() != widths.size()) {
        throw std::invalid_argument("DMP basis centers and widths must be non-empty and paired");
    }
}

// Normalised RBF mixture times phase. With one weight shared by all basis
// functions this reduces to s, but the basis is kept so other layouts can
// be plugged in through the config.
double DmpConstants::forcing_basis(double phase) const {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double d = phase - centers[i];
        const double psi = std::exp(-widths[i] * d * d);
        num += psi * phase;
        den += psi;
    }
    return den > 0.0 ? num / den : 0.0;
}

ArmModel ArmModel::right_arm() {
    ArmModel arm;
    arm.lower.fill(-2.0);
    arm.upper.fill(2.0);
    arm.lower[0] = -std::numbers::pi;
    arm.upper[0] = std::numbers::pi;
    // Folded posture with the tip resting beside the base, off the table.
    arm.initial = {0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    return arm;
}

ArmModel ArmModel::mirrored(double table_width) const {
    ArmModel arm = *this;
    arm.base.x = table_width - base.x;
    arm.base_angle = std::numbers::pi - base_angle;
    return arm;
}

double ArmModel::reach() const {
    double r = 0.0;
    for (double l : links) r += l;
    return r;
}

bool ArmModel::within_limits(const JointVector& q) const {
    for (std::size_t j = 0; j < kJointCount; ++j) {
        if (q[j] < lower[j] || q[j] > upper[j]) return false;
    }
    return true;
}

JointVector ArmModel::clamp(const JointVector& q) const {
    JointVector out;
    for (std::size_t j = 0; j < kJointCount; ++j) out[j] = std::clamp(q[j], lower[j], upper[j]);
    return out;
}

void ArmModel::validate() const {
    for (std::size_t j = 0; j < kJointCount; ++j) {
        if (!(links[j] > 0.0)) throw std::invalid_argument("arm link lengths must be positive");
        if (!(lower[j] < upper[j])) throw std::invalid_argument("arm joint limits are empty");
    }
    if (!within_limits(initial)) throw std::invalid_argument("initial posture violates joint limits");
    if (!(weight_bound > 0.0)) throw std::invalid_argument("weight bound must be positive");
}

JointTrajectory integrate_primitive(const DmpParams& params, const JointVector& start,
                                    const DmpConstants& c, const ArmModel& arm) {
    const std::size_t n = c.steps();
    JointTrajectory traj;
    traj.samples.reserve(n + 1);
    traj.samples.push_back(start);

    JointVector x = start;
    JointVector v{};
    double s = 1.0;
    for (std::size_t step = 0; step < n; ++step) {
        const double f = c.forcing_basis(s);
        JointVector x_next;
        for (std::size_t j = 0; j < kJointCount; ++j) {
            const double g = params.joints[j].goal;
            const double acc = (c.stiffness * (g - x[j]) - c.damping * v[j] +
                                (g - start[j]) * params.joints[j].weight * f) / c.tau;
            x_next[j] = x[j] + c.dt * v[j] / c.tau;
            v[j] += c.dt * acc;
            if (x_next[j] < arm.lower[j] || x_next[j] > arm.upper[j]) {
                x_next[j] = std::clamp(x_next[j], arm.lower[j], arm.upper[j]);
                v[j] = 0.0;
                traj.saturated = true;
            }
        }
        s -= c.dt * c.phase_decay * s / c.tau;
        x = x_next;
        traj.samples.push_back(x);
    }
    return traj;
}

Vec2 forward_kinematics(const JointVector& joints, const ArmModel& arm) {
    Vec2 tip = arm.base;
    double angle = arm.base_angle;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        angle += joints[j];
        tip.x += arm.links[j] * std::cos(angle);
        tip.y += arm.links[j] * std::sin(angle);
    }
    return tip;
}

std::vector<PrimitiveRollout> execute_sequence(const ActionSequence& seq, const ArmModel& arm,
                                               const DmpConstants& consts,
                                               std::size_t max_length) {
    if (seq.size() > max_length) {
        throw SequenceTooLong("action sequence of length " + std::to_string(seq.size()) +
                              " exceeds maximum " + std::to_string(max_length));
    }
    std::vector<PrimitiveRollout> out;
    out.reserve(seq.size());
    JointVector start = arm.initial;
    for (const auto& prim : seq) {
        PrimitiveRollout r;
        r.joints = integrate_primitive(prim, start, consts, arm);
        r.tip_path.reserve(r.joints.samples.size());
        for (const auto& q : r.joints.samples) r.tip_path.push_back(forward_kinematics(q, arm));
        start = r.joints.end();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace sgim
