/**
 * @file motion.hpp
 * @brief DMP action primitives, sequencing and planar-arm kinematics.
 *
 * Each of the seven joints is driven by a one-dimensional dynamic movement
 * primitive parametrised by a forcing weight and a goal angle, giving a
 * 14-dimensional primitive. Primitives are chained without returning to the
 * initial posture; the tip of a planar revolute chain traces a path on the
 * table plane.
 */

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgim/geometry.hpp"

namespace sgim {

inline constexpr std::size_t kJointCount = 7;
inline constexpr std::size_t kPrimitiveDim = 2 * kJointCount;

using JointVector = std::array<double, kJointCount>;

struct JointDmp {
    double weight = 0.0;  ///< forcing-term weight (unitless)
    double goal = 0.0;    ///< goal joint angle (rad)

    friend bool operator==(const JointDmp&, const JointDmp&) = default;
};

/// Parameters of one action primitive: a (weight, goal) pair per joint.
struct DmpParams {
    std::array<JointDmp, kJointCount> joints{};

    /// Interleaved layout (w0, g0, w1, g1, ...).
    std::array<double, kPrimitiveDim> flatten() const;
    static DmpParams from_flat(std::span<const double> values);

    friend bool operator==(const DmpParams&, const DmpParams&) = default;
};

using ActionSequence = std::vector<DmpParams>;

struct DmpConstants {
    double stiffness = 100.0;  // K
    double damping = 20.0;     // D, 2*sqrt(K) for critical damping
    double phase_decay = 4.0;  // alpha
    double tau = 1.0;
    double dt = 0.005;
    double duration = 1.0;
    std::vector<double> centers{0.5};
    std::vector<double> widths{10.0};

    std::size_t steps() const;
    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;
    double forcing_basis(double phase) const;
};

struct ArmModel {
    std::array<double, kJointCount> links{0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2};
    Vec2 base{0.75, -0.1};
    double base_angle = 1.5707963267948966;  // pointing along +y, into the table
    JointVector lower{};
    JointVector upper{};
    JointVector initial{};
    double weight_bound = 20.0;

    /// Desk-scale right arm used by the simulation and physical profiles.
    static ArmModel right_arm();
    /// Same arm with its base mirrored across the table's vertical midline.
    ArmModel mirrored(double table_width = 1.0) const;

    double reach() const;
    bool within_limits(const JointVector& q) const;
    JointVector clamp(const JointVector& q) const;
    void validate() const;
};

struct JointTrajectory {
    std::vector<JointVector> samples;  // t = 0, dt, ..., T
    bool saturated = false;            // a joint hit its limit and was clamped

    const JointVector& start() const { return samples.front(); }
    const JointVector& end() const { return samples.back(); }
};

JointTrajectory integrate_primitive(const DmpParams& params,
                                    const JointVector& start,
                                    const DmpConstants& consts,
                                    const ArmModel& arm);

Vec2 forward_kinematics(const JointVector& joints, const ArmModel& arm);

struct PrimitiveRollout {
    JointTrajectory joints;
    std::vector<Vec2> tip_path;
};

class SequenceTooLong : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<PrimitiveRollout> execute_sequence(const ActionSequence& seq,
                                               const ArmModel& arm,
                                               const DmpConstants& consts,
                                               std::size_t max_length);

}  // namespace sgim
