/**
 * @file teachers.hpp
 * @brief Offline construction of teacher repertoires against the simulator.
 *
 * Action demos are scripted: each primitive drives the arm to an inverse
 * kinematics solution for the next waypoint (pick point, release point),
 * and every demo is replayed and kept only if it reaches what it was built
 * for.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sgim/strategies.hpp"
#include "sgim/world.hpp"

namespace sgim {

struct IkParams {
    double damping = 0.05;
    double tolerance = 1e-9;
    std::size_t iterations = 300;
};

/// Damped least squares from `seed`; empty if the tip does not converge.
std::optional<JointVector> solve_ik(const ArmModel& arm, Vec2 target, JointVector seed,
                                    const IkParams& p = {});

/// Zero-forcing primitive whose endpoint tip lands on `target` when started
/// from `start` (goal corrected for residual convergence error).
std::optional<DmpParams> reach_primitive(const World& world, const JointVector& start, Vec2 target,
                                         Rng& rng, double tolerance = 1e-4);

/// Chains reach primitives through the waypoints; empty on IK failure.
std::optional<ActionSequence> waypoint_action(const World& world, const std::vector<Vec2>& waypoints,
                                              Rng& rng);

struct DemoBudget {
    std::size_t touch = 11;
    std::size_t blue = 10;
    std::size_t green = 8;
    std::size_t both = 37;    // placements drawn uniformly
    std::size_t burst = 36;   // placements obtained by inverting uniform sounds
    bool merged_complex = true;  // one teacher for both and burst demos
};

DemoBudget default_budget(Profile p);

/// Action teachers followed by procedural teachers for the profile.
std::vector<Teacher> make_teachers(Profile profile, const World& world, std::uint64_t seed);

}  // namespace sgim
