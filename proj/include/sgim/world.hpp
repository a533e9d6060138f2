/**
 * @file world.hpp
 * @brief Arm, integrator, table and outcome spaces bundled into one simulator.
 */

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sgim/motion.hpp"
#include "sgim/outcome.hpp"
#include "sgim/table.hpp"

namespace sgim {

enum class Profile { simulation, physical, left_arm };

const char* profile_name(Profile p);
Profile parse_profile(const std::string& name);

struct World {
    ArmModel arm = ArmModel::right_arm();
    DmpConstants dmp{};
    TableConfig table{};
    OutcomeSpaces spaces = OutcomeSpaces::for_table(TableConfig{}, false);
    std::size_t max_sequence_length = 8;

    /// Default world of a profile: the physical profile enables Ω5, the
    /// left-arm profile mirrors the arm base.
    static World for_profile(Profile p);
    void validate() const;
};

struct Rollout {
    std::vector<StepEvents> events;     // one per primitive
    std::vector<ReachedOutcome> reached;
    std::vector<JointVector> boundary_joints;  // joint state after each primitive
    std::vector<Vec2> boundary_tips;
    TableState final_state;
    std::size_t blocked = 0;
    bool saturated = false;
};

/// Resets the table, executes the whole sequence from the initial posture
/// and extracts every outcome reached at each primitive boundary.
Rollout rollout(const World& world, const ActionSequence& action);

}  // namespace sgim
