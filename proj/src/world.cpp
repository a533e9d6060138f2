#include "sgim/world.hpp"

#include <stdexcept>
#include <string>

namespace sgim {

const char* profile_name(Profile p) {
    switch (p) {
        case Profile::simulation: return "simulation";
        case Profile::physical: return "physical";
        case Profile::left_arm: return "left-arm";
    }
    return "?";
}

Profile parse_profile(const std::string& name) {
    if (name == "simulation") return Profile::simulation;
    if (name == "physical") return Profile::physical;
    if (name == "left-arm") return Profile::left_arm;
    throw std::invalid_argument("unknown profile '" + name + "' (expected simulation, physical or left-arm)");
}

World World::for_profile(Profile p) {
    World w;
    if (p == Profile::left_arm) w.arm = w.arm.mirrored(w.table.width);
    w.spaces = OutcomeSpaces::for_table(w.table, p == Profile::physical);
    return w;
}

void World::validate() const {
    arm.validate();
    dmp.validate();
    table.validate();
    if (max_sequence_length == 0) throw std::invalid_argument("max_sequence_length must be positive");
}

Rollout rollout(const World& world, const ActionSequence& action) {
    const auto prims = execute_sequence(action, world.arm, world.dmp, world.max_sequence_length);
    Rollout out;
    TableState state = reset(world.table);
    for (const PrimitiveRollout& p : prims) {
        StepResult step = step_primitive(world.table, state, p.tip_path);
        if (step.events.blocked) ++out.blocked;
        out.saturated = out.saturated || p.joints.saturated;
        out.boundary_joints.push_back(p.joints.end());
        out.boundary_tips.push_back(p.tip_path.back());
        out.events.push_back(step.events);
        state = std::move(step.state);
    }
    out.reached = extract_outcomes(out.events, world.spaces);
    out.final_state = state;
    return out;
}

}  // namespace sgim
