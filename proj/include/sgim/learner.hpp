/**
 * @file learner.hpp
 * @brief The learning loop and its five variants.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sgim/interest.hpp"
#include "sgim/memory.hpp"
#include "sgim/strategies.hpp"
#include "sgim/world.hpp"

namespace sgim {

enum class Variant { random_action, im_pb, sgim_acts, sgim_pb, sgim_tl };

const char* variant_name(Variant v);  // "RandomAction", "IM-PB", ...
Variant parse_variant(const std::string& name);

struct StrategyCosts {
    double autonomous = 1.0;
    double procedural_teacher = 5.0;
    double action_teacher = 10.0;
};

/// Strategy set of a variant over the given teachers (action teachers named
/// "AT*", procedural teachers "PT*").
std::vector<StrategyConfig> strategies_for(Variant v, const std::vector<Teacher>& teachers,
                                           const StrategyCosts& costs);

struct LearnerParams {
    MemoryParams memory{};
    InterestParams interest{};
    ExplorationParams explore{};
    StrategyCosts costs{};
};

struct EpisodeLog {
    std::size_t iteration = 0;
    Outcome goal;
    std::size_t strategy = 0;
    std::string strategy_name;
    std::optional<ProceduralSpace> procedure_space;
    std::size_t length = 0;
    std::vector<ReachedOutcome> reached;
    std::size_t blocked = 0;
    bool degraded = false;  // planned action unavailable, random action used
    bool uniform = false;   // uniform selection branch
    double goal_progress = 0.0;
    double min_progress = 0.0;
};

class Learner {
public:
    Learner(World world, Variant variant, std::vector<Teacher> teachers, LearnerParams params,
            std::uint64_t seed, std::vector<ProcedureRecord> lump = {});

    EpisodeLog run_episode();

    std::size_t iteration() const { return iteration_; }
    Variant variant() const { return variant_; }
    const World& world() const { return world_; }
    const EpisodicMemory& memory() const { return memory_; }
    const InterestMap& interest() const { return map_; }
    const std::vector<StrategyConfig>& strategies() const { return strategies_; }
    const std::vector<Teacher>& teachers() const { return teachers_; }
    bool applicable(Subspace s, std::size_t strategy) const;

private:
    struct Plan {
        ActionSequence action;
        std::optional<Procedure> procedure;
        bool degraded = false;
    };

    Plan plan(const Selection& sel);
    std::optional<ActionSequence> realize(const Procedure& proc) const;

    World world_;
    Variant variant_;
    std::vector<Teacher> teachers_;
    LearnerParams params_;
    std::vector<StrategyConfig> strategies_;
    EpisodicMemory memory_;
    InterestMap map_;
    CompetenceLedger ledger_;
    Rng rng_;
    std::size_t iteration_ = 0;
    std::set<std::pair<std::size_t, std::size_t>> consulted_;  // (teacher, region id)
};

}  // namespace sgim
