/**
 * @file strategies.hpp
 * @brief Autonomous exploration, teacher mimicry and teacher repertoires.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sgim/memory.hpp"
#include "sgim/outcome.hpp"
#include "sgim/world.hpp"

namespace sgim {

using Rng = std::mt19937_64;

enum class StrategyKind { random_action, auton_action, auton_procedure, mimic_action, mimic_procedure };

const char* kind_name(StrategyKind k);

struct StrategyConfig {
    std::string name;
    StrategyKind kind = StrategyKind::auton_action;
    double cost = 1.0;
    std::optional<std::size_t> teacher;  // index into the learner's teacher list

    void validate() const;
};

struct ExplorationParams {
    double d_thres = 5.0;
    double p_local_min = 0.1;
    double p_local_max = 0.9;
    double sigma_cap = 0.2;          // upper bound on perturbation widths (fraction of range)
    double action_sigma_gain = 1.0;  // action-space width = min(cap, gain * d_nn)
    double demo_sigma = 0.05;        // width around action demos (fraction of range)
    double length_decay = 0.5;       // P(n) proportional to decay^n for random actions
};

/// Regression probability: closer neighbours favour local search.
double local_probability(double d_nn, const ExplorationParams& p);

DmpParams random_primitive(const ArmModel& arm, Rng& rng);
ActionSequence random_action(const ArmModel& arm, std::size_t max_length, double decay, Rng& rng);
/// Independent Gaussian noise on every parameter, sigma given as a fraction
/// of that parameter's range; results are clamped into range.
ActionSequence perturb_action(const ActionSequence& source, const ArmModel& arm, double sigma,
                              Rng& rng);

ActionSequence explore_action(const Outcome& goal, const EpisodicMemory& memory, const World& world,
                              const ExplorationParams& p, Rng& rng);

Procedure random_procedure(const OutcomeSpaces& spaces, Rng& rng);
Procedure perturb_procedure(const Procedure& source, const OutcomeSpaces& spaces, double sigma,
                            Rng& rng);
Procedure explore_procedure(const Outcome& goal, const EpisodicMemory& memory,
                            const ExplorationParams& p, Rng& rng);

struct ActionDemo {
    ActionSequence action;
    std::vector<ReachedOutcome> reached;
};

struct ProcedureDemo {
    Procedure procedure;
    Outcome reached;
};

enum class TeacherKind {
    action,                // finite repertoire of executed actions
    procedure_rule,        // synthesises a decomposition for the exact goal
    procedure_repertoire,  // finite repertoire of decompositions
};

struct Teacher {
    std::string name;
    TeacherKind kind = TeacherKind::action;
    std::vector<Subspace> expertise;
    std::vector<ActionDemo> actions;
    std::vector<ProcedureDemo> procedures;

    /// Subspaces the teacher was built for. Asked about any other goal, a
    /// teacher still answers, but with a demo drawn from its own domain.
    bool expert_in(Subspace s) const;
    /// Every outcome the teacher's repertoire reaches (for testbench disjointness).
    std::vector<Outcome> demo_outcomes() const;
};

class TeacherError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Nearest demo to the goal among demos reaching the goal's subspace; a
/// uniformly drawn demo when the teacher is no expert of that subspace.
std::pair<std::size_t, double> nearest_action_demo(const Teacher& t, const Outcome& goal,
                                                   const OutcomeSpaces& spaces);
std::size_t pick_action_demo(const Teacher& t, const Outcome& goal, const OutcomeSpaces& spaces,
                             Rng& rng);
ActionSequence mimic_action(const Outcome& goal, const Teacher& teacher, const World& world,
                            bool replay, double sigma, Rng& rng);

struct ProcedureDemand {
    Procedure demonstrated;
    Procedure attempted;  // after local perturbation
};
ProcedureDemand mimic_procedure(const Outcome& goal, const Teacher& teacher, const World& world,
                                const ExplorationParams& p, Rng& rng);

/// Object placements producing a burst sound. The blue object sits at the
/// distance from its nearest corner implied by f, first on the diagonal and
/// then on directions fanning out from it; the green object is placed at
/// (r, +-phi) from it. The first placement keeping both objects on the table
/// (and the corner nearest) is returned; otherwise the first candidate is
/// clamped.
std::pair<Vec2, Vec2> invert_burst(const TableConfig& table, double f, double l, double b);

/// Uniform point on the disk of radius R around `centre`, clamped to the table.
Vec2 pick_point(const TableConfig& table, Vec2 centre, Rng& rng);

/// Construction rules of the simulation-profile procedural teachers. Moving
/// an object starts with a touch drawn uniformly on its initial disk.
Procedure teacher_rule(Subspace goal_space, const Outcome& goal, const TableConfig& table, Rng& rng);

}  // namespace sgim
