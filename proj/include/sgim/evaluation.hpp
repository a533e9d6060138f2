/**
 * @file evaluation.hpp
 * @brief Testbench evaluation and analysis tables over a frozen memory.
 */

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgim/learner.hpp"
#include "sgim/memory.hpp"

namespace sgim {

struct EvaluationSnapshot {
    std::size_t iteration = 0;
    double global_error = 0.0;  // unweighted mean over subspaces present in the testbench
    std::array<std::optional<double>, kSubspaceCount> subspace_error{};
    std::size_t memory_size = 0;  // indexed (action prefix, outcome) pairs
};

/// Distance from each goal to the closest reached outcome, d_thres when none.
std::vector<double> goal_errors(const EpisodicMemory& memory, std::span<const Outcome> testbench,
                                double d_thres);
/// Serial reference for goal_errors.
std::vector<double> goal_errors_serial(const EpisodicMemory& memory,
                                       std::span<const Outcome> testbench, double d_thres);

EvaluationSnapshot summarize(std::span<const Outcome> testbench, std::span<const double> errors,
                             std::size_t iteration, std::size_t memory_size);
EvaluationSnapshot evaluate(const EpisodicMemory& memory, std::span<const Outcome> testbench,
                            double d_thres, std::size_t iteration);
EvaluationSnapshot evaluate_serial(const EpisodicMemory& memory, std::span<const Outcome> testbench,
                                   double d_thres, std::size_t iteration);

/// Share of goals in `spaces` whose error is at most `radius`.
double reach_fraction(std::span<const Outcome> testbench, std::span<const double> errors,
                      std::span<const Subspace> spaces, double radius);

inline const std::string kNoProcedure = "none";
inline const std::string kColdStart = "cold-start";

/// How the inverse model answers each testbench goal.
struct ResolutionTable {
    /// goal subspace -> top-level procedural space name (or kNoProcedure / kColdStart) -> count
    std::array<std::map<std::string, std::size_t>, kSubspaceCount> procedure{};
    /// goal subspace -> resolved sequence length (0 for cold start) -> count
    std::array<std::map<std::size_t, std::size_t>, kSubspaceCount> length{};
};

ResolutionTable analyze_resolutions(const EpisodicMemory& memory, std::span<const Outcome> testbench);

/// Key with the largest count (ties: smallest key); empty for an empty row.
std::optional<std::string> modal(const std::map<std::string, std::size_t>& row);
std::optional<std::size_t> modal(const std::map<std::size_t, std::size_t>& row);
double share(const std::map<std::string, std::size_t>& row, const std::string& key);

/// counts[strategy][goal subspace] over episodes [begin, end).
std::vector<std::array<std::size_t, kSubspaceCount>> strategy_task_counts(
    std::span<const EpisodeLog> log, std::size_t strategy_count, std::size_t begin, std::size_t end);

/// Learning-phase use of each procedural space per goal subspace.
std::array<std::map<std::string, std::size_t>, kSubspaceCount> learning_procedure_usage(
    std::span<const EpisodeLog> log);

}  // namespace sgim
