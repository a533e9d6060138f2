/**
 * @file batch.hpp
 * @brief Seeded runs, per-cell output directories and batch aggregation.
 *
 * A batch directory holds the shared inputs (config, teachers, testbench)
 * and one subdirectory per (variant, seed) cell. A cell is complete once its
 * summary.json exists; rerunning a batch skips complete cells.
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgim/config.hpp"
#include "sgim/evaluation.hpp"
#include "sgim/learner.hpp"

namespace sgim {

struct RunOutput {
    std::vector<EpisodeLog> log;
    std::vector<EvaluationSnapshot> snapshots;
};

/// Runs `iterations` episodes, evaluating at iteration 0, every `eval_every`
/// iterations and at the end.
RunOutput run(Learner& learner, std::size_t iterations, std::span<const Outcome> testbench,
              std::size_t eval_every, double d_thres);

struct CellResult {
    Variant variant = Variant::sgim_pb;
    std::uint64_t seed = 0;
    std::vector<EvaluationSnapshot> snapshots;
    std::vector<std::string> strategy_names;
    std::vector<std::array<std::size_t, kSubspaceCount>> strategy_task;  // whole run
    ResolutionTable resolutions;
    std::array<std::map<std::string, std::size_t>, kSubspaceCount> learning_usage{};
    std::array<std::size_t, kSubspaceCount> reached_entries{};  // indexed outcomes per subspace
    double complex_reach = 0.0;  // share of O3 and O4 goals within reach_radius
    double min_progress = 0.0;   // smallest progress logged over the run
    std::size_t episodes = 0;
    double seconds = 0.0;

    double final_error() const { return snapshots.back().global_error; }
    /// Learning-phase share of procedure-driven episodes using (first, second).
    double learning_share(Subspace first, Subspace second) const;
};

nlohmann::json to_json(const CellResult& r);
CellResult cell_from_json(const nlohmann::json& j);

struct BatchInputs {
    std::vector<Teacher> teachers;
    std::vector<Outcome> testbench;
    std::vector<ProcedureRecord> lump;
};

/// Teachers from the profile, a testbench disjoint from their demos, and the
/// transfer lump when configured.
BatchInputs prepare_inputs(const ExperimentConfig& cfg);

std::string cell_name(Variant v, std::uint64_t seed);

CellResult run_cell(const ExperimentConfig& cfg, const BatchInputs& inputs, Variant v,
                    std::uint64_t seed, const std::filesystem::path& dir);

using Progress = std::function<void(const std::string& message)>;

/// Runs every missing cell (in parallel when OpenMP threads are available),
/// then writes aggregate.csv and curves.csv. Results follow config order.
std::vector<CellResult> run_batch(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                                  const Progress& progress = {});

void write_aggregate(const std::vector<CellResult>& cells, const std::filesystem::path& dir);

double median(std::vector<double> values);

}  // namespace sgim
