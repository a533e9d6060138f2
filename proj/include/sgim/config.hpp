/**
 * @file config.hpp
 * @brief Experiment configuration (JSON) with profile defaults.
 */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgim/learner.hpp"
#include "sgim/world.hpp"

namespace sgim {

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    Profile profile = Profile::simulation;
    std::vector<Variant> variants{Variant::random_action, Variant::im_pb, Variant::sgim_acts,
                                  Variant::sgim_pb};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::size_t iterations = 5000;
    std::size_t eval_every = 250;
    std::array<std::size_t, kSubspaceCount> testbench_counts{500, 500, 500, 500, 500, 500};
    std::uint64_t testbench_seed = 20240601;
    std::uint64_t teacher_seed = 17;
    std::optional<std::string> transfer_lump;
    bool save_memory = false;
    std::size_t choice_window = 500;  // iterations per strategy x task window
    double reach_radius = 0.5;
    World world = World::for_profile(Profile::simulation);
    LearnerParams learner{};

    void validate() const;
};

ExperimentConfig default_config(Profile p);
/// Starts from the profile's defaults and applies every field present.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace sgim
