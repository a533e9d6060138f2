#include "sgim/config.hpp"

#include <fstream>

namespace sgim {

using nlohmann::json;

void ExperimentConfig::validate() const {
    const auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "': " + why);
    };
    if (variants.empty()) fail("variants", "must list at least one variant");
    if (seeds.empty()) fail("seeds", "must list at least one seed");
    if (eval_every == 0) fail("eval_every", "must be positive");
    if (choice_window == 0) fail("choice_window", "must be positive");
    if (!(reach_radius > 0.0)) fail("reach_radius", "must be positive");
    for (Subspace s : world.spaces.enabled_list()) {
        if (testbench_counts[index(s)] == 0) fail("testbench.counts", "enabled subspace " + subspace_name(s) + " needs goals");
    }
    try {
        world.validate();
    } catch (const std::invalid_argument& e) {
        fail("arm/dmp/table", e.what());
    }
    const LearnerParams& p = learner;
    if (!(p.memory.gamma > 1.0)) fail("memory.gamma", "must exceed 1");
    if (p.memory.k == 0) fail("memory.k", "must be positive");
    if (p.memory.max_sequence_length != world.max_sequence_length) {
        fail("memory.max_sequence_length", "must equal the world's max_sequence_length");
    }
    if (p.interest.split_threshold < 2) fail("interest.split_threshold", "must be at least 2");
    if (p.interest.window == 0) fail("interest.window", "must be positive");
    if (p.interest.quantiles < 2) fail("interest.quantiles", "must be at least 2");
    if (p.interest.epsilon < 0.0 || p.interest.epsilon > 1.0) fail("interest.epsilon", "must lie in [0, 1]");
    if (!(p.interest.ledger_tolerance > 0.0)) fail("interest.ledger_tolerance", "must be positive");
    if (!(p.explore.d_thres > 0.0)) fail("exploration.d_thres", "must be positive");
    if (p.explore.p_local_min < 0.0 || p.explore.p_local_max > 1.0 || p.explore.p_local_min > p.explore.p_local_max) {
        fail("exploration.p_local_min/p_local_max", "must satisfy 0 <= min <= max <= 1");
    }
    if (!(p.explore.length_decay > 0.0)) fail("exploration.length_decay", "must be positive");
    for (const auto& [name, cost] : {std::pair{"costs.autonomous", p.costs.autonomous},
                                     std::pair{"costs.procedural_teacher", p.costs.procedural_teacher},
                                     std::pair{"costs.action_teacher", p.costs.action_teacher}}) {
        if (!(cost >= 1.0)) fail(name, "must be at least 1");
    }
}

ExperimentConfig default_config(Profile p) {
    ExperimentConfig c;
    c.profile = p;
    c.world = World::for_profile(p);
    if (p == Profile::physical) c.variants = {Variant::sgim_acts, Variant::sgim_pb};
    if (p == Profile::left_arm) c.variants = {Variant::sgim_pb, Variant::sgim_tl};
    return c;
}

namespace {

// Reads j[key] into out when present, naming the full field path on failure.
template <class T>
void read(const json& j, const char* key, T& out, const std::string& prefix) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + prefix + key + "': " + e.what());
    }
}

template <class F>
void section(const json& j, const char* key, F&& apply) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_object()) throw ConfigError(std::string("config field '") + key + "': must be an object");
    apply(j.at(key), std::string(key) + ".");
}

Vec2 read_vec(const json& j, const char* key, Vec2 fallback, const std::string& prefix) {
    std::array<double, 2> v{fallback.x, fallback.y};
    read(j, key, v, prefix);
    return {v[0], v[1]};
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    Profile profile = Profile::simulation;
    if (j.contains("profile")) {
        try {
            profile = parse_profile(j.at("profile").get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config field 'profile': ") + e.what());
        }
    }
    ExperimentConfig c = default_config(profile);
    if (j.contains("variants")) {
        c.variants.clear();
        try {
            for (const json& v : j.at("variants")) c.variants.push_back(parse_variant(v.get<std::string>()));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config field 'variants': ") + e.what());
        }
    }
    read(j, "seeds", c.seeds, "");
    read(j, "iterations", c.iterations, "");
    read(j, "eval_every", c.eval_every, "");
    read(j, "teacher_seed", c.teacher_seed, "");
    read(j, "save_memory", c.save_memory, "");
    read(j, "choice_window", c.choice_window, "");
    read(j, "reach_radius", c.reach_radius, "");
    if (j.contains("transfer_lump") && !j.at("transfer_lump").is_null()) {
        std::string path;
        read(j, "transfer_lump", path, "");
        c.transfer_lump = path;
    }
    section(j, "testbench", [&](const json& t, const std::string& pre) {
        read(t, "seed", c.testbench_seed, pre);
        if (t.contains("counts") && t.at("counts").is_number_unsigned()) {
            c.testbench_counts.fill(t.at("counts").get<std::size_t>());
        } else {
            read(t, "counts", c.testbench_counts, pre);
        }
    });
    World& w = c.world;
    read(j, "max_sequence_length", w.max_sequence_length, "");
    c.learner.memory.max_sequence_length = w.max_sequence_length;
    section(j, "arm", [&](const json& a, const std::string& pre) {
        read(a, "links", w.arm.links, pre);
        w.arm.base = read_vec(a, "base", w.arm.base, pre);
        read(a, "base_angle", w.arm.base_angle, pre);
        read(a, "lower", w.arm.lower, pre);
        read(a, "upper", w.arm.upper, pre);
        read(a, "initial", w.arm.initial, pre);
        read(a, "weight_bound", w.arm.weight_bound, pre);
    });
    section(j, "dmp", [&](const json& d, const std::string& pre) {
        read(d, "stiffness", w.dmp.stiffness, pre);
        read(d, "damping", w.dmp.damping, pre);
        read(d, "phase_decay", w.dmp.phase_decay, pre);
        read(d, "tau", w.dmp.tau, pre);
        read(d, "dt", w.dmp.dt, pre);
        read(d, "duration", w.dmp.duration, pre);
        read(d, "centers", w.dmp.centers, pre);
        read(d, "widths", w.dmp.widths, pre);
    });
    bool bounds_stale = false;
    section(j, "table", [&](const json& t, const std::string& pre) {
        w.table.origin = read_vec(t, "origin", w.table.origin, pre);
        read(t, "width", w.table.width, pre);
        read(t, "height", w.table.height, pre);
        read(t, "object_radius", w.table.object_radius, pre);
        w.table.blue_start = read_vec(t, "blue_start", w.table.blue_start, pre);
        w.table.green_start = read_vec(t, "green_start", w.table.green_start, pre);
        bounds_stale = true;
    });
    bool maintained = w.spaces.enabled(Subspace::maintained);
    read(j, "maintained_sound", maintained, "");
    if (bounds_stale || maintained != w.spaces.enabled(Subspace::maintained)) {
        try {
            w.spaces = OutcomeSpaces::for_table(w.table, maintained);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config field 'table': ") + e.what());
        }
    }
    LearnerParams& p = c.learner;
    section(j, "memory", [&](const json& m, const std::string& pre) {
        read(m, "gamma", p.memory.gamma, pre);
        read(m, "k", p.memory.k, pre);
        read(m, "unknown_length", p.memory.unknown_length, pre);
        read(m, "depth", p.memory.depth, pre);
        read(m, "tree_threshold", p.memory.tree_threshold, pre);
    });
    section(j, "interest", [&](const json& m, const std::string& pre) {
        read(m, "split_threshold", p.interest.split_threshold, pre);
        read(m, "window", p.interest.window, pre);
        read(m, "quantiles", p.interest.quantiles, pre);
        read(m, "epsilon", p.interest.epsilon, pre);
        read(m, "ledger_tolerance", p.interest.ledger_tolerance, pre);
        read(m, "d_thres", p.interest.d_thres, pre);
    });
    section(j, "exploration", [&](const json& m, const std::string& pre) {
        read(m, "d_thres", p.explore.d_thres, pre);
        read(m, "p_local_min", p.explore.p_local_min, pre);
        read(m, "p_local_max", p.explore.p_local_max, pre);
        read(m, "sigma_cap", p.explore.sigma_cap, pre);
        read(m, "action_sigma_gain", p.explore.action_sigma_gain, pre);
        read(m, "demo_sigma", p.explore.demo_sigma, pre);
        read(m, "length_decay", p.explore.length_decay, pre);
    });
    section(j, "costs", [&](const json& m, const std::string& pre) {
        read(m, "autonomous", p.costs.autonomous, pre);
        read(m, "procedural_teacher", p.costs.procedural_teacher, pre);
        read(m, "action_teacher", p.costs.action_teacher, pre);
    });
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c) {
    const World& w = c.world;
    const LearnerParams& p = c.learner;
    json j;
    j["profile"] = profile_name(c.profile);
    j["variants"] = json::array();
    for (Variant v : c.variants) j["variants"].push_back(variant_name(v));
    j["seeds"] = c.seeds;
    j["iterations"] = c.iterations;
    j["eval_every"] = c.eval_every;
    j["testbench"] = {{"seed", c.testbench_seed}, {"counts", c.testbench_counts}};
    j["teacher_seed"] = c.teacher_seed;
    j["transfer_lump"] = c.transfer_lump ? json(*c.transfer_lump) : json(nullptr);
    j["save_memory"] = c.save_memory;
    j["choice_window"] = c.choice_window;
    j["reach_radius"] = c.reach_radius;
    j["max_sequence_length"] = w.max_sequence_length;
    j["maintained_sound"] = w.spaces.enabled(Subspace::maintained);
    j["arm"] = {{"links", w.arm.links},     {"base", {w.arm.base.x, w.arm.base.y}},
                {"base_angle", w.arm.base_angle}, {"lower", w.arm.lower},
                {"upper", w.arm.upper},     {"initial", w.arm.initial},
                {"weight_bound", w.arm.weight_bound}};
    j["dmp"] = {{"stiffness", w.dmp.stiffness}, {"damping", w.dmp.damping}, {"phase_decay", w.dmp.phase_decay},
                {"tau", w.dmp.tau},             {"dt", w.dmp.dt},           {"duration", w.dmp.duration},
                {"centers", w.dmp.centers},     {"widths", w.dmp.widths}};
    j["table"] = {{"origin", {w.table.origin.x, w.table.origin.y}},
                  {"width", w.table.width},
                  {"height", w.table.height},
                  {"object_radius", w.table.object_radius},
                  {"blue_start", {w.table.blue_start.x, w.table.blue_start.y}},
                  {"green_start", {w.table.green_start.x, w.table.green_start.y}}};
    j["memory"] = {{"gamma", p.memory.gamma}, {"k", p.memory.k}, {"unknown_length", p.memory.unknown_length},
                   {"depth", p.memory.depth}, {"tree_threshold", p.memory.tree_threshold}};
    j["interest"] = {{"split_threshold", p.interest.split_threshold}, {"window", p.interest.window},
                     {"quantiles", p.interest.quantiles},             {"epsilon", p.interest.epsilon},
                     {"ledger_tolerance", p.interest.ledger_tolerance}, {"d_thres", p.interest.d_thres}};
    j["exploration"] = {{"d_thres", p.explore.d_thres},         {"p_local_min", p.explore.p_local_min},
                        {"p_local_max", p.explore.p_local_max}, {"sigma_cap", p.explore.sigma_cap},
                        {"action_sigma_gain", p.explore.action_sigma_gain},
                        {"demo_sigma", p.explore.demo_sigma},   {"length_decay", p.explore.length_decay}};
    j["costs"] = {{"autonomous", p.costs.autonomous}, {"procedural_teacher", p.costs.procedural_teacher},
                  {"action_teacher", p.costs.action_teacher}};
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace sgim
