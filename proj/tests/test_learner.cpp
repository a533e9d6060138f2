#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sgim/batch.hpp"
#include "sgim/config.hpp"
#include "sgim/evaluation.hpp"
#include "sgim/learner.hpp"
#include "sgim/teachers.hpp"

using namespace sgim;

namespace {

const World& sim_world() {
    static const World w = World::for_profile(Profile::simulation);
    return w;
}

const std::vector<Teacher>& sim_teachers() {
    static const std::vector<Teacher> t = make_teachers(Profile::simulation, sim_world(), 17);
    return t;
}

std::vector<EpisodeLog> run_episodes(Learner& l, std::size_t n) {
    std::vector<EpisodeLog> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(l.run_episode());
    return out;
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("sgim_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("variant names round trip") {
    for (Variant v : {Variant::random_action, Variant::im_pb, Variant::sgim_acts, Variant::sgim_pb, Variant::sgim_tl}) {
        CHECK(parse_variant(variant_name(v)) == v);
    }
    CHECK(std::string(variant_name(Variant::im_pb)) == "IM-PB");
    CHECK_THROWS(parse_variant("SGIM"));
}

TEST_CASE("strategy sets") {
    const StrategyCosts costs;
    const auto names = [&](Variant v) {
        std::vector<std::string> out;
        for (const StrategyConfig& s : strategies_for(v, sim_teachers(), costs)) out.push_back(s.name);
        return out;
    };
    CHECK(names(Variant::random_action) == std::vector<std::string>{"random-action"});
    CHECK(names(Variant::im_pb) == std::vector<std::string>{"auton-action", "auton-procedure"});
    const auto pb = strategies_for(Variant::sgim_pb, sim_teachers(), costs);
    for (const StrategyConfig& s : pb) {
        if (s.kind == StrategyKind::mimic_action) CHECK(s.cost == 10.0);
        if (s.kind == StrategyKind::mimic_procedure) CHECK(s.cost == 5.0);
        if (s.kind == StrategyKind::auton_action) CHECK(s.cost == 1.0);
    }
    CHECK(names(Variant::sgim_pb) == names(Variant::sgim_tl));
}

TEST_CASE("the learner is deterministic for a seed") {
    Learner a(sim_world(), Variant::sgim_pb, sim_teachers(), LearnerParams{}, 5);
    Learner b(sim_world(), Variant::sgim_pb, sim_teachers(), LearnerParams{}, 5);
    const auto la = run_episodes(a, 150);
    const auto lb = run_episodes(b, 150);
    for (std::size_t i = 0; i < la.size(); ++i) {
        CHECK(la[i].goal == lb[i].goal);
        CHECK(la[i].strategy == lb[i].strategy);
        CHECK(la[i].length == lb[i].length);
    }
    CHECK(a.memory().episode_count() == 150);
    CHECK(la.front().uniform);
}

TEST_CASE("learning invariants") {
    Learner l(sim_world(), Variant::sgim_pb, sim_teachers(), LearnerParams{}, 11);
    for (const EpisodeLog& e : run_episodes(l, 400)) {
        CHECK(e.goal_progress >= 0.0);
        CHECK(e.min_progress >= 0.0);
        CHECK(e.length >= 1);
        CHECK(e.length <= sim_world().max_sequence_length);
        // An executed procedure chains two resolved sequences.
        if (e.procedure_space && !e.degraded) CHECK(e.length >= 2);
    }
}

TEST_CASE("the random baseline only draws random actions") {
    Learner l(sim_world(), Variant::random_action, {}, LearnerParams{}, 3);
    for (const EpisodeLog& e : run_episodes(l, 100)) {
        CHECK(e.strategy_name == "random-action");
        CHECK_FALSE(e.procedure_space.has_value());
    }
}

TEST_CASE("transfer lumps") {
    Learner donor(sim_world(), Variant::sgim_pb, sim_teachers(), LearnerParams{}, 1);
    run_episodes(donor, 300);
    std::vector<ProcedureRecord> lump;
    for (const ProcedureRecord& r : donor.memory().procedure_records()) {
        if (!r.transferred) lump.push_back({r.procedure, r.reached, std::nullopt, false});
    }
    REQUIRE_FALSE(lump.empty());
    CHECK_THROWS_AS(Learner(sim_world(), Variant::sgim_pb, sim_teachers(), LearnerParams{}, 2, lump),
                    std::invalid_argument);

    World left = World::for_profile(Profile::left_arm);
    const auto testbench = sample_testbench(left.spaces, 99, {40, 40, 40, 40, 40, 0});
    Learner tl(left, Variant::sgim_tl, sim_teachers(), LearnerParams{}, 2, lump);
    Learner pb(left, Variant::sgim_pb, sim_teachers(), LearnerParams{}, 2);
    CHECK(tl.memory().procedure_count() == lump.size());
    for (const ProcedureRecord& r : tl.memory().procedure_records()) CHECK(r.transferred);
    // Transferred knowledge is not counted as reached before any episode.
    const auto e_tl = evaluate(tl.memory(), testbench, 5.0, 0);
    const auto e_pb = evaluate(pb.memory(), testbench, 5.0, 0);
    CHECK(e_tl.global_error == e_pb.global_error);
    CHECK(e_tl.global_error == 5.0);
}

TEST_CASE("testbench evaluation") {
    const OutcomeSpaces& spaces = sim_world().spaces;
    EpisodicMemory m(spaces, MemoryParams{});
    const std::vector<Outcome> tb{Outcome::make(Subspace::touch, {0.2, 0.2}), Outcome::make(Subspace::touch, {0.6, 0.2}),
                                  Outcome::make(Subspace::blue, {0.5, 0.5})};
    SUBCASE("empty memory scores the threshold") {
        const auto s = evaluate(m, tb, 5.0, 0);
        CHECK(s.global_error == 5.0);
        CHECK(*s.subspace_error[index(Subspace::touch)] == 5.0);
        CHECK_FALSE(s.subspace_error[index(Subspace::green)].has_value());
    }
    SUBCASE("hand-computed errors") {
        m.store({tb[0], "s", {DmpParams{}}, std::nullopt, {{Outcome::make(Subspace::touch, {0.2, 0.5}), 1}}});
        const auto errs = goal_errors(m, tb, 5.0);
        CHECK(errs[0] == doctest::Approx(0.3));
        CHECK(errs[1] == doctest::Approx(0.5));
        CHECK(errs[2] == 5.0);
        const auto s = evaluate(m, tb, 5.0, 7);
        CHECK(s.iteration == 7);
        CHECK(*s.subspace_error[index(Subspace::touch)] == doctest::Approx(0.4));
        CHECK(s.global_error == doctest::Approx((0.4 + 5.0) / 2.0));
        const std::vector<Subspace> touch_only{Subspace::touch};
        CHECK(reach_fraction(tb, errs, touch_only, 0.35) == doctest::Approx(0.5));
    }
    SUBCASE("exact memory scores zero") {
        for (const Outcome& g : tb) m.store({g, "s", {DmpParams{}}, std::nullopt, {{g, 1}}});
        CHECK(evaluate(m, tb, 5.0, 0).global_error == 0.0);
    }
}

TEST_CASE("parallel and serial evaluation agree") {
    Learner l(sim_world(), Variant::im_pb, {}, LearnerParams{}, 4);
    run_episodes(l, 300);
    const auto tb = sample_testbench(sim_world().spaces, 3, {100, 100, 100, 100, 100, 0});
    CHECK(goal_errors(l.memory(), tb, 5.0) == goal_errors_serial(l.memory(), tb, 5.0));
    CHECK(evaluate(l.memory(), tb, 5.0, 300).global_error == evaluate_serial(l.memory(), tb, 5.0, 300).global_error);
}

TEST_CASE("configuration") {
    CHECK_NOTHROW(default_config(Profile::physical).validate());
    CHECK(default_config(Profile::physical).world.spaces.enabled(Subspace::maintained));
    const ExperimentConfig c = config_from_json({{"profile", "left-arm"}, {"iterations", 10}});
    CHECK(c.profile == Profile::left_arm);
    CHECK(c.iterations == 10);
    const ExperimentConfig round = config_from_json(to_json(c));
    CHECK(to_json(round) == to_json(c));

    const auto message = [](const nlohmann::json& j) {
        try {
            config_from_json(j);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message({{"eval_every", 0}}).find("config field 'eval_every'") != std::string::npos);
    CHECK(message({{"memory", {{"gamma", 0.5}}}}).find("config field 'memory.gamma'") != std::string::npos);
    CHECK(message({{"memory", {{"k", "five"}}}}).find("config field 'memory.k'") != std::string::npos);
    CHECK(message({{"costs", {{"action_teacher", 0.5}}}}).find("costs.action_teacher") != std::string::npos);
    CHECK(message({{"profile", "moon"}}).find("config field 'profile'") != std::string::npos);
    CHECK(message({{"variants", {"SGIM"}}}).find("config field 'variants'") != std::string::npos);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("batches resume after interruption") {
    ExperimentConfig cfg = default_config(Profile::simulation);
    cfg.variants = {Variant::im_pb};
    cfg.seeds = {0, 1};
    cfg.iterations = 0;
    cfg.eval_every = 10;
    cfg.testbench_counts = {10, 10, 10, 10, 10, 0};
    const auto dir = fresh_dir("resume");
    const auto first = run_batch(cfg, dir);
    REQUIRE(first.size() == 2);
    // No episode: one evaluation at iteration 0 with an empty memory.
    CHECK(first[0].snapshots.size() == 1);
    CHECK(first[0].final_error() == 5.0);

    cfg.iterations = 20;
    std::filesystem::remove(dir / cell_name(Variant::im_pb, 1) / "summary.json");
    std::vector<std::string> messages;
    const auto second = run_batch(cfg, dir, [&](const std::string& m) { messages.push_back(m); });
    std::size_t skipped = 0;
    for (const std::string& m : messages) skipped += m.rfind("skip", 0) == 0;
    CHECK(skipped == 1);
    CHECK(second[0].episodes == 0);
    CHECK(second[1].episodes == 20);
    CHECK(second[1].snapshots.size() == 3);
    CHECK(std::filesystem::exists(dir / "aggregate.csv"));
    std::filesystem::remove_all(dir);
}
