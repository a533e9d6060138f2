#include <doctest.h>

#include <random>
#include <vector>

#include "sgim/memory.hpp"

using namespace sgim;

namespace {

const OutcomeSpaces kSpaces = OutcomeSpaces::for_table(TableConfig{}, false);

DmpParams prim(double tag) {
    DmpParams p;
    p.joints[0].weight = tag;
    return p;
}

ActionSequence seq(std::initializer_list<double> tags) {
    ActionSequence out;
    for (double t : tags) out.push_back(prim(t));
    return out;
}

Outcome touch(double x, double y) { return Outcome::make(Subspace::touch, {x, y}); }
Outcome blue(double x, double y) { return Outcome::make(Subspace::blue, {x, y}); }
Outcome green(double x, double y) { return Outcome::make(Subspace::green, {x, y}); }

EpisodeRecord episode(ActionSequence a, std::vector<ReachedOutcome> reached) {
    return {reached.empty() ? touch(0, 0) : reached.front().outcome, "test", std::move(a), std::nullopt,
            std::move(reached)};
}

}  // namespace

TEST_CASE("storage and direct retrieval") {
    EpisodicMemory m(kSpaces, MemoryParams{});
    CHECK(m.nearest_actions(touch(0.5, 0.5), 3).empty());
    m.store(episode(seq({1, 2}), {{touch(0.2, 0.2), 1}, {touch(0.4, 0.4), 2}}));
    CHECK(m.action_entry_count() == 2);
    CHECK(m.action_entry_count(Subspace::touch) == 2);

    const auto hit = m.nearest_actions(touch(0.2, 0.2), 1);
    REQUIRE(hit.size() == 1);
    CHECK(hit[0].distance == 0.0);
    CHECK(m.prefix(hit[0]) == seq({1}));
    CHECK(m.nearest_actions(touch(0.4, 0.4), 1)[0].length == 2);

    SUBCASE("duplicates are kept") {
        m.store(episode(seq({1, 2}), {{touch(0.2, 0.2), 1}, {touch(0.4, 0.4), 2}}));
        CHECK(m.episode_count() == 2);
        const auto both = m.nearest_actions(touch(0.2, 0.2), 2);
        REQUIRE(both.size() == 2);
        CHECK(both[0].episode == 0);
        CHECK(both[1].episode == 1);
    }
    SUBCASE("k larger than memory") { CHECK(m.nearest_actions(touch(0.9, 0.9), 50).size() == 2); }
    SUBCASE("reached outcomes must refer to executed primitives") {
        CHECK_THROWS_AS(m.store(episode(seq({1}), {{touch(0.2, 0.2), 2}})), std::invalid_argument);
    }
}

TEST_CASE("ranking under the complexity penalty") {
    EpisodicMemory m(kSpaces, MemoryParams{});
    m.store(episode(seq({1, 2, 3}), {{touch(0.6, 0.5), 3}}));
    m.store(episode(seq({4}), {{touch(0.4, 0.5), 1}}));
    const auto eq = m.nearest_actions(touch(0.5, 0.5), 2);
    REQUIRE(eq.size() == 2);
    CHECK(eq[0].length == 1);

    EpisodicMemory n(kSpaces, MemoryParams{});
    n.store(episode(seq({1, 2, 3, 4}), {{touch(0.6, 0.5), 4}}));   // d = 0.10, n = 4
    n.store(episode(seq({5}), {{touch(0.5, 0.35), 1}}));           // d = 0.15, n = 1
    const auto r = n.nearest_actions(touch(0.5, 0.5), 2);
    CHECK(r[0].episode == 1);
    CHECK(r[0].perf == doctest::Approx(0.18));
    CHECK(r[1].perf == doctest::Approx(0.20736));
}

TEST_CASE("procedure records") {
    EpisodicMemory m(kSpaces, MemoryParams{});
    CHECK(m.nearest_procedures(blue(0.5, 0.5), 3).empty());

    const Procedure p{touch(0.35, 0.65), touch(0.2, 0.2)};
    EpisodeRecord e = episode(seq({1, 2}), {{touch(0.2, 0.2), 2}, {blue(0.2, 0.2), 2}});
    e.procedure = p;
    m.store(std::move(e));
    // Only outcomes observed at the end of the whole sequence become records.
    CHECK(m.procedure_count() == 2);
    const auto hit = m.nearest_procedures(blue(0.2, 0.2), 1);
    REQUIRE(hit.size() == 1);
    CHECK(hit[0].procedure == p);
    CHECK(hit[0].perf == 0.0);
    CHECK(hit[0].length == 2);

    m.add_procedure({p, blue(0.21, 0.2), std::nullopt, true});
    CHECK(m.nearest_procedures(blue(0.21, 0.2), 5).size() == 2);
    CHECK(m.nearest_procedures(blue(0.21, 0.2), 5, false).size() == 1);
    // Unknown lengths are ranked with the configured stand-in.
    const auto t = m.nearest_procedures(blue(0.21, 0.2), 5);
    CHECK(t[0].transferred);
    CHECK(t[0].length == MemoryParams{}.unknown_length);
}

TEST_CASE("nearest distance ignores transferred records and the excluded episode") {
    EpisodicMemory m(kSpaces, MemoryParams{});
    CHECK_FALSE(m.nearest_distance(blue(0.5, 0.5)).has_value());
    m.add_procedure({{touch(0, 0), touch(1, 1)}, blue(0.5, 0.5), std::nullopt, true});
    CHECK_FALSE(m.nearest_distance(blue(0.5, 0.5)).has_value());
    const std::size_t id = m.store(episode(seq({1}), {{blue(0.5, 0.6), 1}}));
    CHECK(*m.nearest_distance(blue(0.5, 0.5)) == doctest::Approx(0.1));
    CHECK_FALSE(m.nearest_distance(blue(0.5, 0.5), id).has_value());
}

TEST_CASE("recursive inverse model") {
    EpisodicMemory m(kSpaces, MemoryParams{});
    CHECK_THROWS_AS(m.resolve(touch(0.5, 0.5)), ColdStart);

    m.store(episode(seq({1, 2}), {{blue(0.2, 0.2), 2}}));
    m.store(episode(seq({3, 4}), {{green(0.8, 0.3), 2}}));
    const Outcome sound = Outcome::make(Subspace::burst, {0.1, 0.2, 0.3});
    m.add_procedure({{blue(0.2, 0.2), green(0.8, 0.3)}, sound, 4, false});

    SUBCASE("exact direct hit") {
        const Resolution r = m.resolve(blue(0.2, 0.2));
        CHECK(r.action == seq({1, 2}));
        CHECK_FALSE(r.top_space.has_value());
    }
    SUBCASE("a sound reached only through a procedure") {
        const Resolution r = m.resolve(sound);
        CHECK(r.action == seq({1, 2, 3, 4}));
        REQUIRE(r.top_space.has_value());
        CHECK(r.top_space->name() == "O1,O2");
    }
    SUBCASE("depth 0 uses stored actions only") {
        CHECK_THROWS_AS(m.resolve(sound, 0), ColdStart);
        CHECK(m.resolve(blue(0.2, 0.2), 0).action == seq({1, 2}));
    }
    SUBCASE("a procedure wins a tie against a direct action") {
        m.store(episode(seq({9, 9, 9, 9}), {{sound, 4}}));
        const Resolution r = m.resolve(sound);
        CHECK(r.action == seq({1, 2, 3, 4}));
    }
    SUBCASE("a better direct action wins") {
        m.store(episode(seq({9}), {{sound, 1}}));
        // Same distance to both, but the stored action is shorter.
        CHECK(m.resolve(Outcome::make(Subspace::burst, {0.1, 0.2, 0.31})).action == seq({9}));
    }
    SUBCASE("sequences over the length cap are skipped") {
        MemoryParams p;
        p.max_sequence_length = 3;
        EpisodicMemory small(kSpaces, p);
        small.store(episode(seq({1, 2}), {{blue(0.2, 0.2), 2}}));
        small.store(episode(seq({3, 4}), {{green(0.8, 0.3), 2}}));
        small.add_procedure({{blue(0.2, 0.2), green(0.8, 0.3)}, sound, 4, false});
        CHECK_THROWS_AS(small.resolve(sound), ColdStart);
    }
    SUBCASE("transferred records are never resolved") {
        EpisodicMemory t(kSpaces, MemoryParams{});
        t.store(episode(seq({1, 2}), {{blue(0.2, 0.2), 2}}));
        t.store(episode(seq({3, 4}), {{green(0.8, 0.3), 2}}));
        t.add_procedure({{blue(0.2, 0.2), green(0.8, 0.3)}, sound, std::nullopt, true});
        CHECK_THROWS_AS(t.resolve(sound), ColdStart);
    }
}

TEST_CASE("cyclic procedure knowledge terminates") {
    EpisodicMemory m(kSpaces, MemoryParams{});
    // O1 through O2, O2 through O1, and a self-reference; nothing is directly reachable.
    m.add_procedure({{green(0.5, 0.5), touch(0.1, 0.1)}, blue(0.3, 0.3), 2, false});
    m.add_procedure({{blue(0.3, 0.3), touch(0.1, 0.1)}, green(0.5, 0.5), 2, false});
    m.add_procedure({{blue(0.3, 0.3), blue(0.3, 0.3)}, blue(0.3, 0.3), 2, false});
    CHECK_THROWS_AS(m.resolve(blue(0.3, 0.3)), ColdStart);

    m.store(episode(seq({7}), {{touch(0.1, 0.1), 1}}));
    CHECK_THROWS_AS(m.resolve(blue(0.3, 0.3)), ColdStart);
    m.store(episode(seq({8}), {{green(0.5, 0.5), 1}}));
    const Resolution r = m.resolve(blue(0.3, 0.3));
    REQUIRE(r.top_space.has_value());
    CHECK(r.top_space->name() == "O2,O0");
    CHECK(r.action.front() == prim(8));
    CHECK(r.action.back() == prim(7));
    CHECK(r.action.size() <= MemoryParams{}.max_sequence_length);
}

TEST_CASE("indexed and linear retrieval agree on a large memory") {
    MemoryParams p;
    p.tree_threshold = 200;
    EpisodicMemory m(kSpaces, p);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 8);
    for (int i = 0; i < 2000; ++i) {
        const int n = len(rng);
        ActionSequence a(static_cast<std::size_t>(n), prim(i));
        std::vector<ReachedOutcome> reached{{touch(u(rng), u(rng)), static_cast<std::size_t>(1 + i % n)},
                                            {blue(u(rng), u(rng)), static_cast<std::size_t>(n)}};
        EpisodeRecord e = episode(a, reached);
        if (i % 3 == 0) e.procedure = Procedure{touch(u(rng), u(rng)), touch(u(rng), u(rng))};
        m.store(std::move(e));
        if (i % 7 == 0) m.add_procedure({{touch(0, 0), touch(1, 1)}, blue(u(rng), u(rng)), std::nullopt, true});
    }
    for (int q = 0; q < 100; ++q) {
        const Outcome g = q % 2 ? touch(u(rng), u(rng)) : blue(u(rng), u(rng));
        const auto a = m.nearest_actions(g, 5);
        const auto b = m.nearest_actions_linear(g, 5);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].episode == b[i].episode);
            CHECK(a[i].length == b[i].length);
            CHECK(a[i].perf == b[i].perf);
        }
        for (bool tr : {true, false}) {
            const auto c = m.nearest_procedures(g, 5, tr);
            const auto d = m.nearest_procedures_linear(g, 5, tr);
            REQUIRE(c.size() == d.size());
            for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i].record == d[i].record);
        }
    }
}
