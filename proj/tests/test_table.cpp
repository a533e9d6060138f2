#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sgim/table.hpp"

using namespace sgim;

namespace {

std::vector<Vec2> line(Vec2 a, Vec2 b, int n = 50) {
    std::vector<Vec2> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (static_cast<double>(i) / n) * (b - a));
    out.push_back(b);
    return out;
}

TableState placed(const TableConfig& cfg, Vec2 blue, Vec2 green) {
    TableState st = reset(cfg);
    st.objects = {blue, green};
    st.moved = {true, true};
    return st;
}

}  // namespace

TEST_CASE("burst sound matches the reference formulas") {
    const TableConfig cfg;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const TableState st = placed(cfg, {u(rng), u(rng)}, {u(rng), u(rng)});
        const SoundParams s = burst_sound(cfg, st);
        const oracle::Sound o = oracle::burst(1.0, 1.0, cfg.object_radius, st.objects[kBlue], st.objects[kGreen]);
        CHECK(std::fabs(s.frequency - o.f) < 1e-12);
        CHECK(std::fabs(s.level - o.l) < 1e-12);
        CHECK(std::fabs(s.rhythm - o.b) < 1e-12);
        CHECK(s.frequency >= -1.0);
        CHECK(s.frequency <= 1.0);
        CHECK(s.level >= -1.0 - 1e-12);
        CHECK(s.level <= 1.0);
        CHECK(s.rhythm >= 0.05);
        CHECK(s.rhythm <= 1.0);
    }
}

TEST_CASE("burst sound boundary cases") {
    const TableConfig cfg;
    const double r_min = 2.0 * cfg.object_radius;
    CHECK(burst_sound(cfg, placed(cfg, {0.0, 0.0}, {0.5, 0.5})).frequency == 1.0);
    CHECK(burst_sound(cfg, placed(cfg, {1.0, 1.0}, {0.5, 0.5})).frequency == 1.0);
    CHECK(burst_sound(cfg, placed(cfg, {0.5, 0.5}, {0.9, 0.5})).frequency == doctest::Approx(-1.0));
    CHECK(burst_sound(cfg, placed(cfg, {0.5, 0.5}, {0.5 + r_min, 0.5})).level == 1.0);
    CHECK(burst_sound(cfg, placed(cfg, {0.5, 0.5}, {0.5 + r_min / 2, 0.5})).level == 1.0);
    CHECK(burst_sound(cfg, placed(cfg, {0.3, 0.5}, {0.7, 0.5})).rhythm == 0.05);
    CHECK(burst_sound(cfg, placed(cfg, {0.7, 0.5}, {0.3, 0.5})).rhythm == 1.0);
    CHECK(burst_sound(cfg, placed(cfg, {0.0, 0.0}, {1.0, 1.0})).level == doctest::Approx(-1.0));
}

TEST_CASE("maintained sound duration") {
    const TableConfig cfg;
    TableState st = placed(cfg, {0.75, 0.75}, {0.25, 0.25});
    CHECK_FALSE(maintain_sound(cfg, st, {0.5, 0.5}).has_value());
    st.burst = burst_sound(cfg, st);
    CHECK(*maintain_sound(cfg, st, {0.25, 0.25})->duration == 0.0);
    CHECK(*maintain_sound(cfg, st, {0.75, 0.75})->duration == doctest::Approx(0.5).epsilon(1e-12));
    st.objects[kGreen] = {0.0, 0.0};
    CHECK(*maintain_sound(cfg, st, {1.0, 1.0})->duration == doctest::Approx(1.0).epsilon(1e-12));
    const auto m = maintain_sound(cfg, st, {0.3, 0.6});
    CHECK(m->frequency == st.burst->frequency);
    CHECK(std::fabs(*m->duration - oracle::duration(1.0, 1.0, {0.0, 0.0}, {0.3, 0.6})) < 1e-12);
}

TEST_CASE("touching the table away from the objects") {
    const TableConfig cfg;
    const TableState s0 = reset(cfg);
    const auto r = step_primitive(cfg, s0, line({0.1, 0.1}, {0.2, 0.3}));
    CHECK_FALSE(r.events.blocked);
    REQUIRE(r.events.touch.has_value());
    CHECK(*r.events.touch == Vec2{0.2, 0.3});
    CHECK_FALSE(r.events.moved_object.has_value());
    CHECK(r.state.objects == s0.objects);
    CHECK_FALSE(r.state.held.has_value());
}

TEST_CASE("an endpoint off the table is no touch") {
    const TableConfig cfg;
    const auto r = step_primitive(cfg, reset(cfg), line({0.1, 0.1}, {0.2, -0.05}));
    CHECK_FALSE(r.events.touch.has_value());
}

TEST_CASE("sweeping both disks blocks the motion") {
    const TableConfig cfg;
    const TableState s0 = reset(cfg);
    const auto r = step_primitive(cfg, s0, line({0.2, 0.65}, {0.8, 0.65}));
    CHECK(r.events.blocked);
    CHECK(r.state == s0);
    CHECK_FALSE(r.events.touch.has_value());
    CHECK_FALSE(r.events.burst.has_value());
}

TEST_CASE("pick, carry and release") {
    const TableConfig cfg;
    TableState s = reset(cfg);
    auto r = step_primitive(cfg, s, line({0.35, 0.3}, cfg.blue_start));
    CHECK(r.state.held == kBlue);
    CHECK_FALSE(r.events.moved_object.has_value());
    r = step_primitive(cfg, r.state, line(cfg.blue_start, {0.2, 0.2}));
    CHECK(r.events.moved_object == kBlue);
    CHECK(r.state.objects[kBlue] == Vec2{0.2, 0.2});
    CHECK(r.state.moved[kBlue]);
    CHECK_FALSE(r.state.held.has_value());
    CHECK_FALSE(r.events.burst.has_value());

    SUBCASE("moving the second object emits the burst") {
        auto g = step_primitive(cfg, r.state, line({0.2, 0.2}, cfg.green_start));
        CHECK(g.state.held == kGreen);
        g = step_primitive(cfg, g.state, line(cfg.green_start, {0.8, 0.3}));
        CHECK(g.events.moved_object == kGreen);
        REQUIRE(g.events.burst.has_value());
        CHECK(*g.events.burst == burst_sound(cfg, g.state));
        CHECK_FALSE(g.events.maintained.has_value());

        const auto t = step_primitive(cfg, g.state, line({0.8, 0.3}, {0.5, 0.1}));
        REQUIRE(t.events.maintained.has_value());
        CHECK(*t.events.maintained->duration == doctest::Approx(std::hypot(0.3, 0.2) / std::sqrt(2.0)));
    }
    SUBCASE("leaving a released object does not touch it again") {
        const auto away = step_primitive(cfg, r.state, line({0.2, 0.2}, {0.5, 0.1}));
        CHECK_FALSE(away.events.blocked);
        CHECK_FALSE(away.state.held.has_value());
    }
    SUBCASE("a held object stays put unless the next primitive starts on it") {
        auto p = step_primitive(cfg, reset(cfg), line({0.35, 0.3}, cfg.blue_start));
        p = step_primitive(cfg, p.state, line({0.1, 0.1}, {0.1, 0.2}));
        CHECK(p.state.objects[kBlue] == cfg.blue_start);
        CHECK_FALSE(p.events.moved_object.has_value());
    }
}

TEST_CASE("carried objects are clamped to the table") {
    const TableConfig cfg;
    auto r = step_primitive(cfg, reset(cfg), line({0.35, 0.3}, cfg.blue_start));
    r = step_primitive(cfg, r.state, line(cfg.blue_start, {0.35, 1.1}));
    CHECK(r.state.objects[kBlue] == Vec2{0.35, 1.0});
}

TEST_CASE("reset") {
    const TableConfig cfg;
    const TableState a = reset(cfg);
    CHECK(a == reset(cfg));
    CHECK_FALSE(a.moved[kBlue]);
    CHECK_FALSE(a.moved[kGreen]);
    CHECK_FALSE(a.burst.has_value());
    auto r = step_primitive(cfg, a, line({0.35, 0.3}, cfg.blue_start));
    r = step_primitive(cfg, r.state, line(cfg.blue_start, {0.2, 0.2}));
    CHECK_FALSE(r.state == a);
    CHECK(reset(cfg) == a);
}

TEST_CASE("table configuration validation") {
    TableConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.blue_start = {1.5, 0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = TableConfig{};
    cfg.object_radius = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(step_primitive(TableConfig{}, reset(TableConfig{}), std::vector<Vec2>{}), std::invalid_argument);
}
