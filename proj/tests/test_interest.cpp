#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "sgim/interest.hpp"

using namespace sgim;

namespace {

const OutcomeSpaces kSpaces = OutcomeSpaces::for_table(TableConfig{}, false);

Outcome touch(double x, double y) { return Outcome::make(Subspace::touch, {x, y}); }

InterestRegion region_with(const std::vector<std::pair<Coords, double>>& pts) {
    InterestRegion r;
    r.space = Subspace::touch;
    r.hi = {1.0, 1.0, 0.0, 0.0};
    std::uint64_t t = 0;
    for (const auto& [u, v] : pts) r.points.push_back({u, 0, v, t++});
    return r;
}

}  // namespace

TEST_CASE("competence") {
    const Outcome g = touch(0.5, 0.5);
    const std::vector<ReachedOutcome> exact{{g, 1}};
    CHECK(competence(kSpaces, g, exact, 5.0) == 0.0);
    CHECK(competence(kSpaces, g, {}, 5.0) == 5.0);
    const std::vector<ReachedOutcome> other{{Outcome::make(Subspace::blue, {0.5, 0.5}), 1}};
    CHECK(competence(kSpaces, g, other, 5.0) == 5.0);
    const std::vector<ReachedOutcome> two{{touch(0.5, 0.8), 1}, {touch(0.5, 1.2), 2}};
    CHECK(competence(kSpaces, g, two, 5.0) == doctest::Approx(0.3));
}

TEST_CASE("progress and interest after an episode") {
    const Outcome g = touch(0.5, 0.5);
    for (const auto& [cost, expected] : std::vector<std::pair<double, double>>{{1.0, 5.0}, {5.0, 1.0}, {10.0, 0.5}}) {
        EpisodicMemory memory(kSpaces, MemoryParams{});
        InterestMap map(kSpaces.enabled_list(), 1, InterestParams{});
        CompetenceLedger ledger(0.05);
        const std::size_t id = memory.store({g, "s", {DmpParams{}}, std::nullopt, {{g, 1}}});
        const auto samples = update_interest(map, ledger, memory, id, 0, cost);
        REQUIRE(samples.size() == 2);
        CHECK(samples[0].is_goal);
        CHECK(samples[0].progress == 5.0);
        CHECK(samples[0].interest == doctest::Approx(expected).epsilon(1e-12));

        // Repeating the same episode brings no further progress.
        const std::size_t again = memory.store({g, "s", {DmpParams{}}, std::nullopt, {{g, 1}}});
        const auto none = update_interest(map, ledger, memory, again, 0, cost);
        CHECK(none[0].progress == 0.0);
        CHECK(none[0].interest == 0.0);
    }
    EpisodicMemory memory(kSpaces, MemoryParams{});
    InterestMap map(kSpaces.enabled_list(), 1, InterestParams{});
    CompetenceLedger ledger(0.05);
    const std::size_t id = memory.store({g, "s", {DmpParams{}}, std::nullopt, {}});
    CHECK_THROWS_AS(update_interest(map, ledger, memory, id, 0, 0.5), std::invalid_argument);
}

TEST_CASE("progress is never negative") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    EpisodicMemory memory(kSpaces, MemoryParams{});
    InterestMap map(kSpaces.enabled_list(), 2, InterestParams{});
    CompetenceLedger ledger(0.05);
    for (int i = 0; i < 2000; ++i) {
        const Outcome goal = touch(u(rng), u(rng));
        std::vector<ReachedOutcome> reached;
        if (u(rng) < 0.8) reached.push_back({touch(u(rng), u(rng)), 1});
        const std::size_t id = memory.store({goal, "s", {DmpParams{}}, std::nullopt, reached});
        for (const auto& s : update_interest(map, ledger, memory, id, i % 2, 1.0 + 4.0 * (i % 2))) {
            CHECK(s.progress >= 0.0);
            CHECK(s.interest >= 0.0);
        }
    }
}

TEST_CASE("competence ledger") {
    CompetenceLedger ledger(0.05);
    const Coords a{0.5, 0.5};
    CHECK_FALSE(ledger.best(Subspace::touch, a).has_value());
    ledger.record(Subspace::touch, a, 0.4);
    ledger.record(Subspace::touch, {0.52, 0.5}, 0.6);
    CHECK(*ledger.best(Subspace::touch, a) == 0.4);
    ledger.record(Subspace::touch, {0.51, 0.5}, 0.1);
    CHECK(*ledger.best(Subspace::touch, a) == 0.1);
    CHECK(ledger.size() == 1);
    CHECK_FALSE(ledger.best(Subspace::touch, {0.7, 0.5}).has_value());
    CHECK_FALSE(ledger.best(Subspace::blue, a).has_value());
}

TEST_CASE("region splitting") {
    SUBCASE("separable halves") {
        std::vector<std::pair<Coords, double>> pts;
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng), y = u(rng);
            pts.push_back({{x, y}, x < 0.5 ? 1.0 : 0.0});
        }
        const SplitChoice c = choose_split(region_with(pts), 10);
        CHECK(c.dim == 0);
        double max_left = 0.0, min_right = 1.0;
        for (const auto& [p, v] : pts) {
            if (v == 1.0) max_left = std::max(max_left, p[0]);
            else min_right = std::min(min_right, p[0]);
        }
        CHECK(c.cut > max_left);
        CHECK(c.cut <= min_right);
    }
    SUBCASE("uniform interest splits the widest dimension at its midpoint") {
        InterestRegion r = region_with({{{0.1, 0.1}, 0.3}, {{0.2, 0.3}, 0.3}, {{0.3, 0.2}, 0.3}});
        r.hi = {0.5, 1.0, 0.0, 0.0};
        const SplitChoice c = choose_split(r, 10);
        CHECK(c.dim == 1);
        CHECK(c.cut == doctest::Approx(0.5));
    }
    SUBCASE("identical points fall back to the midpoint rule") {
        const SplitChoice c = choose_split(region_with({{{0.3, 0.3}, 1.0}, {{0.3, 0.3}, 0.0}}), 10);
        CHECK(c.cut == doctest::Approx(0.5));
    }
    SUBCASE("the chosen cut maximises the criterion over all candidates") {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::pair<Coords, double>> pts;
            for (int i = 0; i < 81; ++i) {
                const double x = u(rng), y = u(rng);
                pts.push_back({{x, y}, std::sin(7 * x) * std::cos(3 * y) + 0.2 * u(rng)});
            }
            const InterestRegion r = region_with(pts);
            const SplitChoice c = choose_split(r, 10);
            double best = 0.0;
            for (const SplitChoice& cand : split_candidates(r, 10)) best = std::max(best, cand.score);
            CHECK(c.score == best);
        }
    }
    SUBCASE("children partition the parent's points") {
        std::vector<std::pair<Coords, double>> pts;
        for (int i = 0; i < 20; ++i) pts.push_back({{i / 20.0, 0.5}, static_cast<double>(i)});
        const InterestRegion r = region_with(pts);
        const auto [left, right] = split_region(r, {0, 0.4, 1.0}, 7, 8);
        CHECK(left.points.size() + right.points.size() == 20);
        CHECK(left.hi[0] == 0.4);
        CHECK(right.lo[0] == 0.4);
        for (const auto& p : left.points) CHECK(p.unit[0] < 0.4);
        for (const auto& p : right.points) CHECK(p.unit[0] >= 0.4);
        CHECK(left.id == 7);
        CHECK(right.id == 8);
    }
}

TEST_CASE("regions keep tiling the unit cube") {
    const OutcomeSpaces spaces = OutcomeSpaces::for_table(TableConfig{}, true);
    const auto list = spaces.enabled_list();
    InterestMap map(list, 2, InterestParams{});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int op = 0; op < 100000; ++op) {
        const Subspace s = list[static_cast<std::size_t>(op) % list.size()];
        Coords p{};
        const bool dense = op % 3 == 0;
        for (std::size_t d = 0; d < dimension(s); ++d) p[d] = dense ? 0.7 + 1e-4 * u(rng) : u(rng);
        if (op % 50 == 0) p[0] = 1.0;
        map.add(s, p, static_cast<std::size_t>(op) % 2, u(rng));
        CHECK(oracle::single_owner(map, s, p));
        if (op % 20000 == 19999) {
            for (Subspace t : list) CHECK(oracle::tiles_unit_cube(map, t));
        }
    }
    for (Subspace t : list) {
        for (const auto& r : map.regions(t)) CHECK(r.points.size() <= InterestParams{}.split_threshold);
    }
}

TEST_CASE("roulette") {
    Rng rng(17);
    SUBCASE("proportional to fitness") {
        const std::vector<double> f{3.0, 1.0};
        std::array<std::size_t, 2> counts{};
        for (int i = 0; i < 10000; ++i) ++counts[roulette(f, rng)];
        const std::array<double, 2> p{0.75, 0.25};
        CHECK(oracle::chi_square_sf(oracle::chi_square(counts, p), 1) > 0.01);
    }
    SUBCASE("all zero is uniform") {
        const std::vector<double> f{0.0, 0.0, 0.0};
        std::array<std::size_t, 3> counts{};
        for (int i = 0; i < 9000; ++i) ++counts[roulette(f, rng)];
        for (std::size_t c : counts) CHECK(c > 2700);
    }
    SUBCASE("zero-fitness entries are never drawn otherwise") {
        const std::vector<double> f{0.0, 2.0, 0.0};
        for (int i = 0; i < 1000; ++i) CHECK(roulette(f, rng) == 1);
    }
    SUBCASE("single candidate") {
        const std::vector<double> f{0.4};
        CHECK(roulette(f, rng) == 0);
    }
    CHECK_THROWS_AS(roulette(std::vector<double>{}, rng), std::invalid_argument);
}

TEST_CASE("goal and strategy selection") {
    const auto all = [](Subspace, std::size_t) { return true; };
    Rng rng(4);
    SUBCASE("forced uniform draw covers subspaces and strategies") {
        InterestMap map(kSpaces.enabled_list(), 3, InterestParams{});
        std::set<std::pair<int, std::size_t>> seen;
        for (int i = 0; i < 2000; ++i) {
            const Selection s = select_goal_and_strategy(map, kSpaces, all, rng, true);
            CHECK(s.uniform);
            seen.insert({static_cast<int>(s.goal.space), s.strategy});
        }
        CHECK(seen.size() == kSpaces.enabled_list().size() * 3);
    }
    SUBCASE("a single region and strategy is always chosen") {
        const std::vector<Subspace> one{Subspace::touch};
        InterestParams p;
        p.epsilon = 0.0;
        InterestMap map(one, 1, p);
        map.add(Subspace::touch, {0.2, 0.2}, 0, 1.0);
        OutcomeSpaces spaces = kSpaces;
        for (std::size_t i = 1; i < kSubspaceCount; ++i) spaces.set_enabled(subspace_at(i), false);
        for (int i = 0; i < 100; ++i) {
            const Selection s = select_goal_and_strategy(map, spaces, all, rng, false);
            CHECK(s.goal.space == Subspace::touch);
            CHECK(s.strategy == 0);
            CHECK_FALSE(s.uniform);
        }
    }
    SUBCASE("inapplicable pairs are never selected") {
        InterestMap map(kSpaces.enabled_list(), 2, InterestParams{});
        const auto only_touch_first = [](Subspace s, std::size_t k) { return s == Subspace::touch && k == 0; };
        for (int i = 0; i < 200; ++i) {
            const Selection s = select_goal_and_strategy(map, kSpaces, only_touch_first, rng, i % 2 == 0);
            CHECK(s.goal.space == Subspace::touch);
            CHECK(s.strategy == 0);
        }
    }
}
