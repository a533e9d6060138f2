#include "sgim/teachers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sgim {

std::optional<JointVector> solve_ik(const ArmModel& arm, Vec2 target, JointVector seed,
                                    const IkParams& p) {
    JointVector q = arm.clamp(seed);
    const double lambda2 = p.damping * p.damping;
    for (std::size_t it = 0; it < p.iterations; ++it) {
        const Vec2 err = target - forward_kinematics(q, arm);
        if (dot(err, err) < p.tolerance * p.tolerance) return q;
        // Column j of the Jacobian sums the link vectors from joint j outward.
        std::array<Vec2, kJointCount> links{};
        double angle = arm.base_angle;
        for (std::size_t j = 0; j < kJointCount; ++j) {
            angle += q[j];
            links[j] = arm.links[j] * Vec2{std::cos(angle), std::sin(angle)};
        }
        std::array<Vec2, kJointCount> jac{};
        Vec2 tail{};
        for (std::size_t j = kJointCount; j-- > 0;) {
            tail = tail + links[j];
            jac[j] = {-tail.y, tail.x};
        }
        double a = lambda2, b = 0.0, d = lambda2;
        for (const Vec2& c : jac) {
            a += c.x * c.x;
            b += c.x * c.y;
            d += c.y * c.y;
        }
        const double det = a * d - b * b;
        const Vec2 y{(d * err.x - b * err.y) / det, (a * err.y - b * err.x) / det};
        for (std::size_t j = 0; j < kJointCount; ++j) q[j] += dot(jac[j], y);
        q = arm.clamp(q);
    }
    const Vec2 err = target - forward_kinematics(q, arm);
    if (dot(err, err) < p.tolerance * p.tolerance) return q;
    return std::nullopt;
}

std::optional<DmpParams> reach_primitive(const World& world, const JointVector& start, Vec2 target,
                                         Rng& rng, double tolerance) {
    const ArmModel& arm = world.arm;
    std::optional<JointVector> best;
    double best_move = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 8; ++attempt) {
        JointVector seed = start;
        if (attempt > 0) {
            for (std::size_t j = 0; j < kJointCount; ++j) {
                seed[j] = std::uniform_real_distribution<double>(0.8 * arm.lower[j], 0.8 * arm.upper[j])(rng);
            }
        }
        // Solve inside slightly narrowed limits so the goal correction below has room.
        ArmModel inner = arm;
        for (std::size_t j = 0; j < kJointCount; ++j) {
            inner.lower[j] += 0.05;
            inner.upper[j] -= 0.05;
        }
        const auto q = solve_ik(inner, target, seed, IkParams{0.05, 1e-7, 300});
        if (!q) continue;
        double move = 0.0;
        for (std::size_t j = 0; j < kJointCount; ++j) move += std::abs((*q)[j] - start[j]);
        if (move < best_move) {
            best_move = move;
            best = q;
        }
    }
    if (!best) return std::nullopt;

    DmpParams prim;
    for (std::size_t j = 0; j < kJointCount; ++j) prim.joints[j] = {0.0, (*best)[j]};
    for (int iter = 0; iter < 6; ++iter) {
        const JointVector end = integrate_primitive(prim, start, world.dmp, arm).end();
        if (norm(forward_kinematics(end, arm) - target) < tolerance) return prim;
        for (std::size_t j = 0; j < kJointCount; ++j) {
            prim.joints[j].goal =
                std::clamp(prim.joints[j].goal + ((*best)[j] - end[j]), arm.lower[j], arm.upper[j]);
        }
    }
    const JointVector end = integrate_primitive(prim, start, world.dmp, arm).end();
    if (norm(forward_kinematics(end, arm) - target) < tolerance) return prim;
    return std::nullopt;
}

std::optional<ActionSequence> waypoint_action(const World& world, const std::vector<Vec2>& waypoints,
                                              Rng& rng) {
    ActionSequence seq;
    JointVector q = world.arm.initial;
    for (Vec2 w : waypoints) {
        const auto prim = reach_primitive(world, q, w, rng);
        if (!prim) return std::nullopt;
        q = integrate_primitive(*prim, q, world.dmp, world.arm).end();
        seq.push_back(*prim);
    }
    return seq;
}

DemoBudget default_budget(Profile p) {
    if (p == Profile::physical) return {9, 7, 7, 32, 7, false};
    return {11, 10, 8, 37, 36, true};
}

namespace {

constexpr double kMatchTolerance = 1e-3;

using Check = std::function<bool(const Rollout&)>;

bool reaches(const Rollout& ro, const Outcome& target, std::size_t length, const OutcomeSpaces& spaces) {
    return std::any_of(ro.reached.begin(), ro.reached.end(), [&](const ReachedOutcome& r) {
        return r.length == length && r.outcome.space == target.space &&
               spaces.distance(r.outcome, target) < kMatchTolerance;
    });
}

std::optional<ActionDemo> build_demo(const World& world, const std::vector<Vec2>& waypoints,
                                     const Check& check, Rng& rng) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        auto action = waypoint_action(world, waypoints, rng);
        if (!action) continue;
        Rollout ro = rollout(world, *action);
        if (ro.blocked > 0 || !check(ro)) continue;
        return ActionDemo{std::move(*action), std::move(ro.reached)};
    }
    return std::nullopt;
}

class DemoFactory {
public:
    DemoFactory(const World& world, std::uint64_t seed) : world_(world), rng_(seed) {}

    Vec2 uniform_point(double margin) {
        const TableConfig& t = world_.table;
        return {std::uniform_real_distribution<double>(t.origin.x + margin, t.origin.x + t.width - margin)(rng_),
                std::uniform_real_distribution<double>(t.origin.y + margin, t.origin.y + t.height - margin)(rng_)};
    }

    std::vector<ActionDemo> touches(std::size_t n) {
        const TableConfig& t = world_.table;
        return repeat(n, [&]() -> std::optional<ActionDemo> {
            const Vec2 p = uniform_point(0.0);
            if (norm(p - t.blue_start) < 2 * t.object_radius || norm(p - t.green_start) < 2 * t.object_radius) {
                return std::nullopt;
            }
            const Outcome goal = Outcome::make(Subspace::touch, {p.x, p.y});
            return build_demo(world_, {p}, [&](const Rollout& ro) {
                return reaches(ro, goal, 1, world_.spaces) && !ro.final_state.held;
            }, rng_);
        });
    }

    std::vector<ActionDemo> moves(std::size_t n, int obj) {
        const TableConfig& t = world_.table;
        const Vec2 start = obj == kBlue ? t.blue_start : t.green_start;
        const Vec2 other = obj == kBlue ? t.green_start : t.blue_start;
        const Subspace s = obj == kBlue ? Subspace::blue : Subspace::green;
        return repeat(n, [&]() -> std::optional<ActionDemo> {
            const Vec2 p = uniform_point(0.0);
            if (norm(p - other) < 2 * t.object_radius) return std::nullopt;
            const Outcome goal = Outcome::make(s, {p.x, p.y});
            return build_demo(world_, {start, p}, [&](const Rollout& ro) {
                return reaches(ro, goal, 2, world_.spaces);
            }, rng_);
        });
    }

    std::optional<ActionDemo> place_both(Vec2 p1, Vec2 p2, const std::optional<Outcome>& sound) {
        const TableConfig& t = world_.table;
        if (norm(p1 - t.green_start) < 2 * t.object_radius || norm(p2 - p1) < 2 * t.object_radius) {
            return std::nullopt;
        }
        const Outcome both = Outcome::make(Subspace::both, {p1.x, p1.y, p2.x, p2.y});
        return build_demo(world_, {t.blue_start, p1, t.green_start, p2}, [&](const Rollout& ro) {
            if (!reaches(ro, both, 4, world_.spaces)) return false;
            if (sound) return reaches(ro, *sound, 4, world_.spaces);
            return std::any_of(ro.reached.begin(), ro.reached.end(),
                               [](const ReachedOutcome& r) { return r.outcome.space == Subspace::burst; });
        }, rng_);
    }

    std::vector<ActionDemo> placements(std::size_t n) {
        return repeat(n, [&]() { return place_both(uniform_point(0.0), uniform_point(0.0), std::nullopt); });
    }

    std::vector<ActionDemo> sounds(std::size_t n) {
        const TableConfig& t = world_.table;
        return repeat(n, [&]() -> std::optional<ActionDemo> {
            Coords u{};
            for (std::size_t d = 0; d < 3; ++d) u[d] = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
            const Outcome goal = world_.spaces.denormalize(Subspace::burst, u);
            const auto [p1, p2] = invert_burst(t, goal.coords[0], goal.coords[1], goal.coords[2]);
            TableState st = reset(t);
            st.objects = {p1, p2};
            const SoundParams s = burst_sound(t, st);
            if (std::abs(s.frequency - goal.coords[0]) > 1e-6 || std::abs(s.level - goal.coords[1]) > 1e-6 ||
                std::abs(s.rhythm - goal.coords[2]) > 1e-6) {
                return std::nullopt;
            }
            return place_both(p1, p2, goal);
        });
    }

private:
    template <class F>
    std::vector<ActionDemo> repeat(std::size_t n, F&& make) {
        std::vector<ActionDemo> out;
        std::size_t tries = 0;
        while (out.size() < n) {
            if (++tries > 200 * n + 200) throw std::runtime_error("teacher demo generation did not converge");
            if (auto demo = make()) out.push_back(std::move(*demo));
        }
        return out;
    }

    const World& world_;
    Rng rng_;
};

Teacher action_teacher(std::string name, std::vector<Subspace> expertise, std::vector<ActionDemo> demos) {
    Teacher t;
    t.name = std::move(name);
    t.kind = TeacherKind::action;
    t.expertise = std::move(expertise);
    t.actions = std::move(demos);
    return t;
}

Teacher rule_teacher(std::string name, Subspace s) {
    Teacher t;
    t.name = std::move(name);
    t.kind = TeacherKind::procedure_rule;
    t.expertise = {s};
    return t;
}

Vec2 tip_after(const World& world, const ActionSequence& action, std::size_t length) {
    ActionSequence prefix(action.begin(), action.begin() + static_cast<std::ptrdiff_t>(length));
    return rollout(world, prefix).boundary_tips.back();
}

const Outcome* find_reached(const ActionDemo& d, Subspace s, std::size_t length) {
    for (const ReachedOutcome& r : d.reached) {
        if (r.outcome.space == s && r.length == length) return &r.outcome;
    }
    return nullptr;
}

// Repertoire mirroring an action teacher's demos: each entry decomposes the
// demo's target outcome into the sub-outcomes its halves produced.
Teacher repertoire_teacher(std::string name, Subspace s, const std::vector<ActionDemo>& demos,
                           const World& world) {
    Teacher t;
    t.name = std::move(name);
    t.kind = TeacherKind::procedure_repertoire;
    t.expertise = {s};
    for (const ActionDemo& d : demos) {
        const Outcome* reached = find_reached(d, s, d.action.size());
        if (!reached) continue;
        Procedure proc;
        if (s == Subspace::blue || s == Subspace::green) {
            const Vec2 a = tip_after(world, d.action, 1), b = tip_after(world, d.action, 2);
            proc = {Outcome::make(Subspace::touch, {a.x, a.y}), Outcome::make(Subspace::touch, {b.x, b.y})};
        } else {
            const Outcome* blue = find_reached(d, Subspace::blue, 2);
            const Outcome* green = find_reached(d, Subspace::green, 4);
            if (!blue || !green) continue;
            proc = {*blue, *green};
        }
        t.procedures.push_back({proc, *reached});
    }
    return t;
}

}  // namespace

std::vector<Teacher> make_teachers(Profile profile, const World& world, std::uint64_t seed) {
    const DemoBudget budget = default_budget(profile);
    DemoFactory factory(world, seed);
    std::vector<Teacher> out;
    out.push_back(action_teacher("AT0", {Subspace::touch}, factory.touches(budget.touch)));
    auto blue = factory.moves(budget.blue, kBlue);
    auto green = factory.moves(budget.green, kGreen);
    auto both = factory.placements(budget.both);
    auto burst = factory.sounds(budget.burst);
    out.push_back(action_teacher("AT1", {Subspace::blue}, blue));
    out.push_back(action_teacher("AT2", {Subspace::green}, green));
    if (budget.merged_complex) {
        std::vector<ActionDemo> merged = both;
        merged.insert(merged.end(), burst.begin(), burst.end());
        out.push_back(action_teacher("AT34", {Subspace::both, Subspace::burst}, std::move(merged)));
        out.push_back(rule_teacher("PT1", Subspace::blue));
        out.push_back(rule_teacher("PT2", Subspace::green));
        out.push_back(rule_teacher("PT3", Subspace::both));
        out.push_back(rule_teacher("PT4", Subspace::burst));
    } else {
        out.push_back(action_teacher("AT3", {Subspace::both}, both));
        out.push_back(action_teacher("AT4", {Subspace::burst}, burst));
        out.push_back(repertoire_teacher("PT1", Subspace::blue, blue, world));
        out.push_back(repertoire_teacher("PT2", Subspace::green, green, world));
        out.push_back(repertoire_teacher("PT3", Subspace::both, both, world));
        out.push_back(repertoire_teacher("PT4", Subspace::burst, burst, world));
    }
    return out;
}

}  // namespace sgim
