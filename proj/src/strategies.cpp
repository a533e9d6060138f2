#include "sgim/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sgim {

const char* kind_name(StrategyKind k) {
    switch (k) {
        case StrategyKind::random_action: return "random-action";
        case StrategyKind::auton_action: return "auton-action";
        case StrategyKind::auton_procedure: return "auton-procedure";
        case StrategyKind::mimic_action: return "mimic-action";
        case StrategyKind::mimic_procedure: return "mimic-procedure";
    }
    return "?";
}

void StrategyConfig::validate() const {
    if (!(cost >= 1.0)) throw std::invalid_argument("strategy " + name + ": cost must be at least 1");
    const bool mimic = kind == StrategyKind::mimic_action || kind == StrategyKind::mimic_procedure;
    if (mimic != teacher.has_value()) {
        throw std::invalid_argument("strategy " + name + ": teacher index required exactly for mimicry");
    }
}

double local_probability(double d_nn, const ExplorationParams& p) {
    return std::clamp(1.0 - d_nn / p.d_thres, p.p_local_min, p.p_local_max);
}

DmpParams random_primitive(const ArmModel& arm, Rng& rng) {
    DmpParams out;
    std::uniform_real_distribution<double> weight(-arm.weight_bound, arm.weight_bound);
    for (std::size_t j = 0; j < kJointCount; ++j) {
        out.joints[j].weight = weight(rng);
        out.joints[j].goal = std::uniform_real_distribution<double>(arm.lower[j], arm.upper[j])(rng);
    }
    return out;
}

ActionSequence random_action(const ArmModel& arm, std::size_t max_length, double decay, Rng& rng) {
    if (max_length == 0) throw std::invalid_argument("max_length must be positive");
    std::vector<double> w(max_length);
    double p = 1.0;
    for (std::size_t n = 0; n < max_length; ++n) {
        p *= decay;
        w[n] = p;
    }
    const std::size_t len = std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng) + 1;
    ActionSequence seq;
    seq.reserve(len);
    for (std::size_t i = 0; i < len; ++i) seq.push_back(random_primitive(arm, rng));
    return seq;
}

ActionSequence perturb_action(const ActionSequence& source, const ArmModel& arm, double sigma,
                              Rng& rng) {
    ActionSequence out = source;
    if (sigma <= 0.0) return out;
    std::normal_distribution<double> noise(0.0, 1.0);
    const double w_range = 2.0 * arm.weight_bound;
    for (DmpParams& prim : out) {
        for (std::size_t j = 0; j < kJointCount; ++j) {
            JointDmp& jd = prim.joints[j];
            jd.weight = std::clamp(jd.weight + sigma * w_range * noise(rng), -arm.weight_bound,
                                   arm.weight_bound);
            const double g_range = arm.upper[j] - arm.lower[j];
            jd.goal = std::clamp(jd.goal + sigma * g_range * noise(rng), arm.lower[j], arm.upper[j]);
        }
    }
    return out;
}

ActionSequence explore_action(const Outcome& goal, const EpisodicMemory& memory, const World& world,
                              const ExplorationParams& p, Rng& rng) {
    const auto best = memory.nearest_actions(goal, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!best.empty()) {
        const double d_nn = best.front().distance;
        if (unit(rng) < local_probability(d_nn, p)) {
            const double sigma = std::min(p.sigma_cap, p.action_sigma_gain * d_nn);
            return perturb_action(memory.prefix(best.front()), world.arm, sigma, rng);
        }
    }
    return random_action(world.arm, world.max_sequence_length, p.length_decay, rng);
}

namespace {

Outcome uniform_outcome(const OutcomeSpaces& spaces, Subspace s, Rng& rng) {
    Coords u{};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < dimension(s); ++d) u[d] = unit(rng);
    return spaces.denormalize(s, u);
}

Outcome perturb_outcome(const Outcome& o, const OutcomeSpaces& spaces, double sigma, Rng& rng) {
    if (sigma <= 0.0) return o;
    Coords u = spaces.normalize(o);
    std::normal_distribution<double> noise(0.0, sigma);
    for (std::size_t d = 0; d < o.dim(); ++d) u[d] = std::clamp(u[d] + noise(rng), 0.0, 1.0);
    return spaces.denormalize(o.space, u);
}

}  // namespace

Procedure random_procedure(const OutcomeSpaces& spaces, Rng& rng) {
    const auto enabled = spaces.enabled_list();
    if (enabled.empty()) throw std::invalid_argument("no enabled outcome subspace");
    std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
    const Subspace a = enabled[pick(rng)];
    const Subspace b = enabled[pick(rng)];
    Procedure out;
    out.first = uniform_outcome(spaces, a, rng);
    out.second = uniform_outcome(spaces, b, rng);
    return out;
}

Procedure perturb_procedure(const Procedure& source, const OutcomeSpaces& spaces, double sigma,
                            Rng& rng) {
    return {perturb_outcome(source.first, spaces, sigma, rng),
            perturb_outcome(source.second, spaces, sigma, rng)};
}

Procedure explore_procedure(const Outcome& goal, const EpisodicMemory& memory,
                            const ExplorationParams& p, Rng& rng) {
    const auto best = memory.nearest_procedures(goal, 1, true);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (!best.empty()) {
        const double d_nn = best.front().distance;
        if (unit(rng) < local_probability(d_nn, p)) {
            return perturb_procedure(best.front().procedure, memory.spaces(),
                                     std::min(p.sigma_cap, d_nn), rng);
        }
    }
    return random_procedure(memory.spaces(), rng);
}

bool Teacher::expert_in(Subspace s) const {
    return std::find(expertise.begin(), expertise.end(), s) != expertise.end();
}

std::vector<Outcome> Teacher::demo_outcomes() const {
    std::vector<Outcome> out;
    for (const ActionDemo& d : actions) {
        for (const ReachedOutcome& r : d.reached) out.push_back(r.outcome);
    }
    for (const ProcedureDemo& d : procedures) out.push_back(d.reached);
    return out;
}

std::pair<std::size_t, double> nearest_action_demo(const Teacher& t, const Outcome& goal,
                                                   const OutcomeSpaces& spaces) {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
        for (const ReachedOutcome& r : t.actions[i].reached) {
            if (r.outcome.space != goal.space) continue;
            const double d = spaces.distance(r.outcome, goal);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
    }
    if (!best) {
        throw TeacherError("teacher " + t.name + " has no demo reaching " + subspace_name(goal.space));
    }
    return {*best, best_d};
}

std::size_t pick_action_demo(const Teacher& t, const Outcome& goal, const OutcomeSpaces& spaces,
                             Rng& rng) {
    if (t.actions.empty()) throw TeacherError("teacher " + t.name + " has no action demos");
    if (t.expert_in(goal.space)) return nearest_action_demo(t, goal, spaces).first;
    return std::uniform_int_distribution<std::size_t>(0, t.actions.size() - 1)(rng);
}

ActionSequence mimic_action(const Outcome& goal, const Teacher& teacher, const World& world,
                            bool replay, double sigma, Rng& rng) {
    if (teacher.kind != TeacherKind::action || teacher.actions.empty()) {
        throw TeacherError("teacher " + teacher.name + " has no action demos");
    }
    const ActionSequence& src = teacher.actions[pick_action_demo(teacher, goal, world.spaces, rng)].action;
    if (replay) return src;
    return perturb_action(src, world.arm, sigma, rng);
}

std::pair<Vec2, Vec2> invert_burst(const TableConfig& table, double f, double l, double b) {
    const double diag = table.diagonal();
    const double r_min = 2.0 * table.object_radius;
    const double d_min = diag / 4.0 * (1.0 - f);
    const double log_r = std::log(r_min) + (1.0 - l) / 2.0 * (std::log(diag) - std::log(r_min));
    const double r = std::exp(log_r);
    const double phi = std::clamp((b - 0.05) / 0.95, 0.0, 1.0) * std::numbers::pi;
    const Vec2 centre = table.origin + Vec2{table.width / 2.0, table.height / 2.0};
    const auto corners = table.corners();

    const auto nearest_corner_is = [&](Vec2 p, Vec2 c) {
        for (Vec2 other : corners) {
            if (norm(p - other) < norm(p - c) - 1e-12) return false;
        }
        return true;
    };

    // Blue lies at distance d_min from some corner. The diagonal towards the
    // centre is tried first, then directions fanning out from it.
    constexpr int kFan = 90;
    std::optional<std::pair<Vec2, Vec2>> first;
    for (int step = 0; step <= kFan; ++step) {
        for (int side : {1, -1}) {
            if (step == 0 && side == -1) continue;
            const double offset = side * step * (std::numbers::pi / 4.0) / kFan;
            for (Vec2 corner : corners) {
                const Vec2 towards = centre - corner;
                const double heading = std::atan2(towards.y, towards.x) + offset;
                const Vec2 blue = corner + Vec2{d_min * std::cos(heading), d_min * std::sin(heading)};
                for (double sign : {1.0, -1.0}) {
                    const double angle = sign * phi;
                    const Vec2 green = blue + Vec2{r * std::cos(angle), r * std::sin(angle)};
                    if (!first) first = {blue, green};
                    if (table.contains(blue) && table.contains(green) && nearest_corner_is(blue, corner)) {
                        return {blue, green};
                    }
                }
            }
        }
    }
    return {table.clamp(first->first), table.clamp(first->second)};
}

Vec2 pick_point(const TableConfig& table, Vec2 centre, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double radius = table.object_radius * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    return table.clamp(centre + Vec2{radius * std::cos(angle), radius * std::sin(angle)});
}

Procedure teacher_rule(Subspace goal_space, const Outcome& goal, const TableConfig& table, Rng& rng) {
    if (goal.space != goal_space) {
        throw TeacherError("teacher for " + subspace_name(goal_space) + " asked about a " +
                           subspace_name(goal.space) + " goal");
    }
    const auto touch = [](Vec2 p) { return Outcome::make(Subspace::touch, {p.x, p.y}); };
    const auto& c = goal.coords;
    switch (goal_space) {
        case Subspace::blue: return {touch(pick_point(table, table.blue_start, rng)), touch({c[0], c[1]})};
        case Subspace::green: return {touch(pick_point(table, table.green_start, rng)), touch({c[0], c[1]})};
        case Subspace::both:
            return {Outcome::make(Subspace::blue, {c[0], c[1]}),
                    Outcome::make(Subspace::green, {c[2], c[3]})};
        case Subspace::burst: {
            const auto [blue, green] = invert_burst(table, c[0], c[1], c[2]);
            return {Outcome::make(Subspace::blue, {blue.x, blue.y}),
                    Outcome::make(Subspace::green, {green.x, green.y})};
        }
        default: break;
    }
    throw TeacherError("no construction rule for " + subspace_name(goal_space));
}

ProcedureDemand mimic_procedure(const Outcome& goal, const Teacher& teacher, const World& world,
                                const ExplorationParams& p, Rng& rng) {
    if (teacher.expertise.empty()) throw TeacherError("teacher " + teacher.name + " has no expertise");
    ProcedureDemand out;
    const bool expert = teacher.expert_in(goal.space);
    if (teacher.kind == TeacherKind::procedure_rule) {
        // The rule answers the exact goal, so the demonstrated locality has zero width.
        const Subspace own = teacher.expertise.front();
        out.demonstrated = teacher_rule(own, expert ? goal : uniform_outcome(world.spaces, own, rng),
                                        world.table, rng);
        out.attempted = out.demonstrated;
        return out;
    }
    if (teacher.kind != TeacherKind::procedure_repertoire || teacher.procedures.empty()) {
        throw TeacherError("teacher " + teacher.name + " gives no procedures");
    }
    if (!expert) {
        const std::size_t i =
            std::uniform_int_distribution<std::size_t>(0, teacher.procedures.size() - 1)(rng);
        out.demonstrated = teacher.procedures[i].procedure;
        out.attempted = out.demonstrated;
        return out;
    }
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < teacher.procedures.size(); ++i) {
        const ProcedureDemo& d = teacher.procedures[i];
        if (d.reached.space != goal.space) continue;
        const double dist = world.spaces.distance(d.reached, goal);
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
    if (!best) {
        throw TeacherError("teacher " + teacher.name + " has no procedure for " +
                           subspace_name(goal.space));
    }
    out.demonstrated = teacher.procedures[*best].procedure;
    out.attempted = perturb_procedure(out.demonstrated, world.spaces, std::min(p.sigma_cap, best_d), rng);
    return out;
}

}  // namespace sgim
