#include "sgim/learner.hpp"

#include <algorithm>
#include <limits>

namespace sgim {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::random_action: return "RandomAction";
        case Variant::im_pb: return "IM-PB";
        case Variant::sgim_acts: return "SGIM-ACTS";
        case Variant::sgim_pb: return "SGIM-PB";
        case Variant::sgim_tl: return "SGIM-TL";
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    for (Variant v : {Variant::random_action, Variant::im_pb, Variant::sgim_acts, Variant::sgim_pb,
                      Variant::sgim_tl}) {
        if (name == variant_name(v)) return v;
    }
    throw std::invalid_argument("unknown variant '" + name +
                                "' (expected RandomAction, IM-PB, SGIM-ACTS, SGIM-PB or SGIM-TL)");
}

std::vector<StrategyConfig> strategies_for(Variant v, const std::vector<Teacher>& teachers,
                                           const StrategyCosts& costs) {
    std::vector<StrategyConfig> out;
    if (v == Variant::random_action) {
        out.push_back({"random-action", StrategyKind::random_action, costs.autonomous, std::nullopt});
        return out;
    }
    out.push_back({"auton-action", StrategyKind::auton_action, costs.autonomous, std::nullopt});
    if (v != Variant::sgim_acts) {
        out.push_back({"auton-procedure", StrategyKind::auton_procedure, costs.autonomous, std::nullopt});
    }
    for (std::size_t i = 0; i < teachers.size(); ++i) {
        const Teacher& t = teachers[i];
        const bool action = t.kind == TeacherKind::action;
        switch (v) {
            case Variant::sgim_acts:
                if (action) out.push_back({t.name, StrategyKind::mimic_action, costs.action_teacher, i});
                break;
            case Variant::sgim_pb:
            case Variant::sgim_tl:
                if (action && t.name == "AT0") {
                    out.push_back({t.name, StrategyKind::mimic_action, costs.action_teacher, i});
                } else if (!action) {
                    out.push_back({t.name, StrategyKind::mimic_procedure, costs.procedural_teacher, i});
                }
                break;
            default: break;
        }
    }
    for (const StrategyConfig& s : out) s.validate();
    return out;
}

Learner::Learner(World world, Variant variant, std::vector<Teacher> teachers, LearnerParams params,
                 std::uint64_t seed, std::vector<ProcedureRecord> lump)
    : world_(std::move(world)),
      variant_(variant),
      teachers_(std::move(teachers)),
      params_(params),
      strategies_(strategies_for(variant, teachers_, params.costs)),
      memory_(world_.spaces, params.memory),
      map_(world_.spaces.enabled_list(), strategies_.size(), params.interest),
      ledger_(params.interest.ledger_tolerance),
      rng_(seed) {
    world_.validate();
    if (params_.memory.max_sequence_length != world_.max_sequence_length) {
        throw std::invalid_argument("memory and world disagree on the maximum sequence length");
    }
    if (!lump.empty() && variant != Variant::sgim_tl) {
        throw std::invalid_argument(std::string("transfer lumps are only used by SGIM-TL, not ") +
                                    variant_name(variant));
    }
    for (ProcedureRecord& r : lump) {
        r.transferred = true;
        if (!world_.spaces.enabled(r.reached.space)) continue;
        memory_.add_procedure(std::move(r));
    }
}

bool Learner::applicable(Subspace s, std::size_t strategy) const {
    return world_.spaces.enabled(s) && strategy < strategies_.size();
}

std::optional<ActionSequence> Learner::realize(const Procedure& proc) const {
    const std::size_t depth = params_.memory.depth > 0 ? params_.memory.depth - 1 : 0;
    try {
        ActionSequence first = memory_.resolve(proc.first, depth).action;
        const ActionSequence second = memory_.resolve(proc.second, depth).action;
        first.insert(first.end(), second.begin(), second.end());
        if (first.size() > world_.max_sequence_length) return std::nullopt;
        return first;
    } catch (const ColdStart&) {
        return std::nullopt;
    }
}

Learner::Plan Learner::plan(const Selection& sel) {
    const StrategyConfig& st = strategies_[sel.strategy];
    const ExplorationParams& ex = params_.explore;
    Plan out;
    switch (st.kind) {
        case StrategyKind::random_action:
            out.action = random_action(world_.arm, world_.max_sequence_length, ex.length_decay, rng_);
            return out;
        case StrategyKind::auton_action:
            out.action = explore_action(sel.goal, memory_, world_, ex, rng_);
            return out;
        case StrategyKind::mimic_action: {
            const Subspace s = sel.goal.space;
            const std::size_t region = map_.regions(s)[map_.region_index(s, world_.spaces.normalize(sel.goal))].id;
            const bool first = consulted_.insert({*st.teacher, region}).second;
            out.action = mimic_action(sel.goal, teachers_[*st.teacher], world_, first, ex.demo_sigma, rng_);
            return out;
        }
        case StrategyKind::auton_procedure:
        case StrategyKind::mimic_procedure: {
            const Procedure proc =
                st.kind == StrategyKind::auton_procedure
                    ? explore_procedure(sel.goal, memory_, ex, rng_)
                    : mimic_procedure(sel.goal, teachers_[*st.teacher], world_, ex, rng_).attempted;
            if (auto action = realize(proc)) {
                out.action = std::move(*action);
                out.procedure = proc;
                return out;
            }
            out.action = random_action(world_.arm, world_.max_sequence_length, ex.length_decay, rng_);
            out.degraded = true;
            return out;
        }
    }
    throw std::logic_error("unhandled strategy kind");
}

EpisodeLog Learner::run_episode() {
    const Selection sel = select_goal_and_strategy(
        map_, world_.spaces, [this](Subspace s, std::size_t k) { return applicable(s, k); }, rng_,
        iteration_ == 0);
    Plan p = plan(sel);
    const Rollout ro = rollout(world_, p.action);

    EpisodeLog log;
    log.iteration = iteration_;
    log.goal = sel.goal;
    log.strategy = sel.strategy;
    log.strategy_name = strategies_[sel.strategy].name;
    if (p.procedure) log.procedure_space = p.procedure->space();
    log.length = p.action.size();
    log.reached = ro.reached;
    log.blocked = ro.blocked;
    log.degraded = p.degraded;
    log.uniform = sel.uniform;

    const std::size_t id = memory_.store({sel.goal, log.strategy_name, std::move(p.action),
                                          std::move(p.procedure), ro.reached});
    const auto samples =
        update_interest(map_, ledger_, memory_, id, sel.strategy, strategies_[sel.strategy].cost);
    log.min_progress = std::numeric_limits<double>::infinity();
    for (const InterestSample& s : samples) {
        if (s.is_goal) log.goal_progress = s.progress;
        log.min_progress = std::min(log.min_progress, s.progress);
    }
    if (samples.empty()) log.min_progress = 0.0;
    ++iteration_;
    return log;
}

}  // namespace sgim
