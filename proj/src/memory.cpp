#include "sgim/memory.hpp"

#include <numeric>

namespace sgim {

EpisodicMemory::EpisodicMemory(OutcomeSpaces spaces, MemoryParams params)
    : spaces_(std::move(spaces)), params_(params) {
    for (std::size_t i = 0; i < kSubspaceCount; ++i) {
        action_index_.emplace_back(dimension(subspace_at(i)), params_.tree_threshold);
        procedure_index_.emplace_back(dimension(subspace_at(i)), params_.tree_threshold);
    }
}

std::size_t EpisodicMemory::store(EpisodeRecord rec) {
    const std::size_t id = episodes_.size();
    for (const ReachedOutcome& r : rec.reached) {
        if (r.length == 0 || r.length > rec.action.size()) {
            throw std::invalid_argument("reached outcome refers to primitive " +
                                        std::to_string(r.length) + " of a length-" +
                                        std::to_string(rec.action.size()) + " action");
        }
    }
    for (const ReachedOutcome& r : rec.reached) {
        const std::size_t s = index(r.outcome.space);
        action_entries_[s].push_back({id, r.length, r.outcome});
        action_index_[s].insert(spaces_.normalize(r.outcome), r.length);
    }
    if (rec.procedure) {
        for (const ReachedOutcome& r : rec.reached) {
            if (r.length != rec.action.size()) continue;
            add_procedure({*rec.procedure, r.outcome, rec.action.size(), false});
        }
    }
    episodes_.push_back(std::move(rec));
    return id;
}

std::size_t EpisodicMemory::add_procedure(ProcedureRecord rec) {
    const std::size_t id = procedures_.size();
    const std::size_t s = index(rec.reached.space);
    procedure_ids_[s].push_back(id);
    procedure_index_[s].insert(spaces_.normalize(rec.reached), penalty_length(rec));
    procedures_.push_back(std::move(rec));
    return id;
}

std::size_t EpisodicMemory::penalty_length(const ProcedureRecord& r) const {
    return r.length.value_or(params_.unknown_length);
}

std::size_t EpisodicMemory::action_entry_count() const {
    std::size_t n = 0;
    for (const auto& v : action_entries_) n += v.size();
    return n;
}

ActionSequence EpisodicMemory::prefix(const ActionMatch& m) const {
    const ActionSequence& full = episodes_.at(m.episode).action;
    return ActionSequence(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(m.length));
}

std::vector<ActionMatch> EpisodicMemory::to_action_matches(Subspace s,
                                                           const std::vector<Neighbour>& ns) const {
    std::vector<ActionMatch> out;
    out.reserve(ns.size());
    for (const Neighbour& n : ns) {
        const ActionEntry& e = action_entries_[index(s)][n.id];
        out.push_back({e.episode, e.length, e.outcome, n.distance, n.perf});
    }
    return out;
}

std::vector<ProcedureMatch> EpisodicMemory::to_procedure_matches(
    Subspace s, const std::vector<Neighbour>& ns) const {
    std::vector<ProcedureMatch> out;
    out.reserve(ns.size());
    for (const Neighbour& n : ns) {
        const std::size_t rid = procedure_ids_[index(s)][n.id];
        const ProcedureRecord& r = procedures_[rid];
        out.push_back({rid, r.procedure, r.reached, penalty_length(r), n.distance, n.perf,
                       r.transferred});
    }
    return out;
}

std::vector<ActionMatch> EpisodicMemory::nearest_actions(const Outcome& goal, std::size_t k) const {
    const auto& idx = action_index_[index(goal.space)];
    return to_action_matches(goal.space, idx.nearest(spaces_.normalize(goal), k, params_.gamma));
}

std::vector<ActionMatch> EpisodicMemory::nearest_actions_linear(const Outcome& goal,
                                                                std::size_t k) const {
    const auto& idx = action_index_[index(goal.space)];
    return to_action_matches(goal.space,
                             idx.nearest_linear(spaces_.normalize(goal), k, params_.gamma));
}

namespace {

OutcomeIndex::Filter own_only(const std::vector<std::size_t>& ids,
                              const std::vector<ProcedureRecord>& recs) {
    return [&ids, &recs](std::size_t local) { return !recs[ids[local]].transferred; };
}

}  // namespace

std::vector<ProcedureMatch> EpisodicMemory::nearest_procedures(const Outcome& goal, std::size_t k,
                                                               bool include_transferred) const {
    const std::size_t s = index(goal.space);
    const auto filter = include_transferred ? OutcomeIndex::Filter{}
                                            : own_only(procedure_ids_[s], procedures_);
    return to_procedure_matches(
        goal.space, procedure_index_[s].nearest(spaces_.normalize(goal), k, params_.gamma, filter));
}

std::vector<ProcedureMatch> EpisodicMemory::nearest_procedures_linear(
    const Outcome& goal, std::size_t k, bool include_transferred) const {
    const std::size_t s = index(goal.space);
    const auto filter = include_transferred ? OutcomeIndex::Filter{}
                                            : own_only(procedure_ids_[s], procedures_);
    return to_procedure_matches(goal.space, procedure_index_[s].nearest_linear(
                                                spaces_.normalize(goal), k, params_.gamma, filter));
}

std::optional<double> EpisodicMemory::nearest_distance(
    const Outcome& goal, std::optional<std::size_t> exclude_episode) const {
    const std::size_t s = index(goal.space);
    OutcomeIndex::Filter filter;
    if (exclude_episode) {
        const auto& entries = action_entries_[s];
        const std::size_t ex = *exclude_episode;
        filter = [&entries, ex](std::size_t id) { return entries[id].episode != ex; };
    }
    const auto ns = action_index_[s].nearest(spaces_.normalize(goal), 1, 1.0, filter);
    if (ns.empty()) return std::nullopt;
    return ns.front().distance;
}

Resolution EpisodicMemory::resolve(const Outcome& goal, std::size_t depth) const {
    std::optional<Resolution> direct;
    if (const auto acts = nearest_actions(goal, 1); !acts.empty()) {
        direct = Resolution{prefix(acts.front()), std::nullopt, acts.front().perf};
    }
    if (depth > 0) {
        for (const ProcedureMatch& pm : nearest_procedures(goal, params_.k, false)) {
            // Sub-goals in the goal's own subspace cannot get strictly closer
            // than the goal itself; recursing on them only regresses.
            if (pm.procedure.first.space == goal.space || pm.procedure.second.space == goal.space) {
                continue;
            }
            if (direct && pm.perf > direct->perf) break;
            Resolution first, second;
            try {
                first = resolve(pm.procedure.first, depth - 1);
                second = resolve(pm.procedure.second, depth - 1);
            } catch (const ColdStart&) {
                continue;
            }
            if (first.action.size() + second.action.size() > params_.max_sequence_length) continue;
            first.action.insert(first.action.end(), second.action.begin(), second.action.end());
            return {std::move(first.action), pm.procedure.space(), pm.perf};
        }
    }
    if (direct) return std::move(*direct);
    throw ColdStart("no action or procedure in memory for a " + subspace_name(goal.space) + " goal");
}

}  // namespace sgim
