/**
 * @file memory.hpp
 * @brief Episodic memory and the recursive inverse model.
 *
 * Every executed action is stored together with all outcomes it reached at
 * each primitive boundary, so each (prefix, outcome) pair is retrievable on
 * its own. Episodes driven by a procedure additionally yield procedure
 * records for the outcomes observed once the whole sequence has run.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgim/motion.hpp"
#include "sgim/outcome.hpp"
#include "sgim/outcome_index.hpp"

namespace sgim {

struct EpisodeRecord {
    Outcome goal;
    std::string strategy;
    ActionSequence action;
    std::optional<Procedure> procedure;
    std::vector<ReachedOutcome> reached;
};

struct ProcedureRecord {
    Procedure procedure;
    Outcome reached;
    std::optional<std::size_t> length;  // unknown for some transferred records
    bool transferred = false;
};

struct MemoryParams {
    double gamma = 1.2;
    std::size_t k = 5;
    std::size_t max_sequence_length = 8;
    std::size_t unknown_length = 4;  // penalty length for transferred records without n
    std::size_t depth = 3;
    std::size_t tree_threshold = 10000;
};

struct ActionMatch {
    std::size_t episode = 0;
    std::size_t length = 0;  // prefix length that produced `reached`
    Outcome reached;
    double distance = 0.0;
    double perf = 0.0;
};

struct ProcedureMatch {
    std::size_t record = 0;
    Procedure procedure;
    Outcome reached;
    std::size_t length = 0;
    double distance = 0.0;
    double perf = 0.0;
    bool transferred = false;
};

struct Resolution {
    ActionSequence action;
    std::optional<ProceduralSpace> top_space;  // empty when a stored action was used directly
    double perf = 0.0;
};

/// Nothing in memory can produce an action for the requested goal.
class ColdStart : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EpisodicMemory {
public:
    EpisodicMemory(OutcomeSpaces spaces, MemoryParams params);

    /// Stores an episode and returns its id. Records are never deduplicated.
    std::size_t store(EpisodeRecord rec);
    std::size_t add_procedure(ProcedureRecord rec);

    std::size_t episode_count() const { return episodes_.size(); }
    const EpisodeRecord& episode(std::size_t id) const { return episodes_.at(id); }
    std::size_t action_entry_count() const;
    std::size_t action_entry_count(Subspace s) const { return action_entries_[index(s)].size(); }
    std::size_t procedure_count() const { return procedures_.size(); }
    const std::vector<ProcedureRecord>& procedure_records() const { return procedures_; }

    const OutcomeSpaces& spaces() const { return spaces_; }
    const MemoryParams& params() const { return params_; }

    ActionSequence prefix(const ActionMatch& m) const;

    /// Ascending by perf(reached, goal, n); ties broken by insertion order.
    std::vector<ActionMatch> nearest_actions(const Outcome& goal, std::size_t k) const;
    std::vector<ProcedureMatch> nearest_procedures(const Outcome& goal, std::size_t k,
                                                   bool include_transferred = true) const;
    /// Brute-force reference for both retrievals.
    std::vector<ActionMatch> nearest_actions_linear(const Outcome& goal, std::size_t k) const;
    std::vector<ProcedureMatch> nearest_procedures_linear(const Outcome& goal, std::size_t k,
                                                          bool include_transferred = true) const;

    /// Plain distance to the closest reached outcome in the goal's subspace.
    /// Transferred procedure records never contribute.
    std::optional<double> nearest_distance(const Outcome& goal,
                                           std::optional<std::size_t> exclude_episode = {}) const;

    /// Recursive inverse model. Throws ColdStart when nothing applies.
    Resolution resolve(const Outcome& goal, std::size_t depth) const;
    Resolution resolve(const Outcome& goal) const { return resolve(goal, params_.depth); }

private:
    struct ActionEntry {
        std::size_t episode;
        std::size_t length;
        Outcome outcome;
    };

    std::vector<ActionMatch> to_action_matches(Subspace s, const std::vector<Neighbour>& ns) const;
    std::vector<ProcedureMatch> to_procedure_matches(Subspace s,
                                                     const std::vector<Neighbour>& ns) const;
    std::size_t penalty_length(const ProcedureRecord& r) const;

    OutcomeSpaces spaces_;
    MemoryParams params_;
    std::vector<EpisodeRecord> episodes_;
    std::array<std::vector<ActionEntry>, kSubspaceCount> action_entries_;
    std::vector<OutcomeIndex> action_index_;
    std::vector<ProcedureRecord> procedures_;
    std::array<std::vector<std::size_t>, kSubspaceCount> procedure_ids_;
    std::vector<OutcomeIndex> procedure_index_;
};

}  // namespace sgim
