/**
 * @file io.hpp
 * @brief Line-delimited JSON dumps (memory, teachers, transfer lumps, run
 * logs) and the CSV tables consumed by the plotting scripts.
 *
 * Every dump line is an object with a "type" field: "episode" for an
 * executed action with its reached outcomes, "procedure" for a stored
 * (procedure, reached outcome, length) record, "teacher" to open a teacher
 * section.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgim/evaluation.hpp"
#include "sgim/interest.hpp"
#include "sgim/learner.hpp"
#include "sgim/memory.hpp"
#include "sgim/strategies.hpp"

namespace sgim {

using json = nlohmann::json;

/// Malformed input; the message names the file line when there is one.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0), detail_(what) {}
    std::size_t line() const { return line_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

json to_json(const Outcome& o);
Outcome outcome_from_json(const json& j);
json to_json(const ActionSequence& a);
ActionSequence action_from_json(const json& j);
json to_json(const Procedure& p);
Procedure procedure_from_json(const json& j);
json to_json(const ReachedOutcome& r);
ReachedOutcome reached_from_json(const json& j);

json episode_line(const EpisodeRecord& e);
EpisodeRecord episode_from_line(const json& j);
json procedure_line(const ProcedureRecord& r);
ProcedureRecord procedure_from_line(const json& j);

/// Episodes, then procedure records that did not come from stored episodes.
void dump_memory(const EpisodicMemory& memory, std::ostream& out);
void load_memory(EpisodicMemory& memory, std::istream& in);

void write_teachers(const std::vector<Teacher>& teachers, std::ostream& out);
std::vector<Teacher> read_teachers(std::istream& in);

/// Procedure records for a transfer lump. Procedure lines are taken as they
/// are; episode lines that carry a procedure yield one record per outcome
/// reached by the complete sequence. Every record is flagged transferred.
std::vector<ProcedureRecord> parse_transfer_lump(std::istream& in);
std::vector<ProcedureRecord> load_transfer_lump(const std::filesystem::path& path);
/// Own procedure records of a memory, lengths dropped unless `keep_length`.
void write_transfer_lump(const EpisodicMemory& memory, std::ostream& out, bool keep_length);

json episode_log_line(const EpisodeLog& e);
EpisodeLog episode_log_from_line(const json& j);

void write_testbench_csv(std::span<const Outcome> testbench, std::ostream& out);
void write_snapshots_csv(std::span<const EvaluationSnapshot> snaps, std::ostream& out);
void write_procedure_usage_csv(const std::array<std::map<std::string, std::size_t>, kSubspaceCount>& t,
                               std::ostream& out);
void write_action_length_csv(const std::array<std::map<std::size_t, std::size_t>, kSubspaceCount>& t,
                             std::ostream& out);
void write_strategy_task_csv(std::span<const EpisodeLog> log, const std::vector<StrategyConfig>& strategies,
                             std::size_t window, std::ostream& out);
void write_regions_csv(const InterestMap& map, const std::vector<StrategyConfig>& strategies,
                       std::size_t iteration, std::ostream& out);

}  // namespace sgim
