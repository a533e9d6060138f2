#include "sgim/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace sgim {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

json to_json(const Outcome& o) {
    return {{"space", subspace_name(o.space)}, {"coords", std::vector<double>(o.values().begin(), o.values().end())}};
}

Outcome outcome_from_json(const json& j) {
    Outcome o;
    o.space = parse_subspace(j.at("space").get<std::string>());
    const auto c = j.at("coords").get<std::vector<double>>();
    if (c.size() != o.dim()) {
        throw std::invalid_argument(subspace_name(o.space) + " outcome needs " + std::to_string(o.dim()) +
                                    " coordinates, got " + std::to_string(c.size()));
    }
    std::copy(c.begin(), c.end(), o.coords.begin());
    return o;
}

json to_json(const ActionSequence& a) {
    json out = json::array();
    for (const DmpParams& p : a) {
        const auto flat = p.flatten();
        out.push_back(std::vector<double>(flat.begin(), flat.end()));
    }
    return out;
}

ActionSequence action_from_json(const json& j) {
    ActionSequence out;
    for (const json& p : j) out.push_back(DmpParams::from_flat(p.get<std::vector<double>>()));
    if (out.empty()) throw std::invalid_argument("action must contain at least one primitive");
    return out;
}

json to_json(const Procedure& p) { return json::array({to_json(p.first), to_json(p.second)}); }

Procedure procedure_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("procedure must be a pair of outcomes");
    return {outcome_from_json(j[0]), outcome_from_json(j[1])};
}

json to_json(const ReachedOutcome& r) {
    json j = to_json(r.outcome);
    j["length"] = r.length;
    return j;
}

ReachedOutcome reached_from_json(const json& j) {
    return {outcome_from_json(j), j.at("length").get<std::size_t>()};
}

json episode_line(const EpisodeRecord& e) {
    json j{{"type", "episode"}, {"goal", to_json(e.goal)}, {"strategy", e.strategy},
           {"action", to_json(e.action)}};
    j["procedure"] = e.procedure ? to_json(*e.procedure) : json(nullptr);
    j["reached"] = json::array();
    for (const ReachedOutcome& r : e.reached) j["reached"].push_back(to_json(r));
    return j;
}

EpisodeRecord episode_from_line(const json& j) {
    EpisodeRecord e;
    e.goal = outcome_from_json(j.at("goal"));
    e.strategy = j.value("strategy", std::string{});
    e.action = action_from_json(j.at("action"));
    if (j.contains("procedure") && !j["procedure"].is_null()) e.procedure = procedure_from_json(j["procedure"]);
    for (const json& r : j.at("reached")) e.reached.push_back(reached_from_json(r));
    return e;
}

json procedure_line(const ProcedureRecord& r) {
    json j{{"type", "procedure"}, {"procedure", to_json(r.procedure)}, {"reached", to_json(r.reached)},
           {"transferred", r.transferred}};
    j["length"] = r.length ? json(*r.length) : json(nullptr);
    return j;
}

ProcedureRecord procedure_from_line(const json& j) {
    ProcedureRecord r;
    r.procedure = procedure_from_json(j.at("procedure"));
    r.reached = outcome_from_json(j.at("reached"));
    if (j.contains("length") && !j["length"].is_null()) r.length = j["length"].get<std::size_t>();
    r.transferred = j.value("transferred", false);
    return r;
}

namespace {

template <class F>
void for_each_line(std::istream& in, F&& visit) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(text);
            if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
            visit(j, line);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line, e.what());
        }
    }
}

std::string line_type(const json& j) { return j.at("type").get<std::string>(); }

}  // namespace

void dump_memory(const EpisodicMemory& memory, std::ostream& out) {
    for (std::size_t i = 0; i < memory.episode_count(); ++i) out << episode_line(memory.episode(i)).dump() << '\n';
    for (const ProcedureRecord& r : memory.procedure_records()) {
        if (r.transferred) out << procedure_line(r).dump() << '\n';
    }
}

void load_memory(EpisodicMemory& memory, std::istream& in) {
    for_each_line(in, [&](const json& j, std::size_t) {
        const std::string type = line_type(j);
        if (type == "episode") {
            memory.store(episode_from_line(j));
        } else if (type == "procedure") {
            memory.add_procedure(procedure_from_line(j));
        } else {
            throw std::invalid_argument("unexpected line type '" + type + "' in a memory dump");
        }
    });
}

namespace {

const char* teacher_kind_name(TeacherKind k) {
    switch (k) {
        case TeacherKind::action: return "action";
        case TeacherKind::procedure_rule: return "procedure-rule";
        case TeacherKind::procedure_repertoire: return "procedure-repertoire";
    }
    return "?";
}

TeacherKind parse_teacher_kind(const std::string& s) {
    if (s == "action") return TeacherKind::action;
    if (s == "procedure-rule") return TeacherKind::procedure_rule;
    if (s == "procedure-repertoire") return TeacherKind::procedure_repertoire;
    throw std::invalid_argument("unknown teacher kind '" + s + "'");
}

}  // namespace

void write_teachers(const std::vector<Teacher>& teachers, std::ostream& out) {
    for (const Teacher& t : teachers) {
        json head{{"type", "teacher"}, {"name", t.name}, {"kind", teacher_kind_name(t.kind)}};
        head["expertise"] = json::array();
        for (Subspace s : t.expertise) head["expertise"].push_back(subspace_name(s));
        out << head.dump() << '\n';
        for (const ActionDemo& d : t.actions) {
            EpisodeRecord e;
            e.goal = d.reached.empty() ? Outcome{} : d.reached.back().outcome;
            e.strategy = t.name;
            e.action = d.action;
            e.reached = d.reached;
            out << episode_line(e).dump() << '\n';
        }
        for (const ProcedureDemo& d : t.procedures) {
            out << procedure_line({d.procedure, d.reached, std::nullopt, false}).dump() << '\n';
        }
    }
}

std::vector<Teacher> read_teachers(std::istream& in) {
    std::vector<Teacher> out;
    for_each_line(in, [&](const json& j, std::size_t) {
        const std::string type = line_type(j);
        if (type == "teacher") {
            Teacher t;
            t.name = j.at("name").get<std::string>();
            t.kind = parse_teacher_kind(j.at("kind").get<std::string>());
            for (const json& s : j.at("expertise")) t.expertise.push_back(parse_subspace(s.get<std::string>()));
            out.push_back(std::move(t));
            return;
        }
        if (out.empty()) throw std::invalid_argument("demo line before any teacher line");
        if (type == "episode") {
            EpisodeRecord e = episode_from_line(j);
            out.back().actions.push_back({std::move(e.action), std::move(e.reached)});
        } else if (type == "procedure") {
            ProcedureRecord r = procedure_from_line(j);
            out.back().procedures.push_back({r.procedure, r.reached});
        } else {
            throw std::invalid_argument("unexpected line type '" + type + "' in a teacher file");
        }
    });
    return out;
}

std::vector<ProcedureRecord> parse_transfer_lump(std::istream& in) {
    std::vector<ProcedureRecord> out;
    for_each_line(in, [&](const json& j, std::size_t) {
        const std::string type = line_type(j);
        if (type == "procedure") {
            ProcedureRecord r = procedure_from_line(j);
            r.transferred = true;
            out.push_back(std::move(r));
        } else if (type == "episode") {
            const EpisodeRecord e = episode_from_line(j);
            if (!e.procedure) return;
            for (const ReachedOutcome& r : e.reached) {
                if (r.length == e.action.size()) out.push_back({*e.procedure, r.outcome, e.action.size(), true});
            }
        } else {
            throw std::invalid_argument("unexpected line type '" + type + "' in a transfer lump");
        }
    });
    return out;
}

std::vector<ProcedureRecord> load_transfer_lump(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open transfer lump " + path.string());
    try {
        return parse_transfer_lump(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.detail());
    }
}

void write_transfer_lump(const EpisodicMemory& memory, std::ostream& out, bool keep_length) {
    for (ProcedureRecord r : memory.procedure_records()) {
        if (r.transferred) continue;
        if (!keep_length) r.length.reset();
        r.transferred = false;
        out << procedure_line(r).dump() << '\n';
    }
}

json episode_log_line(const EpisodeLog& e) {
    json j{{"iteration", e.iteration},       {"goal", to_json(e.goal)},   {"strategy", e.strategy},
           {"strategy_name", e.strategy_name}, {"length", e.length},      {"blocked", e.blocked},
           {"degraded", e.degraded},         {"uniform", e.uniform},      {"goal_progress", e.goal_progress},
           {"min_progress", e.min_progress}};
    j["procedure_space"] = e.procedure_space ? json(e.procedure_space->name()) : json(nullptr);
    j["reached"] = json::array();
    for (const ReachedOutcome& r : e.reached) j["reached"].push_back(to_json(r));
    return j;
}

EpisodeLog episode_log_from_line(const json& j) {
    EpisodeLog e;
    e.iteration = j.at("iteration").get<std::size_t>();
    e.goal = outcome_from_json(j.at("goal"));
    e.strategy = j.at("strategy").get<std::size_t>();
    e.strategy_name = j.at("strategy_name").get<std::string>();
    e.length = j.at("length").get<std::size_t>();
    e.blocked = j.at("blocked").get<std::size_t>();
    e.degraded = j.at("degraded").get<bool>();
    e.uniform = j.at("uniform").get<bool>();
    e.goal_progress = j.at("goal_progress").get<double>();
    e.min_progress = j.at("min_progress").get<double>();
    if (!j.at("procedure_space").is_null()) {
        const std::string name = j["procedure_space"].get<std::string>();
        const auto comma = name.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("bad procedural space '" + name + "'");
        e.procedure_space = ProceduralSpace{parse_subspace(name.substr(0, comma)), parse_subspace(name.substr(comma + 1))};
    }
    for (const json& r : j.at("reached")) e.reached.push_back(reached_from_json(r));
    return e;
}

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

template <class Row>
std::size_t row_total(const Row& row) {
    std::size_t total = 0;
    for (const auto& [k, c] : row) total += c;
    return total;
}

}  // namespace

void write_testbench_csv(std::span<const Outcome> testbench, std::ostream& out) {
    out << "subspace,c0,c1,c2,c3\n";
    for (const Outcome& g : testbench) {
        out << subspace_name(g.space);
        for (std::size_t d = 0; d < kMaxOutcomeDim; ++d) {
            out << ',';
            if (d < g.dim()) out << fmt(g.coords[d]);
        }
        out << '\n';
    }
}

void write_snapshots_csv(std::span<const EvaluationSnapshot> snaps, std::ostream& out) {
    out << "iteration,global_error,O0,O1,O2,O3,O4,O5,memory_size\n";
    for (const EvaluationSnapshot& s : snaps) {
        out << s.iteration << ',' << fmt(s.global_error);
        for (const auto& e : s.subspace_error) {
            out << ',';
            if (e) out << fmt(*e);
        }
        out << ',' << s.memory_size << '\n';
    }
}

void write_procedure_usage_csv(const std::array<std::map<std::string, std::size_t>, kSubspaceCount>& t,
                               std::ostream& out) {
    out << "goal_subspace,procedural_space,count,percent\n";
    for (std::size_t s = 0; s < kSubspaceCount; ++s) {
        const std::size_t total = row_total(t[s]);
        for (const auto& [k, c] : t[s]) {
            out << subspace_name(subspace_at(s)) << ",\"" << k << "\"," << c << ','
                << fmt(100.0 * static_cast<double>(c) / static_cast<double>(total)) << '\n';
        }
    }
}

void write_action_length_csv(const std::array<std::map<std::size_t, std::size_t>, kSubspaceCount>& t,
                             std::ostream& out) {
    out << "goal_subspace,length,count,percent\n";
    for (std::size_t s = 0; s < kSubspaceCount; ++s) {
        const std::size_t total = row_total(t[s]);
        for (const auto& [k, c] : t[s]) {
            out << subspace_name(subspace_at(s)) << ',' << k << ',' << c << ','
                << fmt(100.0 * static_cast<double>(c) / static_cast<double>(total)) << '\n';
        }
    }
}

void write_strategy_task_csv(std::span<const EpisodeLog> log, const std::vector<StrategyConfig>& strategies,
                             std::size_t window, std::ostream& out) {
    out << "window_start,window_end,strategy,goal_subspace,count\n";
    if (window == 0) throw std::invalid_argument("window must be positive");
    std::size_t last = 0;
    for (const EpisodeLog& e : log) last = std::max(last, e.iteration + 1);
    for (std::size_t begin = 0; begin < last; begin += window) {
        const std::size_t end = std::min(begin + window, last);
        const auto counts = strategy_task_counts(log, strategies.size(), begin, end);
        for (std::size_t k = 0; k < strategies.size(); ++k) {
            for (std::size_t s = 0; s < kSubspaceCount; ++s) {
                if (counts[k][s] == 0) continue;
                out << begin << ',' << end << ',' << strategies[k].name << ',' << subspace_name(subspace_at(s))
                    << ',' << counts[k][s] << '\n';
            }
        }
    }
}

void write_regions_csv(const InterestMap& map, const std::vector<StrategyConfig>& strategies,
                       std::size_t iteration, std::ostream& out) {
    out << "iteration,subspace,region_id,lo0,lo1,lo2,lo3,hi0,hi1,hi2,hi3,points,strategy,interest\n";
    for (Subspace s : map.subspaces()) {
        for (const InterestRegion& r : map.regions(s)) {
            for (std::size_t k = 0; k < strategies.size(); ++k) {
                out << iteration << ',' << subspace_name(s) << ',' << r.id;
                for (const Coords* b : {&r.lo, &r.hi}) {
                    for (std::size_t d = 0; d < kMaxOutcomeDim; ++d) {
                        out << ',';
                        if (d < dimension(s)) out << fmt((*b)[d]);
                    }
                }
                out << ',' << r.points.size() << ',' << strategies[k].name << ','
                    << fmt(r.strategy_interest[k]) << '\n';
            }
        }
    }
}

}  // namespace sgim
