#include "sgim/batch.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <mutex>

#include "sgim/io.hpp"
#include "sgim/teachers.hpp"

namespace sgim {

using nlohmann::json;

RunOutput run(Learner& learner, std::size_t iterations, std::span<const Outcome> testbench,
              std::size_t eval_every, double d_thres) {
    if (eval_every == 0) throw std::invalid_argument("eval_every must be positive");
    RunOutput out;
    out.log.reserve(iterations);
    out.snapshots.push_back(evaluate(learner.memory(), testbench, d_thres, learner.iteration()));
    for (std::size_t i = 0; i < iterations; ++i) {
        out.log.push_back(learner.run_episode());
        if (learner.iteration() % eval_every == 0 || i + 1 == iterations) {
            if (out.snapshots.back().iteration != learner.iteration()) {
                out.snapshots.push_back(evaluate(learner.memory(), testbench, d_thres, learner.iteration()));
            }
        }
    }
    return out;
}

double CellResult::learning_share(Subspace first, Subspace second) const {
    const std::string key = ProceduralSpace{first, second}.name();
    std::size_t hit = 0, total = 0;
    for (const auto& row : learning_usage) {
        for (const auto& [k, c] : row) {
            total += c;
            if (k == key) hit += c;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

namespace {

json snapshot_json(const EvaluationSnapshot& s) {
    json j{{"iteration", s.iteration}, {"global_error", s.global_error}, {"memory_size", s.memory_size}};
    j["subspace_error"] = json::array();
    for (const auto& e : s.subspace_error) j["subspace_error"].push_back(e ? json(*e) : json(nullptr));
    return j;
}

EvaluationSnapshot snapshot_from(const json& j) {
    EvaluationSnapshot s;
    s.iteration = j.at("iteration").get<std::size_t>();
    s.global_error = j.at("global_error").get<double>();
    s.memory_size = j.at("memory_size").get<std::size_t>();
    const json& e = j.at("subspace_error");
    for (std::size_t i = 0; i < kSubspaceCount && i < e.size(); ++i) {
        if (!e[i].is_null()) s.subspace_error[i] = e[i].get<double>();
    }
    return s;
}

template <class Row>
json rows_json(const std::array<Row, kSubspaceCount>& rows) {
    json j = json::object();
    for (std::size_t s = 0; s < kSubspaceCount; ++s) {
        json row = json::object();
        for (const auto& [k, c] : rows[s]) {
            if constexpr (std::is_same_v<typename Row::key_type, std::string>) {
                row[k] = c;
            } else {
                row[std::to_string(k)] = c;
            }
        }
        j[subspace_name(subspace_at(s))] = row;
    }
    return j;
}

template <class Row>
std::array<Row, kSubspaceCount> rows_from(const json& j) {
    std::array<Row, kSubspaceCount> out{};
    for (std::size_t s = 0; s < kSubspaceCount; ++s) {
        const std::string name = subspace_name(subspace_at(s));
        if (!j.contains(name)) continue;
        for (const auto& [k, c] : j.at(name).items()) {
            if constexpr (std::is_same_v<typename Row::key_type, std::string>) {
                out[s][k] = c.template get<std::size_t>();
            } else {
                out[s][static_cast<std::size_t>(std::stoull(k))] = c.template get<std::size_t>();
            }
        }
    }
    return out;
}

}  // namespace

json to_json(const CellResult& r) {
    json j;
    j["variant"] = variant_name(r.variant);
    j["seed"] = r.seed;
    j["snapshots"] = json::array();
    for (const auto& s : r.snapshots) j["snapshots"].push_back(snapshot_json(s));
    j["strategy_names"] = r.strategy_names;
    j["strategy_task"] = r.strategy_task;
    j["resolution_procedures"] = rows_json(r.resolutions.procedure);
    j["resolution_lengths"] = rows_json(r.resolutions.length);
    j["learning_usage"] = rows_json(r.learning_usage);
    j["reached_entries"] = r.reached_entries;
    j["complex_reach"] = r.complex_reach;
    j["min_progress"] = r.min_progress;
    j["episodes"] = r.episodes;
    j["seconds"] = r.seconds;
    return j;
}

CellResult cell_from_json(const json& j) {
    CellResult r;
    r.variant = parse_variant(j.at("variant").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const json& s : j.at("snapshots")) r.snapshots.push_back(snapshot_from(s));
    if (r.snapshots.empty()) throw std::invalid_argument("cell summary has no snapshots");
    r.strategy_names = j.at("strategy_names").get<std::vector<std::string>>();
    r.strategy_task = j.at("strategy_task").get<std::vector<std::array<std::size_t, kSubspaceCount>>>();
    r.resolutions.procedure = rows_from<std::map<std::string, std::size_t>>(j.at("resolution_procedures"));
    r.resolutions.length = rows_from<std::map<std::size_t, std::size_t>>(j.at("resolution_lengths"));
    r.learning_usage = rows_from<std::map<std::string, std::size_t>>(j.at("learning_usage"));
    r.reached_entries = j.at("reached_entries").get<std::array<std::size_t, kSubspaceCount>>();
    r.complex_reach = j.at("complex_reach").get<double>();
    r.min_progress = j.at("min_progress").get<double>();
    r.episodes = j.at("episodes").get<std::size_t>();
    r.seconds = j.at("seconds").get<double>();
    return r;
}

BatchInputs prepare_inputs(const ExperimentConfig& cfg) {
    BatchInputs in;
    in.teachers = make_teachers(cfg.profile, cfg.world, cfg.teacher_seed);
    std::vector<Outcome> demos;
    for (const Teacher& t : in.teachers) {
        const auto o = t.demo_outcomes();
        demos.insert(demos.end(), o.begin(), o.end());
    }
    in.testbench = sample_testbench(cfg.world.spaces, cfg.testbench_seed, cfg.testbench_counts, demos);
    if (cfg.transfer_lump) in.lump = load_transfer_lump(*cfg.transfer_lump);
    return in;
}

std::string cell_name(Variant v, std::uint64_t seed) {
    return std::string(variant_name(v)) + "_seed" + std::to_string(seed);
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

}  // namespace

CellResult run_cell(const ExperimentConfig& cfg, const BatchInputs& inputs, Variant v,
                    std::uint64_t seed, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        ExperimentConfig cell = cfg;
        cell.variants = {v};
        cell.seeds = {seed};
        open_out(dir / "config.json") << to_json(cell).dump(2) << '\n';
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ProcedureRecord> lump;
    if (v == Variant::sgim_tl) lump = inputs.lump;
    Learner learner(cfg.world, v, inputs.teachers, cfg.learner, seed, std::move(lump));
    const double d_thres = cfg.learner.interest.d_thres;
    RunOutput out = run(learner, cfg.iterations, inputs.testbench, cfg.eval_every, d_thres);

    CellResult r;
    r.variant = v;
    r.seed = seed;
    r.snapshots = out.snapshots;
    for (const StrategyConfig& s : learner.strategies()) r.strategy_names.push_back(s.name);
    r.strategy_task = strategy_task_counts(out.log, learner.strategies().size(), 0,
                                           std::numeric_limits<std::size_t>::max());
    r.resolutions = analyze_resolutions(learner.memory(), inputs.testbench);
    r.learning_usage = learning_procedure_usage(out.log);
    for (std::size_t s = 0; s < kSubspaceCount; ++s) r.reached_entries[s] = learner.memory().action_entry_count(subspace_at(s));
    const auto errors = goal_errors(learner.memory(), inputs.testbench, d_thres);
    const std::array<Subspace, 2> complex{Subspace::both, Subspace::burst};
    r.complex_reach = reach_fraction(inputs.testbench, errors, complex, cfg.reach_radius);
    r.min_progress = 0.0;
    for (const EpisodeLog& e : out.log) r.min_progress = std::min(r.min_progress, e.min_progress);
    r.episodes = out.log.size();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    {
        auto f = open_out(dir / "episodes.jsonl");
        for (const EpisodeLog& e : out.log) f << episode_log_line(e).dump() << '\n';
    }
    {
        auto f = open_out(dir / "snapshots.csv");
        write_snapshots_csv(out.snapshots, f);
    }
    {
        auto f = open_out(dir / "procedure_usage.csv");
        write_procedure_usage_csv(r.resolutions.procedure, f);
    }
    {
        auto f = open_out(dir / "action_lengths.csv");
        write_action_length_csv(r.resolutions.length, f);
    }
    {
        auto f = open_out(dir / "learning_procedures.csv");
        write_procedure_usage_csv(r.learning_usage, f);
    }
    {
        auto f = open_out(dir / "strategy_task.csv");
        write_strategy_task_csv(out.log, learner.strategies(), cfg.choice_window, f);
    }
    {
        auto f = open_out(dir / "regions.csv");
        write_regions_csv(learner.interest(), learner.strategies(), learner.iteration(), f);
    }
    if (cfg.save_memory) {
        auto f = open_out(dir / "memory.jsonl");
        dump_memory(learner.memory(), f);
    }
    // Written last: its presence marks the cell as complete.
    const auto tmp = dir / "summary.json.tmp";
    open_out(tmp) << to_json(r).dump(2) << '\n';
    std::filesystem::rename(tmp, dir / "summary.json");
    return r;
}

std::vector<CellResult> run_batch(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                                  const Progress& progress) {
    cfg.validate();
    std::filesystem::create_directories(dir);
    open_out(dir / "config.json") << to_json(cfg).dump(2) << '\n';
    const BatchInputs inputs = prepare_inputs(cfg);
    {
        auto f = open_out(dir / "teachers.jsonl");
        write_teachers(inputs.teachers, f);
    }
    {
        auto f = open_out(dir / "testbench.csv");
        write_testbench_csv(inputs.testbench, f);
    }

    struct Cell {
        Variant variant;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (Variant v : cfg.variants) {
        for (std::uint64_t s : cfg.seeds) cells.push_back({v, s});
    }
    std::vector<CellResult> results(cells.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto summary = dir / cell_name(cells[i].variant, cells[i].seed) / "summary.json";
        if (std::filesystem::exists(summary)) {
            std::ifstream in(summary);
            results[i] = cell_from_json(json::parse(in));
            if (progress) progress("skip " + cell_name(cells[i].variant, cells[i].seed) + " (complete)");
        } else {
            pending.push_back(i);
        }
    }

    std::mutex mu;
    std::string failure;
    const auto n = static_cast<std::ptrdiff_t>(pending.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const Cell& c = cells[pending[static_cast<std::size_t>(k)]];
        const std::string name = cell_name(c.variant, c.seed);
        try {
            CellResult r = run_cell(cfg, inputs, c.variant, c.seed, dir / name);
            std::lock_guard lock(mu);
            if (progress) {
                progress("done " + name + ": final error " + std::to_string(r.final_error()) + " in " +
                         std::to_string(r.seconds) + " s");
            }
            results[pending[static_cast<std::size_t>(k)]] = std::move(r);
        } catch (const std::exception& e) {
            std::lock_guard lock(mu);
            if (failure.empty()) failure = name + ": " + e.what();
        }
    }
    if (!failure.empty()) throw std::runtime_error("batch cell failed: " + failure);
    write_aggregate(results, dir);
    return results;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

void write_aggregate(const std::vector<CellResult>& cells, const std::filesystem::path& dir) {
    {
        auto f = open_out(dir / "aggregate.csv");
        f << "variant,seed,final_global_error,O0,O1,O2,O3,O4,O5,complex_reach,seconds\n";
        for (const CellResult& c : cells) {
            const EvaluationSnapshot& s = c.snapshots.back();
            f << variant_name(c.variant) << ',' << c.seed << ',' << s.global_error;
            for (const auto& e : s.subspace_error) {
                f << ',';
                if (e) f << *e;
            }
            f << ',' << c.complex_reach << ',' << c.seconds << '\n';
        }
    }
    std::map<std::string, std::map<std::size_t, std::vector<double>>> curves;
    for (const CellResult& c : cells) {
        for (const EvaluationSnapshot& s : c.snapshots) curves[variant_name(c.variant)][s.iteration].push_back(s.global_error);
    }
    auto f = open_out(dir / "curves.csv");
    f << "variant,iteration,median,q1,q3,runs\n";
    for (const auto& [variant, by_iter] : curves) {
        for (const auto& [iter, values] : by_iter) {
            f << variant << ',' << iter << ',' << median(values) << ',' << quantile(values, 0.25) << ','
              << quantile(values, 0.75) << ',' << values.size() << '\n';
        }
    }
}

}  // namespace sgim
