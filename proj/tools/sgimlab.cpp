// sgimlab: batch runs, evaluation and analysis for the table experiments.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgim/batch.hpp"
#include "sgim/config.hpp"
#include "sgim/evaluation.hpp"
#include "sgim/io.hpp"
#include "sgim/teachers.hpp"

namespace fs = std::filesystem;
using namespace sgim;

namespace {

struct CommonOptions {
    std::string config;
    std::string profile;
    std::vector<std::string> variants;
    std::vector<std::uint64_t> seeds;
    std::optional<std::size_t> iterations;
    std::string lump;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("-c,--config", o.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("-p,--profile", o.profile, "simulation, physical or left-arm (overrides the config)");
    cmd->add_option("--variants", o.variants, "RandomAction IM-PB SGIM-ACTS SGIM-PB SGIM-TL");
    cmd->add_option("--seeds", o.seeds, "Seed list");
    cmd->add_option("-n,--iterations", o.iterations, "Learning iterations per run");
    cmd->add_option("--lump", o.lump, "Transfer lump for SGIM-TL cells")->check(CLI::ExistingFile);
}

ExperimentConfig build_config(const CommonOptions& o) {
    nlohmann::json j = nlohmann::json::object();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        j = nlohmann::json::parse(in);
    }
    if (!o.profile.empty()) j["profile"] = o.profile;
    if (!o.variants.empty()) j["variants"] = o.variants;
    if (!o.seeds.empty()) j["seeds"] = o.seeds;
    if (o.iterations) j["iterations"] = *o.iterations;
    if (!o.lump.empty()) j["transfer_lump"] = o.lump;
    return config_from_json(j);
}

EpisodicMemory read_memory(const ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open memory dump " + path);
    EpisodicMemory memory(cfg.world.spaces, cfg.learner.memory);
    load_memory(memory, in);
    return memory;
}

std::vector<Outcome> testbench_for(const ExperimentConfig& cfg) { return prepare_inputs(cfg).testbench; }

void print_snapshot(const EvaluationSnapshot& s) {
    std::cout << "iteration " << s.iteration << "  global error " << s.global_error << "  memory "
              << s.memory_size << '\n';
    for (std::size_t i = 0; i < kSubspaceCount; ++i) {
        if (s.subspace_error[i]) std::cout << "  " << subspace_name(subspace_at(i)) << ' ' << *s.subspace_error[i] << '\n';
    }
}

void print_batch_summary(const std::vector<CellResult>& cells) {
    std::map<std::string, std::vector<double>> finals, reach;
    for (const CellResult& c : cells) {
        finals[variant_name(c.variant)].push_back(c.final_error());
        reach[variant_name(c.variant)].push_back(c.complex_reach);
    }
    std::cout << "variant          runs  median final error  median O3/O4 reach\n";
    for (const auto& [v, e] : finals) {
        std::cout << std::left << std::setw(17) << v << std::setw(6) << e.size() << std::setw(20) << median(e)
                  << median(reach[v]) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical multi-task learning on a simulated interactive table"};
    app.require_subcommand(1);

    CommonOptions run_opt;
    std::string run_out = "runs";
    auto* run_cmd = app.add_subcommand("run", "Run every (variant, seed) cell; complete cells are skipped");
    add_common(run_cmd, run_opt);
    run_cmd->add_option("-o,--out", run_out, "Batch output directory");

    CommonOptions eval_opt;
    std::string eval_memory;
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a memory dump on the testbench");
    add_common(eval_cmd, eval_opt);
    eval_cmd->add_option("-m,--memory", eval_memory, "Memory dump (JSONL)")->required()->check(CLI::ExistingFile);

    CommonOptions an_opt;
    std::string an_memory, an_batch, an_out = ".";
    auto* an_cmd = app.add_subcommand("analyze", "Procedure-usage and action-length tables");
    add_common(an_cmd, an_opt);
    an_cmd->add_option("-m,--memory", an_memory, "Memory dump (JSONL)")->check(CLI::ExistingFile);
    an_cmd->add_option("-b,--batch", an_batch, "Completed batch directory to summarise")->check(CLI::ExistingDirectory);
    an_cmd->add_option("-o,--out", an_out, "Directory for the CSV tables");

    CommonOptions gt_opt;
    std::string gt_out = "teachers.jsonl";
    auto* gt_cmd = app.add_subcommand("gen-teachers", "Generate teacher repertoires for a profile");
    add_common(gt_cmd, gt_opt);
    gt_cmd->add_option("-o,--out", gt_out, "Output file (JSONL)");

    CommonOptions tl_opt;
    std::string tl_memory, tl_out = "lump.jsonl";
    bool tl_keep_length = false;
    auto* tl_cmd = app.add_subcommand("gen-transfer-lump",
                                      "Write the procedure records of a memory dump (or of a fresh SGIM-PB run)");
    add_common(tl_cmd, tl_opt);
    tl_cmd->add_option("-m,--memory", tl_memory, "Memory dump to take procedures from")->check(CLI::ExistingFile);
    tl_cmd->add_option("-o,--out", tl_out, "Output file (JSONL)");
    tl_cmd->add_flag("--keep-length", tl_keep_length, "Keep realised sequence lengths");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const ExperimentConfig cfg = build_config(run_opt);
            const auto cells = run_batch(cfg, run_out, [](const std::string& m) { std::cerr << m << '\n'; });
            print_batch_summary(cells);
        } else if (*eval_cmd) {
            const ExperimentConfig cfg = build_config(eval_opt);
            const EpisodicMemory memory = read_memory(cfg, eval_memory);
            const auto tb = testbench_for(cfg);
            print_snapshot(evaluate(memory, tb, cfg.learner.interest.d_thres, memory.episode_count()));
        } else if (*an_cmd) {
            if (!an_batch.empty()) {
                std::vector<CellResult> cells;
                for (const auto& entry : fs::directory_iterator(an_batch)) {
                    const auto summary = entry.path() / "summary.json";
                    if (!fs::exists(summary)) continue;
                    std::ifstream in(summary);
                    cells.push_back(cell_from_json(nlohmann::json::parse(in)));
                }
                if (cells.empty()) throw std::runtime_error("no completed cells in " + an_batch);
                write_aggregate(cells, an_batch);
                print_batch_summary(cells);
            } else {
                if (an_memory.empty()) throw std::runtime_error("analyze needs --memory or --batch");
                const ExperimentConfig cfg = build_config(an_opt);
                const EpisodicMemory memory = read_memory(cfg, an_memory);
                const auto table = analyze_resolutions(memory, testbench_for(cfg));
                fs::create_directories(an_out);
                std::ofstream usage(fs::path(an_out) / "procedure_usage.csv");
                write_procedure_usage_csv(table.procedure, usage);
                std::ofstream lengths(fs::path(an_out) / "action_lengths.csv");
                write_action_length_csv(table.length, lengths);
                std::cout << "wrote procedure_usage.csv and action_lengths.csv to " << an_out << '\n';
            }
        } else if (*gt_cmd) {
            const ExperimentConfig cfg = build_config(gt_opt);
            const auto teachers = make_teachers(cfg.profile, cfg.world, cfg.teacher_seed);
            std::ofstream out(gt_out);
            write_teachers(teachers, out);
            for (const Teacher& t : teachers) {
                std::cout << t.name << ": " << t.actions.size() + t.procedures.size() << " demos\n";
            }
        } else if (*tl_cmd) {
            const ExperimentConfig cfg = build_config(tl_opt);
            std::ofstream out(tl_out);
            if (!tl_memory.empty()) {
                write_transfer_lump(read_memory(cfg, tl_memory), out, tl_keep_length);
            } else {
                const BatchInputs in = prepare_inputs(cfg);
                Learner learner(cfg.world, Variant::sgim_pb, in.teachers, cfg.learner, cfg.seeds.front());
                for (std::size_t i = 0; i < cfg.iterations; ++i) learner.run_episode();
                write_transfer_lump(learner.memory(), out, tl_keep_length);
            }
            std::cout << "wrote " << tl_out << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
