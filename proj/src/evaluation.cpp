#include "sgim/evaluation.hpp"

#include <algorithm>
#include <numeric>

namespace sgim {

std::vector<double> goal_errors(const EpisodicMemory& memory, std::span<const Outcome> testbench,
                                double d_thres) {
    std::vector<double> out(testbench.size());
    const auto n = static_cast<std::ptrdiff_t>(testbench.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto d = memory.nearest_distance(testbench[static_cast<std::size_t>(i)]);
        out[static_cast<std::size_t>(i)] = d.value_or(d_thres);
    }
    return out;
}

std::vector<double> goal_errors_serial(const EpisodicMemory& memory,
                                       std::span<const Outcome> testbench, double d_thres) {
    std::vector<double> out;
    out.reserve(testbench.size());
    for (const Outcome& g : testbench) out.push_back(memory.nearest_distance(g).value_or(d_thres));
    return out;
}

EvaluationSnapshot summarize(std::span<const Outcome> testbench, std::span<const double> errors,
                             std::size_t iteration, std::size_t memory_size) {
    if (testbench.empty()) throw std::invalid_argument("testbench is empty");
    if (errors.size() != testbench.size()) throw std::invalid_argument("one error per goal expected");
    std::array<double, kSubspaceCount> sum{};
    std::array<std::size_t, kSubspaceCount> count{};
    for (std::size_t i = 0; i < testbench.size(); ++i) {
        sum[index(testbench[i].space)] += errors[i];
        ++count[index(testbench[i].space)];
    }
    EvaluationSnapshot snap;
    snap.iteration = iteration;
    snap.memory_size = memory_size;
    double total = 0.0;
    std::size_t present = 0;
    for (std::size_t s = 0; s < kSubspaceCount; ++s) {
        if (count[s] == 0) continue;
        snap.subspace_error[s] = sum[s] / static_cast<double>(count[s]);
        total += *snap.subspace_error[s];
        ++present;
    }
    snap.global_error = total / static_cast<double>(present);
    return snap;
}

EvaluationSnapshot evaluate(const EpisodicMemory& memory, std::span<const Outcome> testbench,
                            double d_thres, std::size_t iteration) {
    const auto errors = goal_errors(memory, testbench, d_thres);
    return summarize(testbench, errors, iteration, memory.action_entry_count());
}

EvaluationSnapshot evaluate_serial(const EpisodicMemory& memory, std::span<const Outcome> testbench,
                                   double d_thres, std::size_t iteration) {
    const auto errors = goal_errors_serial(memory, testbench, d_thres);
    return summarize(testbench, errors, iteration, memory.action_entry_count());
}

double reach_fraction(std::span<const Outcome> testbench, std::span<const double> errors,
                      std::span<const Subspace> spaces, double radius) {
    std::size_t hit = 0, total = 0;
    for (std::size_t i = 0; i < testbench.size(); ++i) {
        if (std::find(spaces.begin(), spaces.end(), testbench[i].space) == spaces.end()) continue;
        ++total;
        if (errors[i] <= radius) ++hit;
    }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

ResolutionTable analyze_resolutions(const EpisodicMemory& memory, std::span<const Outcome> testbench) {
    struct Answer {
        std::string procedure;
        std::size_t length;
    };
    std::vector<Answer> answers(testbench.size());
    const auto n = static_cast<std::ptrdiff_t>(testbench.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Answer& a = answers[static_cast<std::size_t>(i)];
        try {
            const Resolution r = memory.resolve(testbench[static_cast<std::size_t>(i)]);
            a.procedure = r.top_space ? r.top_space->name() : kNoProcedure;
            a.length = r.action.size();
        } catch (const ColdStart&) {
            a.procedure = kColdStart;
            a.length = 0;
        }
    }
    ResolutionTable out;
    for (std::size_t i = 0; i < testbench.size(); ++i) {
        const std::size_t s = index(testbench[i].space);
        ++out.procedure[s][answers[i].procedure];
        ++out.length[s][answers[i].length];
    }
    return out;
}

std::optional<std::string> modal(const std::map<std::string, std::size_t>& row) {
    std::optional<std::string> best;
    std::size_t count = 0;
    for (const auto& [k, c] : row) {
        if (c > count) {
            count = c;
            best = k;
        }
    }
    return best;
}

std::optional<std::size_t> modal(const std::map<std::size_t, std::size_t>& row) {
    std::optional<std::size_t> best;
    std::size_t count = 0;
    for (const auto& [k, c] : row) {
        if (c > count) {
            count = c;
            best = k;
        }
    }
    return best;
}

double share(const std::map<std::string, std::size_t>& row, const std::string& key) {
    std::size_t total = 0;
    for (const auto& [k, c] : row) total += c;
    const auto it = row.find(key);
    if (total == 0 || it == row.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total);
}

std::vector<std::array<std::size_t, kSubspaceCount>> strategy_task_counts(
    std::span<const EpisodeLog> log, std::size_t strategy_count, std::size_t begin, std::size_t end) {
    std::vector<std::array<std::size_t, kSubspaceCount>> out(strategy_count);
    for (const EpisodeLog& e : log) {
        if (e.iteration < begin || e.iteration >= end || e.strategy >= strategy_count) continue;
        ++out[e.strategy][index(e.goal.space)];
    }
    return out;
}

std::array<std::map<std::string, std::size_t>, kSubspaceCount> learning_procedure_usage(
    std::span<const EpisodeLog> log) {
    std::array<std::map<std::string, std::size_t>, kSubspaceCount> out{};
    for (const EpisodeLog& e : log) {
        if (e.procedure_space) ++out[index(e.goal.space)][e.procedure_space->name()];
    }
    return out;
}

}  // namespace sgim
