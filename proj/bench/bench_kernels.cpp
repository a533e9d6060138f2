// Parallel kernels against their serial references: testbench evaluation
// (OpenMP over goals) and nearest-neighbour retrieval (k-d tree against a
// linear scan).

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sgim/evaluation.hpp"
#include "sgim/learner.hpp"
#include "sgim/outcome_index.hpp"

namespace {

using namespace sgim;

const World& world() {
    static const World w = World::for_profile(Profile::physical);
    return w;
}

// A memory grown by autonomous exploration, shared by the evaluation benchmarks.
const EpisodicMemory& grown_memory() {
    static const Learner l = [] {
        Learner out(world(), Variant::im_pb, {}, LearnerParams{}, 1);
        for (int i = 0; i < 2000; ++i) out.run_episode();
        return out;
    }();
    return l.memory();
}

const std::vector<Outcome>& testbench() {
    static const std::vector<Outcome> tb = sample_testbench(world().spaces, 20240601, {500, 500, 500, 500, 500, 500});
    return tb;
}

void BM_Evaluate(benchmark::State& state) {
    const EpisodicMemory& m = grown_memory();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(m, testbench(), 5.0, 0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(testbench().size()));
}

void BM_EvaluateSerial(benchmark::State& state) {
    const EpisodicMemory& m = grown_memory();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_serial(m, testbench(), 5.0, 0));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(testbench().size()));
}

OutcomeIndex filled_index(std::size_t dim, std::size_t n) {
    OutcomeIndex idx(dim);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> len(1, 8);
    for (std::size_t i = 0; i < n; ++i) {
        Coords p{};
        for (std::size_t d = 0; d < dim; ++d) p[d] = u(rng);
        idx.insert(p, len(rng));
    }
    return idx;
}

std::vector<Coords> queries(std::size_t dim) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Coords> out(256);
    for (Coords& p : out) {
        for (std::size_t d = 0; d < dim; ++d) p[d] = u(rng);
    }
    return out;
}

void BM_NearestTree(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const OutcomeIndex idx = filled_index(dim, static_cast<std::size_t>(state.range(1)));
    const auto qs = queries(dim);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(idx.nearest(qs[i++ % qs.size()], 5, 1.2));
}

void BM_NearestLinear(benchmark::State& state) {
    const auto dim = static_cast<std::size_t>(state.range(0));
    const OutcomeIndex idx = filled_index(dim, static_cast<std::size_t>(state.range(1)));
    const auto qs = queries(dim);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(idx.nearest_linear(qs[i++ % qs.size()], 5, 1.2));
}

}  // namespace

BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestTree)->ArgsProduct({{2, 4}, {1000, 20000}});
BENCHMARK(BM_NearestLinear)->ArgsProduct({{2, 4}, {1000, 20000}});

BENCHMARK_MAIN();
