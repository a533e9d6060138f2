/**
 * @file interest.hpp
 * @brief Competence progress, interest regions and (goal, strategy) selection.
 *
 * Each enabled outcome subspace starts as a single region covering the unit
 * cube of normalised coordinates. Interest samples are appended to the
 * region that owns them; a region holding more than `split_threshold`
 * samples is cut in two along the axis-aligned boundary that best separates
 * low-interest from high-interest samples.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sgim/memory.hpp"
#include "sgim/outcome.hpp"

namespace sgim {

using Rng = std::mt19937_64;

struct InterestParams {
    std::size_t split_threshold = 80;
    std::size_t window = 20;       // recent samples per strategy averaged into a region's interest
    std::size_t quantiles = 10;    // candidate cuts at the deciles of each dimension
    double epsilon = 0.05;         // uniform exploration mass
    double ledger_tolerance = 0.05;
    double d_thres = 5.0;
    double min_width = 1e-6;       // narrower regions evict their oldest samples instead of splitting
};

struct InterestPoint {
    Coords unit{};
    std::size_t strategy = 0;
    double interest = 0.0;
    std::uint64_t time = 0;
};

struct InterestRegion {
    std::size_t id = 0;
    Subspace space = Subspace::touch;
    Coords lo{};
    Coords hi{};
    std::vector<InterestPoint> points;  // in insertion order
    std::vector<double> strategy_interest;

    /// Half-open box [lo, hi); the upper face of the unit cube is included.
    bool contains(const Coords& u) const;
    double volume() const;
    void refresh_interest(std::size_t strategy_count, std::size_t window);
};

struct SplitChoice {
    std::size_t dim = 0;
    double cut = 0.0;
    double score = 0.0;
};

/// Best (dimension, cut) among per-dimension quantile candidates under
/// n_left * n_right * (mean_left - mean_right)^2; midpoint of the widest
/// dimension when no candidate scores above zero.
SplitChoice choose_split(const InterestRegion& region, std::size_t quantiles);
/// All candidate cuts with their scores (exhaustive enumeration).
std::vector<SplitChoice> split_candidates(const InterestRegion& region, std::size_t quantiles);
std::pair<InterestRegion, InterestRegion> split_region(const InterestRegion& region,
                                                       const SplitChoice& choice,
                                                       std::size_t left_id, std::size_t right_id);

class InterestMap {
public:
    InterestMap(const std::vector<Subspace>& spaces, std::size_t strategy_count, InterestParams params);

    /// Inserts a sample and splits the owning region as needed.
    void add(Subspace s, const Coords& unit, std::size_t strategy, double interest);

    const std::vector<InterestRegion>& regions(Subspace s) const { return regions_[index(s)]; }
    std::vector<Subspace> subspaces() const { return spaces_; }
    std::size_t strategy_count() const { return strategy_count_; }
    const InterestParams& params() const { return params_; }
    std::size_t region_index(Subspace s, const Coords& unit) const;
    std::uint64_t clock() const { return clock_; }

private:
    void split_until_bounded(Subspace s, std::size_t region);

    std::vector<Subspace> spaces_;
    std::size_t strategy_count_;
    InterestParams params_;
    std::array<std::vector<InterestRegion>, kSubspaceCount> regions_;
    std::size_t next_id_ = 0;
    std::uint64_t clock_ = 0;
};

/// Fitness-proportionate pick; uniform when every fitness is zero.
std::size_t roulette(std::span<const double> fitness, Rng& rng);

struct Selection {
    Outcome goal;
    std::size_t strategy = 0;
    std::optional<std::size_t> region_id;  // empty for the uniform branch
    bool uniform = false;
};

using Applicability = std::function<bool(Subspace, std::size_t strategy)>;

Selection select_goal_and_strategy(const InterestMap& map, const OutcomeSpaces& spaces,
                                   const Applicability& applies, Rng& rng, bool force_uniform);

/// Minimum distance from the goal to outcomes reached in its subspace,
/// `d_thres` when none was reached.
double competence(const OutcomeSpaces& spaces, const Outcome& goal,
                  std::span<const ReachedOutcome> reached, double d_thres);

/// Best competence per goal; goals within `tolerance` (normalised) share a cell.
class CompetenceLedger {
public:
    explicit CompetenceLedger(double tolerance);

    std::optional<double> best(Subspace s, const Coords& unit) const;
    /// Lowers the cell's value to `value` (creating the cell if needed).
    void record(Subspace s, const Coords& unit, double value);
    std::size_t size() const { return cells_.size(); }

private:
    struct Cell {
        Subspace space;
        Coords key;
        double best;
    };
    std::int64_t bucket(Subspace s, const Coords& unit, const std::array<int, kMaxOutcomeDim>& offset) const;
    std::optional<std::size_t> find(Subspace s, const Coords& unit) const;

    double tolerance_;
    std::vector<Cell> cells_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> grid_;
};

struct InterestSample {
    Outcome outcome;
    std::size_t strategy = 0;
    double progress = 0.0;
    double interest = 0.0;
    bool is_goal = false;
};

/// Progress and interest for the goal and every reached outcome of a stored
/// episode. Best-before values come from the ledger and from memory with the
/// episode itself excluded.
std::vector<InterestSample> update_interest(InterestMap& map, CompetenceLedger& ledger,
                                            const EpisodicMemory& memory, std::size_t episode_id,
                                            std::size_t strategy, double cost);

}  // namespace sgim
