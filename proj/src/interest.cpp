#include "sgim/interest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sgim {

bool InterestRegion::contains(const Coords& u) const {
    for (std::size_t d = 0; d < dimension(space); ++d) {
        if (u[d] < lo[d]) return false;
        if (u[d] >= hi[d] && !(hi[d] >= 1.0 && u[d] <= hi[d])) return false;
    }
    return true;
}

double InterestRegion::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < dimension(space); ++d) v *= hi[d] - lo[d];
    return v;
}

void InterestRegion::refresh_interest(std::size_t strategy_count, std::size_t window) {
    strategy_interest.assign(strategy_count, 0.0);
    std::vector<std::size_t> seen(strategy_count, 0);
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
        if (it->strategy >= strategy_count || seen[it->strategy] >= window) continue;
        strategy_interest[it->strategy] += it->interest;
        ++seen[it->strategy];
    }
    for (std::size_t s = 0; s < strategy_count; ++s) {
        if (seen[s] > 0) strategy_interest[s] /= static_cast<double>(seen[s]);
    }
}

namespace {

double split_score(const InterestRegion& region, std::size_t dim, double cut) {
    double sum_l = 0.0, sum_r = 0.0;
    std::size_t n_l = 0, n_r = 0;
    for (const InterestPoint& p : region.points) {
        if (p.unit[dim] < cut) {
            sum_l += p.interest;
            ++n_l;
        } else {
            sum_r += p.interest;
            ++n_r;
        }
    }
    if (n_l == 0 || n_r == 0) return 0.0;
    const double diff = sum_l / static_cast<double>(n_l) - sum_r / static_cast<double>(n_r);
    return static_cast<double>(n_l) * static_cast<double>(n_r) * diff * diff;
}

}  // namespace

std::vector<SplitChoice> split_candidates(const InterestRegion& region, std::size_t quantiles) {
    std::vector<SplitChoice> out;
    const std::size_t n = region.points.size();
    if (n < 2 || quantiles < 2) return out;
    std::vector<double> values(n);
    for (std::size_t d = 0; d < dimension(region.space); ++d) {
        for (std::size_t i = 0; i < n; ++i) values[i] = region.points[i].unit[d];
        std::sort(values.begin(), values.end());
        for (std::size_t q = 1; q < quantiles; ++q) {
            const double cut = values[q * n / quantiles];
            if (cut <= region.lo[d] || cut >= region.hi[d]) continue;
            out.push_back({d, cut, split_score(region, d, cut)});
        }
    }
    return out;
}

SplitChoice choose_split(const InterestRegion& region, std::size_t quantiles) {
    SplitChoice best;
    for (const SplitChoice& c : split_candidates(region, quantiles)) {
        if (c.score > best.score) best = c;
    }
    if (best.score > 0.0) return best;
    std::size_t widest = 0;
    for (std::size_t d = 1; d < dimension(region.space); ++d) {
        if (region.hi[d] - region.lo[d] > region.hi[widest] - region.lo[widest]) widest = d;
    }
    return {widest, 0.5 * (region.lo[widest] + region.hi[widest]), 0.0};
}

std::pair<InterestRegion, InterestRegion> split_region(const InterestRegion& region,
                                                       const SplitChoice& choice,
                                                       std::size_t left_id, std::size_t right_id) {
    if (choice.dim >= dimension(region.space) || !(choice.cut > region.lo[choice.dim]) ||
        !(choice.cut < region.hi[choice.dim])) {
        throw std::invalid_argument("split cut lies outside the region");
    }
    InterestRegion left{left_id, region.space, region.lo, region.hi, {}, {}};
    InterestRegion right{right_id, region.space, region.lo, region.hi, {}, {}};
    left.hi[choice.dim] = choice.cut;
    right.lo[choice.dim] = choice.cut;
    for (const InterestPoint& p : region.points) {
        (p.unit[choice.dim] < choice.cut ? left : right).points.push_back(p);
    }
    return {std::move(left), std::move(right)};
}

InterestMap::InterestMap(const std::vector<Subspace>& spaces, std::size_t strategy_count,
                         InterestParams params)
    : spaces_(spaces), strategy_count_(strategy_count), params_(params) {
    if (params_.split_threshold < 2) throw std::invalid_argument("split threshold must be at least 2");
    for (Subspace s : spaces_) {
        InterestRegion root;
        root.id = next_id_++;
        root.space = s;
        root.lo.fill(0.0);
        root.hi.fill(0.0);
        for (std::size_t d = 0; d < dimension(s); ++d) root.hi[d] = 1.0;
        root.strategy_interest.assign(strategy_count_, 0.0);
        regions_[index(s)].push_back(std::move(root));
    }
}

std::size_t InterestMap::region_index(Subspace s, const Coords& unit) const {
    const auto& regs = regions_[index(s)];
    for (std::size_t i = 0; i < regs.size(); ++i) {
        if (regs[i].contains(unit)) return i;
    }
    throw std::out_of_range("no interest region of " + subspace_name(s) + " contains the point");
}

void InterestMap::add(Subspace s, const Coords& unit, std::size_t strategy, double interest) {
    if (regions_[index(s)].empty()) {
        throw std::invalid_argument("subspace " + subspace_name(s) + " has no interest regions");
    }
    if (strategy >= strategy_count_) throw std::out_of_range("strategy index out of range");
    Coords u = unit;
    for (std::size_t d = 0; d < dimension(s); ++d) u[d] = std::clamp(u[d], 0.0, 1.0);
    const std::size_t r = region_index(s, u);
    regions_[index(s)][r].points.push_back({u, strategy, interest, clock_++});
    split_until_bounded(s, r);
}

void InterestMap::split_until_bounded(Subspace s, std::size_t r) {
    auto& regs = regions_[index(s)];
    std::vector<std::size_t> pending{r};
    while (!pending.empty()) {
        const std::size_t i = pending.back();
        pending.pop_back();
        InterestRegion& reg = regs[i];
        if (reg.points.size() <= params_.split_threshold) {
            reg.refresh_interest(strategy_count_, params_.window);
            continue;
        }
        bool distinct = false;
        for (const InterestPoint& p : reg.points) {
            if (p.unit != reg.points.front().unit) {
                distinct = true;
                break;
            }
        }
        const SplitChoice choice = choose_split(reg, params_.quantiles);
        if (!distinct || reg.hi[choice.dim] - reg.lo[choice.dim] < params_.min_width) {
            const std::size_t excess = reg.points.size() - params_.split_threshold;
            reg.points.erase(reg.points.begin(), reg.points.begin() + static_cast<std::ptrdiff_t>(excess));
            reg.refresh_interest(strategy_count_, params_.window);
            continue;
        }
        auto [left, right] = split_region(reg, choice, reg.id, next_id_++);
        regs[i] = std::move(left);
        regs.push_back(std::move(right));
        pending.push_back(i);
        pending.push_back(regs.size() - 1);
    }
}

std::size_t roulette(std::span<const double> fitness, Rng& rng) {
    if (fitness.empty()) throw std::invalid_argument("roulette over an empty set");
    const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
    if (!(total > 0.0)) {
        return std::uniform_int_distribution<std::size_t>(0, fitness.size() - 1)(rng);
    }
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        if (fitness[i] <= 0.0) continue;
        acc += fitness[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

namespace {

Coords uniform_in(const Coords& lo, const Coords& hi, std::size_t dim, Rng& rng) {
    Coords u{};
    for (std::size_t d = 0; d < dim; ++d) {
        u[d] = std::uniform_real_distribution<double>(lo[d], hi[d])(rng);
    }
    return u;
}

}  // namespace

Selection select_goal_and_strategy(const InterestMap& map, const OutcomeSpaces& spaces,
                                   const Applicability& applies, Rng& rng, bool force_uniform) {
    struct Candidate {
        Subspace space;
        std::size_t region;
        std::size_t strategy;
    };
    std::vector<Candidate> candidates;
    std::vector<double> fitness;
    std::vector<Subspace> usable;
    for (Subspace s : map.subspaces()) {
        bool any = false;
        for (std::size_t k = 0; k < map.strategy_count(); ++k) {
            if (!applies(s, k)) continue;
            any = true;
            const auto& regs = map.regions(s);
            for (std::size_t r = 0; r < regs.size(); ++r) {
                candidates.push_back({s, r, k});
                fitness.push_back(std::max(0.0, regs[r].strategy_interest[k]));
            }
        }
        if (any) usable.push_back(s);
    }
    if (usable.empty()) throw std::invalid_argument("no strategy applies to any enabled subspace");

    const double total = std::accumulate(fitness.begin(), fitness.end(), 0.0);
    const bool uniform = force_uniform || !(total > 0.0) ||
                         std::uniform_real_distribution<double>(0.0, 1.0)(rng) < map.params().epsilon;
    Selection sel;
    if (uniform) {
        const Subspace s = usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)];
        Coords hi{};
        for (std::size_t d = 0; d < dimension(s); ++d) hi[d] = 1.0;
        sel.goal = spaces.denormalize(s, uniform_in(Coords{}, hi, dimension(s), rng));
        std::vector<std::size_t> ks;
        for (std::size_t k = 0; k < map.strategy_count(); ++k) {
            if (applies(s, k)) ks.push_back(k);
        }
        sel.strategy = ks[std::uniform_int_distribution<std::size_t>(0, ks.size() - 1)(rng)];
        sel.uniform = true;
        return sel;
    }
    const Candidate& c = candidates[roulette(fitness, rng)];
    const InterestRegion& reg = map.regions(c.space)[c.region];
    sel.goal = spaces.denormalize(c.space, uniform_in(reg.lo, reg.hi, dimension(c.space), rng));
    sel.strategy = c.strategy;
    sel.region_id = reg.id;
    return sel;
}

double competence(const OutcomeSpaces& spaces, const Outcome& goal,
                  std::span<const ReachedOutcome> reached, double d_thres) {
    double best = d_thres;
    bool any = false;
    for (const ReachedOutcome& r : reached) {
        if (r.outcome.space != goal.space) continue;
        const double d = spaces.distance(r.outcome, goal);
        best = any ? std::min(best, d) : d;
        any = true;
    }
    return best;
}

CompetenceLedger::CompetenceLedger(double tolerance) : tolerance_(tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("ledger tolerance must be positive");
}

std::int64_t CompetenceLedger::bucket(Subspace s, const Coords& unit,
                                      const std::array<int, kMaxOutcomeDim>& offset) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL * (index(s) + 1);
    for (std::size_t d = 0; d < dimension(s); ++d) {
        const auto cell = static_cast<std::int64_t>(std::floor(unit[d] / tolerance_)) + offset[d];
        h ^= static_cast<std::uint64_t>(cell) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::int64_t>(h);
}

std::optional<std::size_t> CompetenceLedger::find(Subspace s, const Coords& unit) const {
    const std::size_t dim = dimension(s);
    std::size_t combos = 1;
    for (std::size_t d = 0; d < dim; ++d) combos *= 3;
    std::optional<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < combos; ++c) {
        std::array<int, kMaxOutcomeDim> offset{};
        std::size_t rest = c;
        for (std::size_t d = 0; d < dim; ++d) {
            offset[d] = static_cast<int>(rest % 3) - 1;
            rest /= 3;
        }
        const auto it = grid_.find(bucket(s, unit, offset));
        if (it == grid_.end()) continue;
        for (std::size_t id : it->second) {
            const Cell& cell = cells_[id];
            if (cell.space != s) continue;
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) sq += (cell.key[d] - unit[d]) * (cell.key[d] - unit[d]);
            const double dist = std::sqrt(sq);
            if (dist <= tolerance_ && (dist < best_dist || (dist == best_dist && id < *best))) {
                best = id;
                best_dist = dist;
            }
        }
    }
    return best;
}

std::optional<double> CompetenceLedger::best(Subspace s, const Coords& unit) const {
    if (const auto id = find(s, unit)) return cells_[*id].best;
    return std::nullopt;
}

void CompetenceLedger::record(Subspace s, const Coords& unit, double value) {
    if (const auto id = find(s, unit)) {
        cells_[*id].best = std::min(cells_[*id].best, value);
        return;
    }
    grid_[bucket(s, unit, {})].push_back(cells_.size());
    cells_.push_back({s, unit, value});
}

std::vector<InterestSample> update_interest(InterestMap& map, CompetenceLedger& ledger,
                                            const EpisodicMemory& memory, std::size_t episode_id,
                                            std::size_t strategy, double cost) {
    if (!(cost >= 1.0)) throw std::invalid_argument("strategy cost must be at least 1");
    const EpisodeRecord& ep = memory.episode(episode_id);
    const OutcomeSpaces& spaces = memory.spaces();
    const double d_thres = map.params().d_thres;

    std::vector<std::pair<Outcome, bool>> targets;
    if (spaces.enabled(ep.goal.space)) targets.emplace_back(ep.goal, true);
    for (const ReachedOutcome& r : ep.reached) targets.emplace_back(r.outcome, false);

    std::vector<InterestSample> out;
    out.reserve(targets.size());
    for (const auto& [target, is_goal] : targets) {
        const Coords unit = spaces.normalize(target);
        double before = d_thres;
        if (const auto b = ledger.best(target.space, unit)) before = std::min(before, *b);
        if (const auto nn = memory.nearest_distance(target, episode_id)) before = std::min(before, *nn);
        const double after = std::min(before, competence(spaces, target, ep.reached, d_thres));
        const double progress = before - after;
        ledger.record(target.space, unit, after);
        const double interest = progress / cost;
        map.add(target.space, unit, strategy, interest);
        out.push_back({target, strategy, progress, interest, is_goal});
    }
    return out;
}

}  // namespace sgim
