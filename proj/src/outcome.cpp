#include "sgim/outcome.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sgim {

std::string subspace_name(Subspace s) { return "O" + std::to_string(index(s)); }

Subspace parse_subspace(const std::string& name) {
    std::string digits = name;
    if (!digits.empty() && (digits.front() == 'O' || digits.front() == 'o')) digits.erase(0, 1);
    if (digits.size() == 1 && digits[0] >= '0' && digits[0] < '0' + static_cast<char>(kSubspaceCount)) {
        return subspace_at(static_cast<std::size_t>(digits[0] - '0'));
    }
    throw std::invalid_argument("unknown outcome subspace '" + name + "'");
}

Outcome Outcome::make(Subspace s, std::initializer_list<double> values) {
    if (values.size() != dimension(s)) {
        throw std::invalid_argument(subspace_name(s) + " outcome needs " +
                                    std::to_string(dimension(s)) + " coordinates");
    }
    Outcome o;
    o.space = s;
    std::copy(values.begin(), values.end(), o.coords.begin());
    return o;
}

std::string ProceduralSpace::name() const {
    return subspace_name(first) + "," + subspace_name(second);
}

OutcomeSpaces::OutcomeSpaces() {
    for (auto& b : bounds_) b.upper.fill(1.0);
}

OutcomeSpaces OutcomeSpaces::for_table(const TableConfig& t, bool maintained_enabled) {
    OutcomeSpaces sp;
    const double x0 = t.origin.x, x1 = t.origin.x + t.width;
    const double y0 = t.origin.y, y1 = t.origin.y + t.height;
    const Bounds pos{{x0, y0, 0, 0}, {x1, y1, 1, 1}};
    sp.set_bounds(Subspace::touch, pos);
    sp.set_bounds(Subspace::blue, pos);
    sp.set_bounds(Subspace::green, pos);
    sp.set_bounds(Subspace::both, {{x0, y0, x0, y0}, {x1, y1, x1, y1}});
    sp.set_bounds(Subspace::burst, {{-1.0, -1.0, 0.05, 0}, {1.0, 1.0, 1.0, 1}});
    sp.set_bounds(Subspace::maintained, {{-1.0, -1.0, 0.05, 0.0}, {1.0, 1.0, 1.0, 1.0}});
    for (std::size_t i = 0; i < kSubspaceCount; ++i) sp.enabled_[i] = true;
    sp.set_enabled(Subspace::maintained, maintained_enabled);
    return sp;
}

void OutcomeSpaces::set_bounds(Subspace s, const Bounds& b) {
    for (std::size_t d = 0; d < dimension(s); ++d) {
        if (!std::isfinite(b.lower[d]) || !std::isfinite(b.upper[d]) || !(b.lower[d] < b.upper[d])) {
            throw std::invalid_argument("degenerate bounds for " + subspace_name(s));
        }
    }
    bounds_[index(s)] = b;
}

std::vector<Subspace> OutcomeSpaces::enabled_list() const {
    std::vector<Subspace> out;
    for (std::size_t i = 0; i < kSubspaceCount; ++i) {
        if (enabled_[i]) out.push_back(subspace_at(i));
    }
    return out;
}

Coords OutcomeSpaces::normalize(const Outcome& o) const {
    const Bounds& b = bounds(o.space);
    Coords u{};
    for (std::size_t d = 0; d < o.dim(); ++d) {
        u[d] = std::clamp((o.coords[d] - b.lower[d]) / (b.upper[d] - b.lower[d]), 0.0, 1.0);
    }
    return u;
}

Outcome OutcomeSpaces::denormalize(Subspace s, const Coords& unit) const {
    const Bounds& b = bounds(s);
    Outcome o;
    o.space = s;
    for (std::size_t d = 0; d < dimension(s); ++d) {
        o.coords[d] = b.lower[d] + unit[d] * (b.upper[d] - b.lower[d]);
    }
    return o;
}

double OutcomeSpaces::distance(const Outcome& a, const Outcome& b) const {
    if (a.space != b.space) {
        throw SubspaceMismatch("distance between " + subspace_name(a.space) + " and " +
                               subspace_name(b.space));
    }
    const Coords ua = normalize(a);
    const Coords ub = normalize(b);
    double sum = 0.0;
    for (std::size_t d = 0; d < a.dim(); ++d) {
        const double diff = ua[d] - ub[d];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double perf(double distance, std::size_t length, double gamma) {
    return distance * std::pow(gamma, static_cast<double>(length));
}

double perf(const OutcomeSpaces& spaces, const Outcome& reached, const Outcome& goal,
            std::size_t length, double gamma) {
    return perf(spaces.distance(reached, goal), length, gamma);
}

std::vector<ReachedOutcome> extract_outcomes(std::span<const StepEvents> events,
                                             const OutcomeSpaces& spaces) {
    std::vector<ReachedOutcome> out;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const StepEvents& ev = events[k];
        const std::size_t len = k + 1;
        if (ev.blocked) continue;
        if (ev.touch && spaces.enabled(Subspace::touch)) {
            out.push_back({Outcome::make(Subspace::touch, {ev.touch->x, ev.touch->y}), len});
        }
        if (ev.moved_object) {
            const int obj = *ev.moved_object;
            const Subspace s = obj == kBlue ? Subspace::blue : Subspace::green;
            if (spaces.enabled(s)) {
                out.push_back({Outcome::make(s, {ev.objects[obj].x, ev.objects[obj].y}), len});
            }
            if (ev.moved[kBlue] && ev.moved[kGreen] && spaces.enabled(Subspace::both)) {
                const Vec2 b = ev.objects[kBlue], g = ev.objects[kGreen];
                out.push_back({Outcome::make(Subspace::both, {b.x, b.y, g.x, g.y}), len});
            }
        }
        if (ev.burst && spaces.enabled(Subspace::burst)) {
            out.push_back({Outcome::make(Subspace::burst,
                                         {ev.burst->frequency, ev.burst->level, ev.burst->rhythm}),
                           len});
        }
        if (ev.maintained && spaces.enabled(Subspace::maintained)) {
            const SoundParams& m = *ev.maintained;
            out.push_back({Outcome::make(Subspace::maintained,
                                         {m.frequency, m.level, m.rhythm, m.duration.value_or(0.0)}),
                           len});
        }
    }
    return out;
}

std::vector<Outcome> sample_testbench(const OutcomeSpaces& spaces, std::uint64_t seed,
                                      const std::array<std::size_t, kSubspaceCount>& counts,
                                      std::span<const Outcome> exclude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Outcome> out;
    for (Subspace s : spaces.enabled_list()) {
        for (std::size_t i = 0; i < counts[index(s)]; ++i) {
            for (;;) {
                Coords u{};
                for (std::size_t d = 0; d < dimension(s); ++d) u[d] = unit(rng);
                const Outcome goal = spaces.denormalize(s, u);
                const bool clash = std::any_of(exclude.begin(), exclude.end(), [&](const Outcome& e) {
                    return e.space == s && spaces.distance(e, goal) < 1e-9;
                });
                if (!clash) {
                    out.push_back(goal);
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace sgim
