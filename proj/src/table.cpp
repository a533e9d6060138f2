#include "sgim/table.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgim {

double TableConfig::diagonal() const { return std::hypot(width, height); }

bool TableConfig::contains(Vec2 p) const {
    return p.x >= origin.x && p.x <= origin.x + width && p.y >= origin.y &&
           p.y <= origin.y + height;
}

Vec2 TableConfig::clamp(Vec2 p) const {
    return {std::clamp(p.x, origin.x, origin.x + width),
            std::clamp(p.y, origin.y, origin.y + height)};
}

std::array<Vec2, 4> TableConfig::corners() const {
    return {origin, Vec2{origin.x + width, origin.y}, Vec2{origin.x, origin.y + height},
            Vec2{origin.x + width, origin.y + height}};
}

void TableConfig::validate() const {
    if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("table must have positive size");
    if (!(object_radius > 0.0)) throw std::invalid_argument("object radius must be positive");
    if (!contains(blue_start) || !contains(green_start)) {
        throw std::invalid_argument("initial object positions must lie on the table");
    }
}

TableState reset(const TableConfig& cfg) {
    TableState s;
    s.objects = {cfg.blue_start, cfg.green_start};
    return s;
}

namespace {

// Contact means reaching the disk from outside. A tip that starts on an
// object (just released it) and moves away does not touch it again.
bool path_hits(std::span<const Vec2> path, Vec2 centre, double radius) {
    std::size_t first_out = 0;
    while (first_out < path.size() && norm(path[first_out] - centre) <= radius) ++first_out;
    if (first_out == path.size()) return true;
    for (std::size_t i = first_out + 1; i < path.size(); ++i) {
        if (segment_distance(centre, path[i - 1], path[i]) <= radius) return true;
    }
    return false;
}

}  // namespace

StepResult step_primitive(const TableConfig& cfg, const TableState& state,
                          std::span<const Vec2> tip_path) {
    if (tip_path.empty()) throw std::invalid_argument("tip path must not be empty");
    const double r = cfg.object_radius;

    StepResult out{state, {}};
    StepEvents& ev = out.events;

    const bool carrying = state.held && norm(tip_path.front() - state.objects[*state.held]) <= r;
    const bool hit_blue = (carrying && *state.held == kBlue) || path_hits(tip_path, state.objects[kBlue], r);
    const bool hit_green = (carrying && *state.held == kGreen) || path_hits(tip_path, state.objects[kGreen], r);
    if (hit_blue && hit_green) {
        ev.blocked = true;
        ev.objects = state.objects;
        ev.moved = state.moved;
        return out;
    }

    TableState& next = out.state;
    const Vec2 end = tip_path.back();
    const bool both_before = state.moved[kBlue] && state.moved[kGreen];

    next.held.reset();
    if (carrying) {
        const int obj = *state.held;
        next.objects[obj] = cfg.clamp(end);
        next.moved[obj] = true;
        ev.moved_object = obj;
    } else {
        for (int obj : {kBlue, kGreen}) {
            if (norm(end - state.objects[obj]) <= r) next.held = obj;
        }
    }

    if (cfg.contains(end)) ev.touch = end;

    const bool both_after = next.moved[kBlue] && next.moved[kGreen];
    if (both_after && !both_before) {
        next.burst = burst_sound(cfg, next);
        ev.burst = next.burst;
    } else if (state.burst && ev.touch && !ev.moved_object) {
        ev.maintained = maintain_sound(cfg, next, *ev.touch);
    }

    ev.objects = next.objects;
    ev.moved = next.moved;
    return out;
}

SoundParams burst_sound(const TableConfig& cfg, const TableState& state) {
    const double diag = cfg.diagonal();
    const double r_min = 2.0 * cfg.object_radius;
    const Vec2 blue = state.objects[kBlue];
    const Vec2 rel = state.objects[kGreen] - blue;

    double d_min = diag;
    for (Vec2 c : cfg.corners()) d_min = std::min(d_min, norm(blue - c));
    const double radius = std::max(norm(rel), r_min);
    const double phi = std::atan2(rel.y, rel.x);

    SoundParams s;
    s.frequency = (diag / 4.0 - d_min) * 4.0 / diag;
    s.level = 1.0 - 2.0 * (std::log(radius) - std::log(r_min)) / (std::log(diag) - std::log(r_min));
    s.rhythm = (std::abs(phi) / std::numbers::pi) * 0.95 + 0.05;
    return s;
}

std::optional<SoundParams> maintain_sound(const TableConfig& cfg, const TableState& state,
                                          Vec2 touch) {
    if (!state.burst) return std::nullopt;
    SoundParams s = *state.burst;
    s.duration = norm(touch - state.objects[kGreen]) / cfg.diagonal();
    return s;
}

}  // namespace sgim
