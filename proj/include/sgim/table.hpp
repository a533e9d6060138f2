/**
 * @file table.hpp
 * @brief Interactive table: two pick-and-place disks, blocking, sounds.
 *
 * The table state is refreshed after every primitive. A primitive that ends
 * on an object grasps it; the next primitive carries it and releases it at
 * its own endpoint. Any primitive whose tip path sweeps both disks is
 * cancelled. Once both objects have been moved a burst sound (f, l, b) is
 * emitted, and every later touch that does not move an object maintains it
 * for a duration t.
 */

#pragma once

#include <array>
#include <optional>
#include <span>

#include "sgim/geometry.hpp"

namespace sgim {

inline constexpr int kBlue = 0;
inline constexpr int kGreen = 1;

struct TableConfig {
    Vec2 origin{0.0, 0.0};
    double width = 1.0;
    double height = 1.0;
    double object_radius = 0.04;
    Vec2 blue_start{0.35, 0.65};
    Vec2 green_start{0.65, 0.65};

    double diagonal() const;
    bool contains(Vec2 p) const;
    Vec2 clamp(Vec2 p) const;
    std::array<Vec2, 4> corners() const;
    void validate() const;
};

struct SoundParams {
    double frequency = 0.0;  // f
    double level = 0.0;      // l
    double rhythm = 0.0;     // b
    std::optional<double> duration;  // t, maintained sounds only

    friend bool operator==(const SoundParams&, const SoundParams&) = default;
};

struct TableState {
    std::array<Vec2, 2> objects{};
    std::array<bool, 2> moved{};
    std::optional<int> held;  // object grasped by the previous primitive
    std::optional<SoundParams> burst;

    friend bool operator==(const TableState&, const TableState&) = default;
};

/// What one primitive did to the table.
struct StepEvents {
    bool blocked = false;
    std::optional<Vec2> touch;
    std::optional<int> moved_object;
    std::optional<SoundParams> burst;
    std::optional<SoundParams> maintained;
    std::array<Vec2, 2> objects{};  // positions after the step
    std::array<bool, 2> moved{};    // moved-flags after the step
};

struct StepResult {
    TableState state;
    StepEvents events;
};

TableState reset(const TableConfig& cfg);

StepResult step_primitive(const TableConfig& cfg, const TableState& state,
                          std::span<const Vec2> tip_path);

/// Burst sound for the current object placement. Separation below 2R is
/// clamped to 2R, which caps the level at 1.
SoundParams burst_sound(const TableConfig& cfg, const TableState& state);

/// Burst extended with t = d2 / D; empty when no burst has been produced.
std::optional<SoundParams> maintain_sound(const TableConfig& cfg, const TableState& state,
                                          Vec2 touch);

}  // namespace sgim
