#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgim/table.hpp"

namespace sgim {

/// The six outcome subspaces, ordered by their level in the task hierarchy.
enum class Subspace : std::uint8_t {
    touch = 0,       // (x0, y0)
    blue = 1,        // (x1, y1)
    green = 2,       // (x2, y2)
    both = 3,        // (x1, y1, x2, y2)
    burst = 4,       // (f, l, b)
    maintained = 5,  // (f, l, b, t)
};

inline constexpr std::size_t kSubspaceCount = 6;
inline constexpr std::size_t kMaxOutcomeDim = 4;

constexpr std::size_t dimension(Subspace s) {
    constexpr std::array<std::size_t, kSubspaceCount> dims{2, 2, 2, 4, 3, 4};
    return dims[static_cast<std::size_t>(s)];
}

constexpr std::size_t index(Subspace s) { return static_cast<std::size_t>(s); }
constexpr Subspace subspace_at(std::size_t i) { return static_cast<Subspace>(i); }

/// "O0" .. "O5"
std::string subspace_name(Subspace s);
Subspace parse_subspace(const std::string& name);

using Coords = std::array<double, kMaxOutcomeDim>;

struct Outcome {
    Subspace space = Subspace::touch;
    Coords coords{};  // only the first dimension(space) entries are meaningful

    std::size_t dim() const { return dimension(space); }
    std::span<const double> values() const { return {coords.data(), dim()}; }

    static Outcome make(Subspace s, std::initializer_list<double> values);
    friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct ProceduralSpace {
    Subspace first = Subspace::touch;
    Subspace second = Subspace::touch;

    std::string name() const;  // "O1,O2"
    friend auto operator<=>(const ProceduralSpace&, const ProceduralSpace&) = default;
};

/// Ordered pair of sub-goals: reach `first`, then `second`.
struct Procedure {
    Outcome first;
    Outcome second;

    ProceduralSpace space() const { return {first.space, second.space}; }
    friend bool operator==(const Procedure&, const Procedure&) = default;
};

struct Bounds {
    Coords lower{};
    Coords upper{};
};

class SubspaceMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-subspace normalisation bounds plus the enabled set.
class OutcomeSpaces {
public:
    OutcomeSpaces();
    /// Positions use the table rectangle; f, l in [-1, 1]; b in [0.05, 1]; t in [0, 1].
    static OutcomeSpaces for_table(const TableConfig& table, bool maintained_enabled);

    const Bounds& bounds(Subspace s) const { return bounds_[index(s)]; }
    void set_bounds(Subspace s, const Bounds& b);
    bool enabled(Subspace s) const { return enabled_[index(s)]; }
    void set_enabled(Subspace s, bool on) { enabled_[index(s)] = on; }
    std::vector<Subspace> enabled_list() const;

    /// Per-dimension normalised coordinates, clamped into [0, 1].
    Coords normalize(const Outcome& o) const;
    Outcome denormalize(Subspace s, const Coords& unit) const;

    /// Euclidean distance between normalised coordinates. Throws on mismatch.
    double distance(const Outcome& a, const Outcome& b) const;

private:
    std::array<Bounds, kSubspaceCount> bounds_{};
    std::array<bool, kSubspaceCount> enabled_{};
};

/// Complexity-penalised error d * gamma^n.
double perf(double distance, std::size_t length, double gamma);
double perf(const OutcomeSpaces& spaces, const Outcome& reached, const Outcome& goal,
            std::size_t length, double gamma);

/// An outcome observed at the end of primitive `length` (1-based), i.e.
/// produced by the length-`length` prefix of the executed sequence.
struct ReachedOutcome {
    Outcome outcome;
    std::size_t length = 0;

    friend bool operator==(const ReachedOutcome&, const ReachedOutcome&) = default;
};

/// Turns per-primitive table events into typed outcomes at every boundary
/// where the defining event holds. Object positions are recorded whenever an
/// object moved during that primitive.
std::vector<ReachedOutcome> extract_outcomes(std::span<const StepEvents> events,
                                             const OutcomeSpaces& spaces);

/// Uniform goals inside each enabled subspace's bounds, in subspace order.
/// Goals closer than 1e-9 (normalised) to an excluded outcome are redrawn.
std::vector<Outcome> sample_testbench(const OutcomeSpaces& spaces, std::uint64_t seed,
                                      const std::array<std::size_t, kSubspaceCount>& counts,
                                      std::span<const Outcome> exclude = {});

}  // namespace sgim
