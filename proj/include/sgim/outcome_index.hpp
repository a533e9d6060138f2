/**
 * @file outcome_index.hpp
 * @brief k-nearest retrieval under the complexity-penalised metric d * gamma^n.
 *
 * Points live in normalised outcome coordinates and carry the length n of
 * the action that produced them. Below `tree_threshold` points every query
 * is a linear scan; above it a kd-tree covers a prefix of the points and the
 * unindexed tail is scanned. Both paths compute distances and penalties with
 * the same arithmetic and break ties by insertion order, so their results
 * are identical.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "sgim/outcome.hpp"

namespace sgim {

struct Neighbour {
    std::size_t id = 0;
    double distance = 0.0;
    double perf = 0.0;

    friend bool operator==(const Neighbour&, const Neighbour&) = default;
};

class OutcomeIndex {
public:
    using Filter = std::function<bool(std::size_t id)>;

    explicit OutcomeIndex(std::size_t dim, std::size_t tree_threshold = 10000,
                          std::size_t leaf_size = 16);

    std::size_t insert(const Coords& unit, std::size_t length);

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return dim_; }
    const Coords& point(std::size_t id) const { return points_[id]; }
    std::size_t length(std::size_t id) const { return lengths_[id]; }
    bool tree_active() const { return built_ > 0; }

    /// Up to k neighbours ascending by (perf, id). `filter` rejects ids.
    std::vector<Neighbour> nearest(const Coords& q, std::size_t k, double gamma,
                                   const Filter& filter = {}) const;
    /// Serial reference: brute-force scan over every point.
    std::vector<Neighbour> nearest_linear(const Coords& q, std::size_t k, double gamma,
                                          const Filter& filter = {}) const;

private:
    struct Node {
        Coords lo{};
        Coords hi{};
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t min_length = 0;
    };

    class Collector;

    double point_distance(const Coords& q, std::size_t id) const;
    double box_distance(const Coords& q, const Node& n) const;
    std::vector<double> penalties(double gamma) const;
    void rebuild();
    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, const Coords& q, const std::vector<double>& pen,
                const Filter& filter, Collector& out) const;

    std::size_t dim_;
    std::size_t tree_threshold_;
    std::size_t leaf_size_;
    std::size_t max_length_ = 0;
    std::vector<Coords> points_;
    std::vector<std::uint32_t> lengths_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
    std::size_t built_ = 0;
};

}  // namespace sgim
