#include "sgim/outcome_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sgim {

namespace {

bool ranks_before(const Neighbour& a, const Neighbour& b) {
    return a.perf < b.perf || (a.perf == b.perf && a.id < b.id);
}

}  // namespace

// Bounded max-heap keeping the k best candidates seen so far.
class OutcomeIndex::Collector {
public:
    explicit Collector(std::size_t k) : k_(k) { heap_.reserve(k + 1); }

    bool full() const { return heap_.size() >= k_; }
    double worst_perf() const { return heap_.front().perf; }

    void offer(const Neighbour& n) {
        if (k_ == 0) return;
        if (!full()) {
            heap_.push_back(n);
            std::push_heap(heap_.begin(), heap_.end(), ranks_before);
        } else if (ranks_before(n, heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), ranks_before);
            heap_.back() = n;
            std::push_heap(heap_.begin(), heap_.end(), ranks_before);
        }
    }

    std::vector<Neighbour> sorted() && {
        std::sort_heap(heap_.begin(), heap_.end(), ranks_before);
        return std::move(heap_);
    }

private:
    std::size_t k_;
    std::vector<Neighbour> heap_;
};

OutcomeIndex::OutcomeIndex(std::size_t dim, std::size_t tree_threshold, std::size_t leaf_size)
    : dim_(dim), tree_threshold_(tree_threshold), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {}

std::size_t OutcomeIndex::insert(const Coords& unit, std::size_t length) {
    points_.push_back(unit);
    lengths_.push_back(static_cast<std::uint32_t>(length));
    max_length_ = std::max(max_length_, length);
    if (points_.size() >= tree_threshold_ && points_.size() >= 2 * built_) rebuild();
    return points_.size() - 1;
}

double OutcomeIndex::point_distance(const Coords& q, std::size_t id) const {
    const Coords& p = points_[id];
    double sum = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        const double diff = q[d] - p[d];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double OutcomeIndex::box_distance(const Coords& q, const Node& n) const {
    double sum = 0.0;
    for (std::size_t d = 0; d < dim_; ++d) {
        double gap = 0.0;
        if (q[d] < n.lo[d]) gap = n.lo[d] - q[d];
        else if (q[d] > n.hi[d]) gap = q[d] - n.hi[d];
        sum += gap * gap;
    }
    return std::sqrt(sum);
}

std::vector<double> OutcomeIndex::penalties(double gamma) const {
    std::vector<double> pen(max_length_ + 1);
    for (std::size_t n = 0; n <= max_length_; ++n) pen[n] = std::pow(gamma, static_cast<double>(n));
    return pen;
}

std::vector<Neighbour> OutcomeIndex::nearest_linear(const Coords& q, std::size_t k, double gamma,
                                                    const Filter& filter) const {
    const auto pen = penalties(gamma);
    Collector out(k);
    for (std::size_t id = 0; id < points_.size(); ++id) {
        if (filter && !filter(id)) continue;
        const double d = point_distance(q, id);
        out.offer({id, d, d * pen[lengths_[id]]});
    }
    return std::move(out).sorted();
}

std::vector<Neighbour> OutcomeIndex::nearest(const Coords& q, std::size_t k, double gamma,
                                             const Filter& filter) const {
    if (built_ == 0) return nearest_linear(q, k, gamma, filter);
    const auto pen = penalties(gamma);
    Collector out(k);
    search(0, q, pen, filter, out);
    for (std::size_t id = built_; id < points_.size(); ++id) {
        if (filter && !filter(id)) continue;
        const double d = point_distance(q, id);
        out.offer({id, d, d * pen[lengths_[id]]});
    }
    return std::move(out).sorted();
}

void OutcomeIndex::search(std::int32_t idx, const Coords& q, const std::vector<double>& pen,
                          const Filter& filter, Collector& out) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    if (out.full()) {
        // Slightly shrunk bound so rounding never prunes a tie.
        const double bound = box_distance(q, n) * pen[n.min_length] * (1.0 - 1e-12);
        if (bound > out.worst_perf()) return;
    }
    if (n.left < 0) {
        for (std::uint32_t i = n.begin; i < n.end; ++i) {
            const std::size_t id = order_[i];
            if (filter && !filter(id)) continue;
            const double d = point_distance(q, id);
            out.offer({id, d, d * pen[lengths_[id]]});
        }
        return;
    }
    const Node& l = nodes_[static_cast<std::size_t>(n.left)];
    const Node& r = nodes_[static_cast<std::size_t>(n.right)];
    if (box_distance(q, l) <= box_distance(q, r)) {
        search(n.left, q, pen, filter, out);
        search(n.right, q, pen, filter, out);
    } else {
        search(n.right, q, pen, filter, out);
        search(n.left, q, pen, filter, out);
    }
}

void OutcomeIndex::rebuild() {
    built_ = points_.size();
    order_.resize(built_);
    std::iota(order_.begin(), order_.end(), 0u);
    nodes_.clear();
    nodes_.reserve(2 * built_ / leaf_size_ + 2);
    build(0, static_cast<std::uint32_t>(built_));
}

std::int32_t OutcomeIndex::build(std::uint32_t begin, std::uint32_t end) {
    const auto idx = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo.fill(0.0);
    node.hi.fill(0.0);
    for (std::size_t d = 0; d < dim_; ++d) {
        node.lo[d] = points_[order_[begin]][d];
        node.hi[d] = node.lo[d];
    }
    node.min_length = lengths_[order_[begin]];
    for (std::uint32_t i = begin; i < end; ++i) {
        const Coords& p = points_[order_[i]];
        for (std::size_t d = 0; d < dim_; ++d) {
            node.lo[d] = std::min(node.lo[d], p[d]);
            node.hi[d] = std::max(node.hi[d], p[d]);
        }
        node.min_length = std::min(node.min_length, lengths_[order_[i]]);
    }
    if (end - begin > leaf_size_) {
        std::size_t split = 0;
        for (std::size_t d = 1; d < dim_; ++d) {
            if (node.hi[d] - node.lo[d] > node.hi[split] - node.lo[split]) split = d;
        }
        if (node.hi[split] > node.lo[split]) {
            const std::uint32_t mid = begin + (end - begin) / 2;
            std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                             [&](std::uint32_t a, std::uint32_t b) {
                                 return points_[a][split] < points_[b][split];
                             });
            node.left = build(begin, mid);
            node.right = build(mid, end);
        }
    }
    nodes_[static_cast<std::size_t>(idx)] = node;
    return idx;
}

}  // namespace sgim
