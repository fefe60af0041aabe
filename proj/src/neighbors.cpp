#include "irtens/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace irtens {

namespace {

double squared_dist(const Matrix& pts, std::size_t a, std::size_t b) {
    const double* pa = pts.row_ptr(a);
    const double* pb = pts.row_ptr(b);
    double s = 0.0;
    for (std::size_t c = 0; c < pts.cols(); ++c) {
        const double diff = pa[c] - pb[c];
        s += diff * diff;
    }
    return s;
}

struct Candidate {
    double d2;
    std::uint32_t id;
    bool operator<(const Candidate& o) const {
        return d2 != o.d2 ? d2 < o.d2 : id < o.id;
    }
};

void brute_force_lists(const Matrix& pts, std::size_t k, std::size_t query,
                       std::vector<Candidate>& scratch, Candidate* out) {
    scratch.clear();
    for (std::size_t j = 0; j < pts.rows(); ++j) {
        if (j == query) continue;
        scratch.push_back({squared_dist(pts, query, j), static_cast<std::uint32_t>(j)});
    }
    std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end());
    std::copy(scratch.begin(), scratch.begin() + k, out);
}

// Small exact kd-tree; produces the same (distance, index) ordering as the
// brute-force path.
class KdTree {
public:
    explicit KdTree(const Matrix& pts) : pts_(pts), nodes_() {
        std::vector<std::uint32_t> idx(pts.rows());
        std::iota(idx.begin(), idx.end(), 0u);
        nodes_.reserve(2 * pts.rows());
        root_ = build(idx.begin(), idx.end(), 0);
    }

    void query(std::size_t q, std::size_t k, std::vector<Candidate>& heap) const {
        heap.clear();
        search(root_, q, k, heap);
        std::sort_heap(heap.begin(), heap.end());
    }

private:
    struct Node {
        std::uint32_t point;
        std::size_t axis;
        int left = -1, right = -1;
    };

    using Iter = std::vector<std::uint32_t>::iterator;

    int build(Iter first, Iter last, std::size_t depth) {
        if (first == last) return -1;
        const std::size_t axis = depth % pts_.cols();
        Iter mid = first + (last - first) / 2;
        std::nth_element(first, mid, last, [&](std::uint32_t a, std::uint32_t b) {
            const double va = pts_(a, axis), vb = pts_(b, axis);
            return va != vb ? va < vb : a < b;
        });
        Node node;
        node.point = *mid;
        node.axis = axis;
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(first, mid, depth + 1);
        const int right = build(mid + 1, last, depth + 1);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void consider(std::size_t q, std::uint32_t p, std::size_t k,
                  std::vector<Candidate>& heap) const {
        if (p == q) return;
        const Candidate c{squared_dist(pts_, q, p), p};
        if (heap.size() < k) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end());
        } else if (c < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end());
        }
    }

    void search(int node_id, std::size_t q, std::size_t k,
                std::vector<Candidate>& heap) const {
        if (node_id < 0) return;
        const Node& node = nodes_[node_id];
        consider(q, node.point, k, heap);
        const double delta = pts_(q, node.axis) - pts_(node.point, node.axis);
        const int near = delta < 0 ? node.left : node.right;
        const int far = delta < 0 ? node.right : node.left;
        search(near, q, k, heap);
        // The far side can still hold candidates on a distance tie, where the
        // lower point index must win; hence <= rather than <.
        if (heap.size() < k || delta * delta <= heap.front().d2) search(far, q, k, heap);
    }

    const Matrix& pts_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace

NeighborIndex NeighborIndex::build(const LabeledDataset& ds, std::size_t k_max,
                                   NeighborBuild method, Warnings* warnings) {
    const std::size_t n = ds.size();
    if (n < 2) throw std::invalid_argument("neighbor index needs at least 2 points");
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    if (k_max >= n) {
        warn(warnings, "k_max=" + std::to_string(k_max) + " clamped to N-1=" +
                           std::to_string(n - 1));
        k_max = n - 1;
    }

    NeighborIndex idx;
    idx.points_ = ds.features;
    idx.k_max_ = k_max;
    idx.ids_.resize(n * k_max);
    idx.dists_.resize(n * k_max);

    std::vector<Candidate> nearest(k_max);
    if (method == NeighborBuild::brute_force) {
        std::vector<Candidate> scratch;
        scratch.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            brute_force_lists(idx.points_, k_max, i, scratch, nearest.data());
            for (std::size_t k = 0; k < k_max; ++k) {
                idx.ids_[i * k_max + k] = nearest[k].id;
                idx.dists_[i * k_max + k] = std::sqrt(nearest[k].d2);
            }
        }
    } else {
        KdTree tree(idx.points_);
        std::vector<Candidate> heap;
        heap.reserve(k_max + 1);
        for (std::size_t i = 0; i < n; ++i) {
            tree.query(i, k_max, heap);
            for (std::size_t k = 0; k < k_max; ++k) {
                idx.ids_[i * k_max + k] = heap[k].id;
                idx.dists_[i * k_max + k] = std::sqrt(heap[k].d2);
            }
        }
    }
    return idx;
}

double NeighborIndex::knn_dist(std::size_t i, std::size_t k) const {
    if (k < 1 || k > k_max_)
        throw std::invalid_argument("k=" + std::to_string(k) + " outside [1, k_max=" +
                                    std::to_string(k_max_) + "]");
    return dists_[i * k_max_ + (k - 1)];
}

double NeighborIndex::dist(std::size_t a, std::size_t b) const {
    return std::sqrt(squared_dist(points_, a, b));
}

}  // namespace irtens
