#pragma once

#include <cstdint>
#include <span>

#include "irtens/core.hpp"

namespace irtens {

enum class NeighborBuild { brute_force, kd_tree };

// Exact k-nearest-neighbor lists under Euclidean distance, one list per
// point, sorted by (distance, point index). A point never lists itself.
class NeighborIndex {
public:
    static NeighborIndex build(const LabeledDataset& ds, std::size_t k_max,
                               NeighborBuild method = NeighborBuild::brute_force,
                               Warnings* warnings = nullptr);

    std::size_t size() const { return points_.rows(); }
    std::size_t dims() const { return points_.cols(); }
    std::size_t k_max() const { return k_max_; }

    std::span<const std::uint32_t> neighbors(std::size_t i) const {
        return {ids_.data() + i * k_max_, k_max_};
    }
    std::span<const double> distances(std::size_t i) const {
        return {dists_.data() + i * k_max_, k_max_};
    }

    /// Distance to the k-th nearest neighbor of point i (k is 1-based).
    double knn_dist(std::size_t i, std::size_t k) const;

    /// Euclidean distance between two points, computed on demand.
    double dist(std::size_t a, std::size_t b) const;

    const Matrix& points() const { return points_; }

private:
    Matrix points_;
    std::size_t k_max_ = 0;
    std::vector<std::uint32_t> ids_;  // N x k_max, row-major
    std::vector<double> dists_;
};

}  // namespace irtens
