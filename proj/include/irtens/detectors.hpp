#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "irtens/core.hpp"
#include "irtens/neighbors.hpp"

namespace irtens {

/// Neighborhood sizes for the detectors. KNN-AGG and KDEOS use the
/// [k_min, k_max] range, the others use k.
struct DetectorConfig {
    std::size_t k = 5;
    std::size_t k_min = 5;
    std::size_t k_max = 10;

    /// Default small-k regime: k = k_min = 5, k_max = 10.
    static DetectorConfig t1();
    /// Large-k regime: k = k_min = max(ceil(N/10), 50), k_max = k + 10,
    /// clamped to N-1 on small datasets.
    static DetectorConfig t2(std::size_t n_obs);

    /// Largest neighbor list any detector will ask for.
    std::size_t required_k() const { return std::max(k, k_max); }
    void validate(std::size_t n_obs) const;
};

inline constexpr std::array<std::string_view, 7> kDetectorNames = {
    "KNN-AGG", "LOF", "COF", "INFLO", "KDEOS", "LDF", "LDOF"};

// Each scorer returns one score per point, larger = more anomalous.

/// Sum of k-th neighbor distances for k in [k_min, k_max].
std::vector<double> knn_agg(const NeighborIndex& idx, const DetectorConfig& cfg);

/// Local outlier factor at MinPts = k (reachability-based density ratio).
std::vector<double> lof(const NeighborIndex& idx, const DetectorConfig& cfg);

/// Connectivity-based outlier factor: average chaining distance relative to
/// the neighborhood's.
std::vector<double> cof(const NeighborIndex& idx, const DetectorConfig& cfg);

/// Influenced outlierness: mean density of the influence space (k-NN union
/// reverse k-NN) over the point's own density.
std::vector<double> inflo(const NeighborIndex& idx, const DetectorConfig& cfg);

/// Kernel density outlier score: neighborhood z-score of the negated mean
/// Gaussian-kernel density over the k range, bandwidth = k-distance.
std::vector<double> kdeos(const NeighborIndex& idx, const DetectorConfig& cfg);

/// Local density factor: kernel-density LOF variant with reachability
/// smoothing; h is the bandwidth scale, c bounds the score at 1/c.
std::vector<double> ldf(const NeighborIndex& idx, const DetectorConfig& cfg,
                        double h = 1.0, double c = 0.1);

/// Local distance-based outlier factor: mean neighbor distance over mean
/// pairwise distance among the neighbors.
std::vector<double> ldof(const NeighborIndex& idx, const DetectorConfig& cfg);

/// Runs all seven detectors; columns in kDetectorNames order. A detector
/// failing on degenerate geometry yields a zero column plus a warning.
ScoreMatrix run_all(const LabeledDataset& ds, const DetectorConfig& cfg,
                    Warnings* warnings = nullptr);

}  // namespace irtens
