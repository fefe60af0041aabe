#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "irtens/matrix.hpp"
#include "irtens/stats.hpp"

namespace irtens {

// Clamp margin for min-max scaling; keeps |logit| <= ln(199).
inline constexpr double kDefaultEpsilon = 0.005;

/// Feature matrix (N x d) with optional 0/1 anomaly labels.
struct LabeledDataset {
    Matrix features;
    std::vector<int> labels;  // empty, or one 0/1 flag per observation
    std::string name;

    std::size_t size() const { return features.rows(); }
    std::size_t dims() const { return features.cols(); }
    bool has_labels() const { return !labels.empty(); }
};

/// Raw anomaly scores: one row per observation, one column per detector.
struct ScoreMatrix {
    Matrix scores;
    std::vector<std::string> detector_names;

    std::size_t n_observations() const { return scores.rows(); }
    std::size_t n_detectors() const { return scores.cols(); }
};

/// Per-column min-max scaled scores, every entry in [epsilon, 1-epsilon].
struct NormalizedScores {
    Matrix values;
    double epsilon = kDefaultEpsilon;
};

/// z = ln(x / (1-x)) of normalized scores.
struct LogitScores {
    Matrix values;
};

/// One ensemble score per observation plus provenance.
struct EnsembleResult {
    std::string method;
    std::vector<double> scores;
    std::map<std::string, std::string> params;
};

// Validating factories. Throw std::invalid_argument on contract violations.
LabeledDataset make_dataset(Matrix features, std::vector<int> labels = {},
                            std::string name = {});
ScoreMatrix make_score_matrix(Matrix scores, std::vector<std::string> detector_names);

/// Min-max scale each column onto [epsilon, 1-epsilon], preserving ranks.
/// Constant columns map to all 0.5.
NormalizedScores normalize_columns(const ScoreMatrix& m, double epsilon = kDefaultEpsilon);

/// Elementwise logit of normalized scores.
LogitScores to_logit(const NormalizedScores& x);

inline double logit(double x) { return std::log(x / (1.0 - x)); }
inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace irtens
