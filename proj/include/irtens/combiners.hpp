#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "irtens/affinity.hpp"
#include "irtens/core.hpp"
#include "irtens/irt.hpp"

namespace irtens {

/// Expected anomaly count for the Greedy ensemble and the inclusive range
/// for its averaged variant.
struct GreedyConfig {
    std::size_t kappa = 5;
    std::size_t kappa_lo = 1;
    std::size_t kappa_hi = 10;
};

inline constexpr std::array<std::string_view, 7> kEnsembleNames = {
    "IRT", "Average", "Greedy", "Greedy-Avg", "ICWA", "Max", "Thresh"};

// All combiners normalize the score matrix internally.

/// Row-wise mean of normalized columns.
EnsembleResult average(const ScoreMatrix& m);

/// Row-wise max of normalized columns.
EnsembleResult maximum(const ScoreMatrix& m);

/// Per observation, sum of normalized scores strictly above their column mean.
EnsembleResult thresh(const ScoreMatrix& m);

/// Correlation-driven selection against a pseudo-target built from the
/// top-kappa row means: seed with the best-correlated detector, then accept
/// further detectors (scanned in decreasing correlation order) whenever the
/// ensemble mean's correlation to the target does not decrease.
EnsembleResult greedy(const ScoreMatrix& m, const GreedyConfig& cfg,
                      Warnings* warnings = nullptr);

/// Mean of greedy outputs for kappa over [kappa_lo, kappa_hi].
EnsembleResult greedy_avg(const ScoreMatrix& m, const GreedyConfig& cfg,
                          Warnings* warnings = nullptr);

/// Inverse cluster weighted average: detectors clustered by affinity
/// propagation over Pearson similarity (preference = median similarity),
/// then equal weight per cluster. Non-convergence falls back to the plain
/// average with a warning.
EnsembleResult icwa(const ScoreMatrix& m, const ApConfig& ap = {},
                    Warnings* warnings = nullptr);

/// The seven results in fixed kEnsembleNames order.
std::vector<EnsembleResult> run_all_combiners(const ScoreMatrix& m,
                                              const GreedyConfig& greedy_cfg,
                                              double epsilon = kDefaultEpsilon,
                                              const FitConfig& irt_cfg = {},
                                              Warnings* warnings = nullptr);

}  // namespace irtens
