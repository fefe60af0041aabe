#pragma once

#include <cstdint>

#include "irtens/combiners.hpp"
#include "irtens/detectors.hpp"
#include "irtens/evalstats.hpp"
#include "irtens/synthgen.hpp"

namespace irtens {

enum class Regime { t1, t2, custom };

struct RunConfig {
    Regime regime = Regime::t1;
    DetectorConfig detectors = DetectorConfig::t1();  // used when regime == custom
    std::size_t greedy_kappa = 0;                     // 0 = the dataset's true anomaly count
    std::size_t greedy_kappa_lo = 1;
    std::size_t greedy_kappa_hi = 10;
    double epsilon = kDefaultEpsilon;
    FitConfig irt;
    int threads = 0;  // 0 = hardware concurrency
};

DetectorConfig resolve_detectors(const RunConfig& cfg, std::size_t n_obs);

/// Ensemble AUCs for one labeled dataset: all 7 methods in fixed order.
std::vector<std::pair<std::string, double>> evaluate_dataset(const LabeledDataset& ds,
                                                             const RunConfig& cfg,
                                                             Warnings* warnings = nullptr);

/// Full grid (iterations x repetitions x 7 methods). Cells run in parallel;
/// the report is ordered and byte-stable regardless of thread count.
ExperimentReport run_experiment(const ExperimentSpec& spec, const RunConfig& cfg,
                                Warnings* warnings = nullptr);

struct PairedDiffTest {
    std::string comparison;  // e.g. "IRT - Average"
    int iteration = 0;       // 0 = pooled over all cells
    double mean_diff = 0.0;
    TTestResult test;
};

/// One-sided paired t-tests of IRT minus every other method, pooled over all
/// cells and additionally per iteration.
std::vector<PairedDiffTest> irt_paired_tests(const ExperimentReport& report);

}  // namespace irtens
