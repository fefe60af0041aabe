#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "irtens/core.hpp"

namespace irtens {

/// Rank-based (Mann-Whitney) AUC; ties contribute 1/2. Needs at least one
/// positive and one negative label. Computed from integer doubled midranks,
/// so it equals the all-pairs definition exactly.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
};

/// One-sample, one-sided t-test of mean(diffs) > 0. All-zero diffs give
/// t = 0, p = 0.5; any other zero-variance input is rejected.
TTestResult t_test_paired_diff(const std::vector<double>& diffs);

/// Pooled-variance two-sample one-sided t-test of mean(a) > mean(b).
TTestResult t_test_two_sample(const std::vector<double>& a, const std::vector<double>& b);

/// Lower CDF of Student's t with nu degrees of freedom (incomplete-beta
/// evaluation, absolute accuracy ~1e-10).
double student_t_cdf(double t, double nu);

/// One AUC measurement: `group` is the dataset source (or experiment),
/// `dataset` the individual dataset (or iteration x repetition cell).
struct AucRecord {
    std::string group;
    std::string dataset;
    std::string method;
    double auc = 0.0;
};

struct Top2Result {
    std::string group;
    std::string best;
    std::string second;
    double mean_best = 0.0;
    double mean_second = 0.0;
    TTestResult test;
    bool significant = false;
};

/// Per group: rank methods by mean AUC (ties toward earlier first appearance)
/// and test best against second at alpha = 0.05.
std::vector<Top2Result> top2_significance(const std::vector<AucRecord>& records,
                                          double alpha = 0.05);

struct FpSimResult {
    std::vector<int> counts;  // false positives per repetition
    double mean = 0.0;
    double sd = 0.0;
};

/// Calibration of the top-2 test: simulate equal performance for all methods
/// and count spurious significances per repetition.
FpSimResult false_positive_simulation(std::size_t n_sources, std::size_t n_datasets,
                                      std::size_t n_methods, std::size_t reps,
                                      std::uint64_t seed, double alpha = 0.05);

/// Entries of the detector-score Pearson correlation matrix strictly above
/// each threshold, diagonal excluded (symmetric pairs count twice).
std::vector<std::size_t> correlation_counts(const ScoreMatrix& m,
                                            const std::vector<double>& thresholds = {0.7, 0.8,
                                                                                     0.9});

/// Share of datasets on which each method is best (ties to the earliest
/// method in `method_order`). Proportions sum to 1.
std::vector<std::pair<std::string, double>> best_method_proportions(
    const std::vector<AucRecord>& records, const std::vector<std::string>& method_order);

// ---------------------------------------------------------------------------

struct ReportRow {
    std::string experiment;
    int iteration = 1;
    int repetition = 1;
    std::string method;
    double auc = 0.0;
};

/// Per-cell AUC table for the iterated experiments.
struct ExperimentReport {
    std::vector<ReportRow> rows;

    std::vector<std::string> methods() const;     // in first-appearance order
    std::vector<int> iterations() const;          // sorted, unique
    double mean_auc(const std::string& method) const;
    double mean_auc(const std::string& method, int iteration) const;
    double sd_auc(const std::string& method, int iteration) const;
    /// AUC values of one method over all cells, ordered by (iteration, repetition).
    std::vector<double> cell_values(const std::string& method) const;
    std::vector<AucRecord> as_records() const;  // group = experiment, dataset = cell
};

void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report);
void write_summary_csv(const std::filesystem::path& path, const ExperimentReport& report);

}  // namespace irtens
