#include "irtens/experiment.hpp"

#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

namespace irtens {

DetectorConfig resolve_detectors(const RunConfig& cfg, std::size_t n_obs) {
    switch (cfg.regime) {
        case Regime::t1: return DetectorConfig::t1();
        case Regime::t2: return DetectorConfig::t2(n_obs);
        case Regime::custom: return cfg.detectors;
    }
    throw std::invalid_argument("unknown regime");
}

std::vector<std::pair<std::string, double>> evaluate_dataset(const LabeledDataset& ds,
                                                             const RunConfig& cfg,
                                                             Warnings* warnings) {
    if (!ds.has_labels())
        throw std::invalid_argument("evaluate_dataset needs ground-truth labels");
    const ScoreMatrix scores = run_all(ds, resolve_detectors(cfg, ds.size()), warnings);

    GreedyConfig greedy_cfg;
    greedy_cfg.kappa = cfg.greedy_kappa;
    if (greedy_cfg.kappa == 0) {
        std::size_t anomalies = 0;
        for (int l : ds.labels) anomalies += l;
        greedy_cfg.kappa = std::max<std::size_t>(anomalies, 1);
    }
    greedy_cfg.kappa_lo = cfg.greedy_kappa_lo;
    greedy_cfg.kappa_hi = std::min(cfg.greedy_kappa_hi, ds.size() - 1);
    greedy_cfg.kappa_lo = std::min(greedy_cfg.kappa_lo, greedy_cfg.kappa_hi);

    const std::vector<EnsembleResult> results =
        run_all_combiners(scores, greedy_cfg, cfg.epsilon, cfg.irt, warnings);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(results.size());
    for (const EnsembleResult& r : results)
        out.emplace_back(r.method, auc(r.scores, ds.labels));
    return out;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const RunConfig& cfg,
                                Warnings* warnings) {
    if (spec.iterations < 1 || spec.repetitions < 1)
        throw std::invalid_argument("iterations and repetitions must be >= 1");
    const int n_iter = spec.experiment == Experiment::example ? 1 : spec.iterations;
    const int n_cells = n_iter * spec.repetitions;

    std::vector<std::vector<std::pair<std::string, double>>> cell_results(n_cells);
    std::vector<Warnings> cell_warnings(n_cells);
    std::vector<std::string> cell_errors(n_cells);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int cell = next.fetch_add(1); cell < n_cells; cell = next.fetch_add(1)) {
            const int iteration = cell / spec.repetitions + 1;
            const int repetition = cell % spec.repetitions + 1;
            try {
                const LabeledDataset ds =
                    generate(spec.experiment, iteration,
                             stream_seed(spec.seed, spec.experiment, iteration, repetition));
                cell_results[cell] = evaluate_dataset(ds, cfg, &cell_warnings[cell]);
            } catch (const std::exception& e) {
                cell_errors[cell] = e.what();
            }
        }
    };

    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, n_cells));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    ExperimentReport report;
    report.rows.reserve(static_cast<std::size_t>(n_cells) * 7);
    const std::string name = experiment_name(spec.experiment);
    for (int cell = 0; cell < n_cells; ++cell) {
        const int iteration = cell / spec.repetitions + 1;
        const int repetition = cell % spec.repetitions + 1;
        if (!cell_errors[cell].empty())
            throw std::runtime_error(name + " iteration " + std::to_string(iteration) +
                                     " repetition " + std::to_string(repetition) +
                                     " failed: " + cell_errors[cell]);
        for (std::string& w : cell_warnings[cell]) warn(warnings, std::move(w));
        for (const auto& [method, value] : cell_results[cell])
            report.rows.push_back(ReportRow{name, iteration, repetition, method, value});
    }
    return report;
}

namespace {

// t_test_paired_diff rejects constant nonzero diffs; for reporting, map that
// degenerate case to the limiting p-value instead.
PairedDiffTest paired_test(const std::string& method, int iteration,
                           const std::vector<double>& diffs) {
    PairedDiffTest out;
    out.comparison = "IRT - " + method;
    out.iteration = iteration;
    out.mean_diff = mean(diffs);
    if (sample_sd(diffs) == 0.0 && out.mean_diff != 0.0) {
        const double inf = std::numeric_limits<double>::infinity();
        out.test = out.mean_diff > 0.0 ? TTestResult{inf, 0.0, 0.0}
                                       : TTestResult{-inf, 1.0, 0.0};
    } else {
        out.test = t_test_paired_diff(diffs);
    }
    return out;
}

}  // namespace

std::vector<PairedDiffTest> irt_paired_tests(const ExperimentReport& report) {
    std::vector<PairedDiffTest> out;
    const std::vector<double> irt = report.cell_values("IRT");
    for (const std::string& method : report.methods()) {
        if (method == "IRT") continue;
        const std::vector<double> other = report.cell_values(method);
        if (other.size() != irt.size() || irt.size() < 2) continue;
        std::vector<double> diffs(irt.size());
        for (std::size_t i = 0; i < irt.size(); ++i) diffs[i] = irt[i] - other[i];
        out.push_back(paired_test(method, 0, diffs));
    }
    const int reps = static_cast<int>(irt.size()) / std::max<int>(1, report.iterations().size());
    for (std::size_t it = 0; it < report.iterations().size(); ++it) {
        for (const std::string& method : report.methods()) {
            if (method == "IRT") continue;
            const std::vector<double> other = report.cell_values(method);
            if (other.size() != irt.size()) continue;
            std::vector<double> diffs;
            for (int r = 0; r < reps; ++r) {
                const std::size_t cell = it * reps + r;
                diffs.push_back(irt[cell] - other[cell]);
            }
            if (diffs.size() < 2) continue;
            out.push_back(paired_test(method, report.iterations()[it], diffs));
        }
    }
    return out;
}

}  // namespace irtens
