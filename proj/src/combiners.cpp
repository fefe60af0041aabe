#include "irtens/combiners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace irtens {

namespace {

std::vector<double> row_means(const Matrix& v) {
    std::vector<double> out(v.rows());
    for (std::size_t r = 0; r < v.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < v.cols(); ++c) s += v(r, c);
        out[r] = s / static_cast<double>(v.cols());
    }
    return out;
}

std::vector<double> mean_of_columns(const Matrix& v, const std::vector<std::size_t>& cols) {
    std::vector<double> out(v.rows(), 0.0);
    for (std::size_t r = 0; r < v.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c : cols) s += v(r, c);
        out[r] = s / static_cast<double>(cols.size());
    }
    return out;
}

// Pearson with zero-variance sides mapped to 0 (no usable signal).
double corr_or_zero(std::span<const double> a, std::span<const double> b) {
    const double r = pearson(a, b);
    return std::isnan(r) ? 0.0 : r;
}

std::string join_names(const ScoreMatrix& m, const std::vector<std::size_t>& cols) {
    std::string out;
    for (std::size_t c : cols) {
        if (!out.empty()) out += '+';
        out += c < m.detector_names.size() ? m.detector_names[c] : std::to_string(c);
    }
    return out;
}

}  // namespace

EnsembleResult average(const ScoreMatrix& m) {
    const NormalizedScores x = normalize_columns(m);
    return EnsembleResult{"Average", row_means(x.values), {}};
}

EnsembleResult maximum(const ScoreMatrix& m) {
    const NormalizedScores x = normalize_columns(m);
    std::vector<double> out(x.values.rows());
    for (std::size_t r = 0; r < x.values.rows(); ++r) {
        double best = x.values(r, 0);
        for (std::size_t c = 1; c < x.values.cols(); ++c) best = std::max(best, x.values(r, c));
        out[r] = best;
    }
    return EnsembleResult{"Max", std::move(out), {}};
}

EnsembleResult thresh(const ScoreMatrix& m) {
    const NormalizedScores x = normalize_columns(m);
    const std::size_t nr = x.values.rows(), nc = x.values.cols();
    std::vector<double> col_mean(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < nr; ++r) s += x.values(r, c);
        col_mean[c] = s / static_cast<double>(nr);
    }
    std::vector<double> out(nr, 0.0);
    for (std::size_t r = 0; r < nr; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < nc; ++c)
            if (x.values(r, c) > col_mean[c]) s += x.values(r, c);
        out[r] = s;
    }
    return EnsembleResult{"Thresh", std::move(out), {}};
}

EnsembleResult greedy(const ScoreMatrix& m, const GreedyConfig& cfg, Warnings* warnings) {
    const std::size_t n_obs = m.n_observations();
    const std::size_t n_det = m.n_detectors();
    if (cfg.kappa < 1 || cfg.kappa >= n_obs)
        throw std::invalid_argument("greedy: kappa must lie in [1, N)");
    const NormalizedScores x = normalize_columns(m);
    const std::vector<double> base = row_means(x.values);

    EnsembleResult result;
    result.method = "Greedy";
    result.params["kappa"] = std::to_string(cfg.kappa);

    if (sample_variance(base) == 0.0) {
        warn(warnings, "greedy: all row means tied; falling back to average");
        result.scores = base;
        result.params["fallback"] = "average";
        return result;
    }

    // Pseudo ground truth: top-kappa rows by mean score (index tie-break).
    std::vector<std::size_t> order(n_obs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return base[a] > base[b]; });
    std::vector<double> target(n_obs, 0.0);
    for (std::size_t i = 0; i < cfg.kappa; ++i) target[order[i]] = 1.0;

    std::vector<std::size_t> detectors(n_det);
    std::iota(detectors.begin(), detectors.end(), std::size_t{0});
    std::vector<double> corr(n_det);
    std::vector<std::vector<double>> cols(n_det);
    for (std::size_t c = 0; c < n_det; ++c) {
        cols[c] = x.values.column(c);
        corr[c] = corr_or_zero(cols[c], target);
    }
    std::stable_sort(detectors.begin(), detectors.end(),
                     [&](std::size_t a, std::size_t b) { return corr[a] > corr[b]; });

    std::vector<std::size_t> selected{detectors.front()};
    std::vector<double> ensemble = cols[detectors.front()];
    double best = corr_or_zero(ensemble, target);
    for (std::size_t d = 1; d < n_det; ++d) {
        selected.push_back(detectors[d]);
        const std::vector<double> candidate = mean_of_columns(x.values, selected);
        const double c = corr_or_zero(candidate, target);
        if (c >= best) {
            best = c;
            ensemble = candidate;
        } else {
            selected.pop_back();
        }
    }
    result.scores = std::move(ensemble);
    result.params["selected"] = join_names(m, selected);
    return result;
}

EnsembleResult greedy_avg(const ScoreMatrix& m, const GreedyConfig& cfg, Warnings* warnings) {
    if (cfg.kappa_lo < 1 || cfg.kappa_lo > cfg.kappa_hi)
        throw std::invalid_argument("greedy_avg: empty kappa range");
    if (cfg.kappa_hi >= m.n_observations())
        throw std::invalid_argument("greedy_avg: kappa range must stay below N");
    std::vector<double> acc(m.n_observations(), 0.0);
    for (std::size_t kappa = cfg.kappa_lo; kappa <= cfg.kappa_hi; ++kappa) {
        GreedyConfig one = cfg;
        one.kappa = kappa;
        const EnsembleResult r = greedy(m, one, warnings);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += r.scores[i];
    }
    const double count = static_cast<double>(cfg.kappa_hi - cfg.kappa_lo + 1);
    for (double& v : acc) v /= count;
    EnsembleResult result;
    result.method = "Greedy-Avg";
    result.scores = std::move(acc);
    result.params["kappa_range"] =
        std::to_string(cfg.kappa_lo) + ".." + std::to_string(cfg.kappa_hi);
    return result;
}

EnsembleResult icwa(const ScoreMatrix& m, const ApConfig& ap, Warnings* warnings) {
    const NormalizedScores x = normalize_columns(m);
    const std::size_t n_det = x.values.cols();
    EnsembleResult result;
    result.method = "ICWA";

    // Similarities from the raw columns: Pearson is scale-free, and raw
    // inputs keep exact ties (duplicated or orthogonal detectors) exact.
    std::vector<std::vector<double>> cols(n_det);
    for (std::size_t c = 0; c < n_det; ++c) cols[c] = m.scores.column(c);

    Matrix sim(n_det, n_det, 0.0);
    std::vector<double> off_diag;
    off_diag.reserve(n_det * (n_det - 1));
    for (std::size_t i = 0; i < n_det; ++i)
        for (std::size_t j = 0; j < n_det; ++j) {
            if (i == j) continue;
            sim(i, j) = corr_or_zero(cols[i], cols[j]);
            off_diag.push_back(sim(i, j));
        }
    std::sort(off_diag.begin(), off_diag.end());
    const std::size_t mid = off_diag.size() / 2;
    const double preference = off_diag.size() % 2 == 1
                                  ? off_diag[mid]
                                  : 0.5 * (off_diag[mid - 1] + off_diag[mid]);
    for (std::size_t i = 0; i < n_det; ++i) sim(i, i) = preference;

    const ApResult clusters = affinity_propagation(sim, ap);
    std::vector<std::vector<std::size_t>> members;
    if (clusters.converged) {
        for (std::size_t e : clusters.exemplars) {
            std::vector<std::size_t> group;
            for (std::size_t i = 0; i < n_det; ++i)
                if (clusters.assignment[i] == e) group.push_back(i);
            members.push_back(std::move(group));
        }
    } else {
        warn(warnings, "icwa: affinity propagation did not converge; using singleton clusters");
        for (std::size_t i = 0; i < n_det; ++i) members.push_back({i});
    }

    // Equal weight per cluster, so a detector's weight is 1/|cluster|.
    std::vector<double> out(x.values.rows(), 0.0);
    for (const auto& group : members) {
        const std::vector<double> cluster_mean = mean_of_columns(x.values, group);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += cluster_mean[i];
    }
    for (double& v : out) v /= static_cast<double>(members.size());
    result.scores = std::move(out);
    result.params["clusters"] = std::to_string(members.size());
    return result;
}

std::vector<EnsembleResult> run_all_combiners(const ScoreMatrix& m,
                                              const GreedyConfig& greedy_cfg, double epsilon,
                                              const FitConfig& irt_cfg, Warnings* warnings) {
    std::vector<EnsembleResult> out;
    out.reserve(7);
    out.push_back(irt_ensemble(m, epsilon, irt_cfg, warnings).ensemble);
    out.push_back(average(m));
    out.push_back(greedy(m, greedy_cfg, warnings));
    out.push_back(greedy_avg(m, greedy_cfg, warnings));
    out.push_back(icwa(m, ApConfig{}, warnings));
    out.push_back(maximum(m));
    out.push_back(thresh(m));
    return out;
}

}  // namespace irtens
