#include "irtens/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irtens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Density ratios hit 0/0 when a point sits in a blob of exact duplicates;
// such a point is as dense as its neighborhood, so the ratio is 1.
double ratio(double num, double den) {
    if (num == den) return 1.0;  // covers 0/0 and inf/inf
    if (den == 0.0) return kInf;
    if (std::isinf(den)) return 0.0;
    return num / den;
}

void require_k(const NeighborIndex& idx, std::size_t k, const char* who) {
    if (k < 1 || k > idx.k_max())
        throw std::invalid_argument(std::string(who) + ": k outside the index's range");
}

// Mean reachability distance to the k nearest neighbors (the inverse of the
// local reachability density; 0 marks infinite density).
std::vector<double> mean_reach_dist(const NeighborIndex& idx, std::size_t k) {
    const std::size_t n = idx.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ids = idx.neighbors(i);
        const auto ds = idx.distances(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            sum += std::max(ds[j], idx.knn_dist(ids[j], k));
        out[i] = sum / static_cast<double>(k);
    }
    return out;
}

double gaussian_kernel(double u, double bandwidth, std::size_t dims) {
    const double norm =
        std::pow(2.0 * 3.141592653589793238462643, 0.5 * static_cast<double>(dims)) *
        std::pow(bandwidth, static_cast<double>(dims));
    return std::exp(-(u * u) / (2.0 * bandwidth * bandwidth)) / norm;
}

// Smallest positive k-distance, used as a stand-in bandwidth for points
// whose k-distance is 0 (exact duplicates).
double bandwidth_floor(const NeighborIndex& idx, std::size_t k) {
    double lo = kInf;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double d = idx.knn_dist(i, k);
        if (d > 0.0) lo = std::min(lo, d);
    }
    if (!std::isfinite(lo))
        throw std::runtime_error("all k-distances are zero; kernel bandwidth undefined");
    return lo;
}

// Average chaining distance of the set-based nearest trail through
// {p} + neighbors, built by repeatedly attaching the closest outside point.
double avg_chaining_dist(const NeighborIndex& idx, std::size_t p,
                         std::span<const std::uint32_t> nbrs, std::size_t k) {
    std::vector<std::uint32_t> members(nbrs.begin(), nbrs.begin() + k);
    std::vector<bool> attached(k, false);
    std::vector<std::uint32_t> trail{static_cast<std::uint32_t>(p)};
    double acc = 0.0;
    const double r = static_cast<double>(k);
    for (std::size_t step = 1; step <= k; ++step) {
        double best = kInf;
        std::size_t best_v = 0;
        for (std::size_t vi = 0; vi < k; ++vi) {
            if (attached[vi]) continue;
            for (std::uint32_t u : trail) {
                const double d = idx.dist(u, members[vi]);
                if (d < best || (d == best && members[vi] < members[best_v])) {
                    best = d;
                    best_v = vi;
                }
            }
        }
        attached[best_v] = true;
        trail.push_back(members[best_v]);
        const double weight = 2.0 * (r + 1.0 - static_cast<double>(step)) / (r * (r + 1.0));
        acc += weight * best;
    }
    return acc;
}

}  // namespace

DetectorConfig DetectorConfig::t1() { return DetectorConfig{5, 5, 10}; }

DetectorConfig DetectorConfig::t2(std::size_t n_obs) {
    const std::size_t tenth = (n_obs + 9) / 10;
    std::size_t k = std::max<std::size_t>(tenth, 50);
    if (n_obs >= 2) k = std::min(k, n_obs - 1);
    DetectorConfig cfg;
    cfg.k = cfg.k_min = k;
    cfg.k_max = std::min(k + 10, n_obs >= 2 ? n_obs - 1 : k + 10);
    return cfg;
}

void DetectorConfig::validate(std::size_t n_obs) const {
    if (k < 1 || k_min < 1) throw std::invalid_argument("k and k_min must be >= 1");
    if (k_min > k_max) throw std::invalid_argument("k_min must not exceed k_max");
    if (k_max >= n_obs || k >= n_obs)
        throw std::invalid_argument("neighborhood sizes must be smaller than N");
}

std::vector<double> knn_agg(const NeighborIndex& idx, const DetectorConfig& cfg) {
    require_k(idx, cfg.k_max, "knn_agg");
    const std::size_t n = idx.size();
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ds = idx.distances(i);
        double sum = 0.0;
        for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) sum += ds[k - 1];
        scores[i] = sum;
    }
    return scores;
}

std::vector<double> lof(const NeighborIndex& idx, const DetectorConfig& cfg) {
    const std::size_t k = cfg.k;
    require_k(idx, k, "lof");
    const std::size_t n = idx.size();
    const std::vector<double> mrd = mean_reach_dist(idx, k);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        // LOF = mean_o lrd(o)/lrd(i) = mean_o mrd(i)/mrd(o)
        const auto ids = idx.neighbors(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += ratio(mrd[i], mrd[ids[j]]);
        scores[i] = sum / static_cast<double>(k);
    }
    return scores;
}

std::vector<double> cof(const NeighborIndex& idx, const DetectorConfig& cfg) {
    const std::size_t k = cfg.k;
    require_k(idx, k, "cof");
    const std::size_t n = idx.size();
    std::vector<double> ac(n);
    for (std::size_t i = 0; i < n; ++i) ac[i] = avg_chaining_dist(idx, i, idx.neighbors(i), k);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ids = idx.neighbors(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += ac[ids[j]];
        scores[i] = ratio(ac[i], sum / static_cast<double>(k));
    }
    return scores;
}

std::vector<double> inflo(const NeighborIndex& idx, const DetectorConfig& cfg) {
    const std::size_t k = cfg.k;
    require_k(idx, k, "inflo");
    const std::size_t n = idx.size();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double kd = idx.knn_dist(i, k);
        density[i] = kd > 0.0 ? 1.0 / kd : kInf;
    }
    std::vector<std::vector<std::uint32_t>> reverse_nn(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            reverse_nn[idx.neighbors(i)[j]].push_back(static_cast<std::uint32_t>(i));

    std::vector<double> scores(n);
    std::vector<std::uint32_t> influence;
    for (std::size_t i = 0; i < n; ++i) {
        influence.assign(idx.neighbors(i).begin(), idx.neighbors(i).begin() + k);
        influence.insert(influence.end(), reverse_nn[i].begin(), reverse_nn[i].end());
        std::sort(influence.begin(), influence.end());
        influence.erase(std::unique(influence.begin(), influence.end()), influence.end());
        double sum = 0.0;
        for (std::uint32_t o : influence) sum += density[o];
        scores[i] = ratio(sum / static_cast<double>(influence.size()), density[i]);
    }
    return scores;
}

std::vector<double> kdeos(const NeighborIndex& idx, const DetectorConfig& cfg) {
    require_k(idx, cfg.k_max, "kdeos");
    const std::size_t n = idx.size();
    const std::size_t d = idx.dims();
    std::vector<double> dens(n, 0.0);
    const double n_levels = static_cast<double>(cfg.k_max - cfg.k_min + 1);
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        double floor_bw = -1.0;  // computed lazily, only if a zero bandwidth shows up
        for (std::size_t i = 0; i < n; ++i) {
            double bw = idx.knn_dist(i, k);
            if (bw == 0.0) {
                if (floor_bw < 0.0) floor_bw = bandwidth_floor(idx, k);
                bw = floor_bw;
            }
            const auto ds = idx.distances(i);
            double sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) sum += gaussian_kernel(ds[j], bw, d);
            dens[i] += sum / static_cast<double>(k) / n_levels;
        }
    }
    // z-score of the negated density against the k_max neighborhood
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ids = idx.neighbors(i);
        double m = 0.0;
        for (std::size_t j = 0; j < cfg.k_max; ++j) m += dens[ids[j]];
        m /= static_cast<double>(cfg.k_max);
        double var = 0.0;
        for (std::size_t j = 0; j < cfg.k_max; ++j) {
            const double dd = dens[ids[j]] - m;
            var += dd * dd;
        }
        const double sd = std::sqrt(var / static_cast<double>(cfg.k_max));
        // A spread at roundoff scale (symmetric geometry) carries no signal;
        // dividing by it would amplify noise into arbitrary scores.
        const double floor_sd = 1e-12 * std::max(std::abs(m), std::abs(dens[i]));
        scores[i] = sd > floor_sd ? (m - dens[i]) / sd : 0.0;
    }
    return scores;
}

std::vector<double> ldf(const NeighborIndex& idx, const DetectorConfig& cfg, double h,
                        double c) {
    const std::size_t k = cfg.k;
    require_k(idx, k, "ldf");
    const std::size_t n = idx.size();
    const std::size_t d = idx.dims();
    std::vector<double> kdist(n);
    for (std::size_t i = 0; i < n; ++i) kdist[i] = idx.knn_dist(i, k);
    double floor_bw = -1.0;
    std::vector<double> lde(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ids = idx.neighbors(i);
        const auto ds = idx.distances(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint32_t o = ids[j];
            const double reach = std::max(ds[j], kdist[o]);
            double bw = h * kdist[o];
            if (bw == 0.0) {
                if (floor_bw < 0.0) floor_bw = bandwidth_floor(idx, k);
                bw = h * floor_bw;
            }
            sum += gaussian_kernel(reach, bw, d);
        }
        lde[i] = sum / static_cast<double>(k);
    }
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ids = idx.neighbors(i);
        double nb = 0.0;
        for (std::size_t j = 0; j < k; ++j) nb += lde[ids[j]];
        nb /= static_cast<double>(k);
        scores[i] = nb / (lde[i] + c * nb);
        if (std::isnan(scores[i])) scores[i] = 0.0;  // 0/(0+0): empty density everywhere
    }
    return scores;
}

std::vector<double> ldof(const NeighborIndex& idx, const DetectorConfig& cfg) {
    const std::size_t k = cfg.k;
    require_k(idx, k, "ldof");
    if (k < 2) throw std::invalid_argument("ldof needs k >= 2");
    const std::size_t n = idx.size();
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ids = idx.neighbors(i);
        const auto ds = idx.distances(i);
        double dbar = 0.0;
        for (std::size_t j = 0; j < k; ++j) dbar += ds[j];
        dbar /= static_cast<double>(k);
        double inner = 0.0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) inner += idx.dist(ids[a], ids[b]);
        inner /= static_cast<double>(k * (k - 1) / 2);
        scores[i] = ratio(dbar, inner);
    }
    return scores;
}

ScoreMatrix run_all(const LabeledDataset& ds, const DetectorConfig& cfg, Warnings* warnings) {
    const std::size_t n = ds.size();
    DetectorConfig eff = cfg;
    if (eff.required_k() >= n) {
        eff.k = std::min(eff.k, n - 1);
        eff.k_max = std::min(eff.k_max, n - 1);
        eff.k_min = std::min(eff.k_min, eff.k_max);
        warn(warnings, "detector neighborhoods clamped to N-1=" + std::to_string(n - 1));
    }
    eff.validate(n);
    const NeighborIndex idx =
        NeighborIndex::build(ds, eff.required_k(), NeighborBuild::brute_force, warnings);

    using Scorer = std::vector<double> (*)(const NeighborIndex&, const DetectorConfig&);
    const Scorer scorers[7] = {
        knn_agg,
        lof,
        cof,
        inflo,
        kdeos,
        [](const NeighborIndex& i, const DetectorConfig& c) { return ldf(i, c); },
        ldof,
    };

    Matrix scores(n, 7, 0.0);
    for (std::size_t c = 0; c < 7; ++c) {
        std::vector<double> column;
        bool ok = true;
        try {
            column = scorers[c](idx, eff);
            for (double v : column)
                if (!std::isfinite(v)) ok = false;
        } catch (const std::exception& e) {
            warn(warnings, std::string(kDetectorNames[c]) + " failed: " + e.what());
            ok = false;
        }
        if (ok)
            scores.set_column(c, column);
        else if (!column.empty())
            warn(warnings, std::string(kDetectorNames[c]) +
                               " produced non-finite scores; column zeroed");
    }
    std::vector<std::string> names(kDetectorNames.begin(), kDetectorNames.end());
    return ScoreMatrix{std::move(scores), std::move(names)};
}

}  // namespace irtens
