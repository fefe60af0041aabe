#include "irtens/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "irtens/csv.hpp"
#include "irtens/rng.hpp"

namespace irtens {

namespace {

// Regularized incomplete beta via the modified Lentz continued fraction.
double beta_cf(double a, double b, double x) {
    constexpr double eps = 1e-15, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt =
        std::exp(a * std::log(x) + b * std::log1p(-x) -
                 (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

// Upper tail P(T > t).
double t_survival(double t, double nu) {
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    const double tail = 0.5 * inc_beta(0.5 * nu, 0.5, nu / (nu + t * t));
    return t >= 0.0 ? tail : 1.0 - tail;
}

std::vector<double> doubled_midranks(const std::vector<double>& scores) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank2(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        // sorted positions i..j-1 share midrank (i+j+1)/2; doubled it is integral
        const double r2 = static_cast<double>(i + j + 1);
        for (std::size_t k = i; k < j; ++k) rank2[order[k]] = r2;
        i = j;
    }
    return rank2;
}

}  // namespace

double student_t_cdf(double t, double nu) { return 1.0 - t_survival(t, nu); }

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("auc: scores and labels differ in length");
    std::size_t pos = 0, neg = 0;
    for (int l : labels) {
        if (l == 1)
            ++pos;
        else if (l == 0)
            ++neg;
        else
            throw std::invalid_argument("auc: labels must be 0 or 1");
    }
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("auc: needs at least one positive and one negative label");
    for (double s : scores)
        if (!std::isfinite(s)) throw std::invalid_argument("auc: non-finite score");

    const std::vector<double> rank2 = doubled_midranks(scores);
    double rank2_sum = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (labels[i] == 1) rank2_sum += rank2[i];
    const double p = static_cast<double>(pos);
    return (rank2_sum - p * (p + 1.0)) / (2.0 * p * static_cast<double>(neg));
}

TTestResult t_test_paired_diff(const std::vector<double>& diffs) {
    if (diffs.size() < 2) throw std::invalid_argument("t-test needs at least 2 values");
    const double m = mean(diffs);
    const double sd = sample_sd(diffs);
    const double nu = static_cast<double>(diffs.size() - 1);
    if (sd == 0.0) {
        if (m == 0.0) return TTestResult{0.0, 0.5, nu};
        throw std::runtime_error("t_test_paired_diff: zero variance with nonzero mean");
    }
    const double t = m / (sd / std::sqrt(static_cast<double>(diffs.size())));
    return TTestResult{t, t_survival(t, nu), nu};
}

TTestResult t_test_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("t-test needs at least 2 values per sample");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double ma = mean(a), mb = mean(b);
    const double nu = na + nb - 2.0;
    const double pooled =
        ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / nu;
    if (pooled == 0.0) {
        if (ma == mb) return TTestResult{0.0, 0.5, nu};
        const double inf = std::numeric_limits<double>::infinity();
        return ma > mb ? TTestResult{inf, 0.0, nu} : TTestResult{-inf, 1.0, nu};
    }
    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    return TTestResult{t, t_survival(t, nu), nu};
}

std::vector<Top2Result> top2_significance(const std::vector<AucRecord>& records, double alpha) {
    std::vector<std::string> group_order, method_order;
    std::map<std::string, std::map<std::string, std::vector<double>>> by_group;
    for (const AucRecord& r : records) {
        if (!by_group.count(r.group)) group_order.push_back(r.group);
        auto& methods = by_group[r.group];
        if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end())
            method_order.push_back(r.method);
        methods[r.method].push_back(r.auc);
    }

    std::vector<Top2Result> out;
    for (const std::string& g : group_order) {
        const auto& methods = by_group[g];
        if (methods.size() < 2) continue;
        std::vector<std::pair<double, std::string>> ranked;  // (mean, method)
        for (const std::string& name : method_order) {
            auto it = methods.find(name);
            if (it != methods.end()) ranked.emplace_back(mean(it->second), name);
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        Top2Result r;
        r.group = g;
        r.best = ranked[0].second;
        r.second = ranked[1].second;
        r.mean_best = ranked[0].first;
        r.mean_second = ranked[1].first;
        r.test = t_test_two_sample(methods.at(r.best), methods.at(r.second));
        r.significant = r.test.p < alpha;
        out.push_back(std::move(r));
    }
    return out;
}

FpSimResult false_positive_simulation(std::size_t n_sources, std::size_t n_datasets,
                                      std::size_t n_methods, std::size_t reps,
                                      std::uint64_t seed, double alpha) {
    if (reps < 1) throw std::invalid_argument("fp-sim needs at least 1 repetition");
    if (n_datasets < 2) throw std::invalid_argument("fp-sim needs at least 2 datasets per source");
    FpSimResult out;
    out.counts.reserve(reps);
    std::vector<std::vector<double>> values(n_methods, std::vector<double>(n_datasets));
    for (std::size_t rep = 0; rep < reps; ++rep) {
        Rng rng(mix64(seed + 0x51ed270b0a1883ULL * (rep + 1)));
        int fp = 0;
        for (std::size_t src = 0; src < n_sources; ++src) {
            if (n_methods < 2) break;
            for (auto& v : values)
                for (double& x : v) x = rng.normal();
            std::size_t best = 0, second = 1;
            std::vector<double> means(n_methods);
            for (std::size_t m = 0; m < n_methods; ++m) means[m] = mean(values[m]);
            if (means[second] > means[best]) std::swap(best, second);
            for (std::size_t m = 2; m < n_methods; ++m) {
                if (means[m] > means[best]) {
                    second = best;
                    best = m;
                } else if (means[m] > means[second]) {
                    second = m;
                }
            }
            if (t_test_two_sample(values[best], values[second]).p < alpha) ++fp;
        }
        out.counts.push_back(fp);
    }
    std::vector<double> as_double(out.counts.begin(), out.counts.end());
    out.mean = mean(as_double);
    out.sd = sample_sd(as_double);
    return out;
}

std::vector<std::size_t> correlation_counts(const ScoreMatrix& m,
                                            const std::vector<double>& thresholds) {
    const std::size_t n = m.n_detectors();
    std::vector<std::vector<double>> cols(n);
    for (std::size_t c = 0; c < n; ++c) cols[c] = m.scores.column(c);
    std::vector<std::size_t> counts(thresholds.size(), 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double r = i == j ? 1.0 : pearson(cols[i], cols[j]);
            if (std::isnan(r)) continue;
            for (std::size_t t = 0; t < thresholds.size(); ++t)
                if (r > thresholds[t]) ++counts[t];
        }
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
        // the diagonal of ones is redundant information
        if (thresholds[t] < 1.0) counts[t] -= n;
    }
    return counts;
}

std::vector<std::pair<std::string, double>> best_method_proportions(
    const std::vector<AucRecord>& records, const std::vector<std::string>& method_order) {
    std::map<std::string, std::map<std::string, double>> by_dataset;
    for (const AucRecord& r : records) by_dataset[r.group + "/" + r.dataset][r.method] = r.auc;
    std::map<std::string, std::size_t> wins;
    for (const auto& [dataset, methods] : by_dataset) {
        std::string best;
        double best_auc = -1.0;
        for (const std::string& name : method_order) {
            auto it = methods.find(name);
            if (it != methods.end() && it->second > best_auc) {
                best_auc = it->second;
                best = name;
            }
        }
        if (!best.empty()) ++wins[best];
    }
    std::vector<std::pair<std::string, double>> out;
    const double total = static_cast<double>(by_dataset.size());
    for (const std::string& name : method_order)
        out.emplace_back(name, total > 0 ? wins[name] / total : 0.0);
    return out;
}

std::vector<std::string> ExperimentReport::methods() const {
    std::vector<std::string> out;
    for (const ReportRow& r : rows)
        if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
    return out;
}

std::vector<int> ExperimentReport::iterations() const {
    std::vector<int> out;
    for (const ReportRow& r : rows) out.push_back(r.iteration);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double ExperimentReport::mean_auc(const std::string& method) const {
    std::vector<double> v;
    for (const ReportRow& r : rows)
        if (r.method == method) v.push_back(r.auc);
    return mean(v);
}

double ExperimentReport::mean_auc(const std::string& method, int iteration) const {
    std::vector<double> v;
    for (const ReportRow& r : rows)
        if (r.method == method && r.iteration == iteration) v.push_back(r.auc);
    return mean(v);
}

double ExperimentReport::sd_auc(const std::string& method, int iteration) const {
    std::vector<double> v;
    for (const ReportRow& r : rows)
        if (r.method == method && r.iteration == iteration) v.push_back(r.auc);
    return sample_sd(v);
}

std::vector<double> ExperimentReport::cell_values(const std::string& method) const {
    std::vector<std::pair<std::pair<int, int>, double>> cells;
    for (const ReportRow& r : rows)
        if (r.method == method) cells.push_back({{r.iteration, r.repetition}, r.auc});
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> out;
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back(c.second);
    return out;
}

std::vector<AucRecord> ExperimentReport::as_records() const {
    std::vector<AucRecord> out;
    out.reserve(rows.size());
    for (const ReportRow& r : rows)
        out.push_back(AucRecord{r.experiment,
                                std::to_string(r.iteration) + "x" + std::to_string(r.repetition),
                                r.method, r.auc});
    return out;
}

void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "experiment,iteration,repetition,method,auc\n";
    for (const ReportRow& r : report.rows)
        out << r.experiment << ',' << r.iteration << ',' << r.repetition << ',' << r.method
            << ',' << format_double(r.auc) << '\n';
}

void write_summary_csv(const std::filesystem::path& path, const ExperimentReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "experiment,iteration,method,mean_auc,sd_auc\n";
    const auto methods = report.methods();
    const std::string experiment = report.rows.empty() ? "" : report.rows.front().experiment;
    for (int it : report.iterations())
        for (const std::string& m : methods)
            out << experiment << ',' << it << ',' << m << ','
                << format_double(report.mean_auc(m, it)) << ','
                << format_double(report.sd_auc(m, it)) << '\n';
}

}  // namespace irtens
