#include "irtens/synthgen.hpp"

#include <cmath>
#include <stdexcept>

#include "irtens/rng.hpp"

namespace irtens {

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643;

void fill_annulus_point(Rng& rng, double* row) {
    const double r = rng.uniform(4.5, 5.5);
    const double phi = rng.uniform(0.0, kTwoPi);
    row[0] = r * std::cos(phi);
    row[1] = r * std::sin(phi);
}

// Draws `count` values from N(target, sd) whose sample mean lands within
// three standard errors of the target.
void draw_calibrated(Rng& rng, double target, double sd, int count, double* out) {
    const double tol = 3.0 * sd / std::sqrt(static_cast<double>(count));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        double sum = 0.0;
        for (int i = 0; i < count; ++i) {
            out[i] = rng.normal(target, sd);
            sum += out[i];
        }
        if (std::abs(sum / count - target) <= tol) return;
    }
    throw std::runtime_error("anomaly mean calibration failed");
}

void check_iteration(int iteration) {
    if (iteration < 1) throw std::invalid_argument("iteration must be >= 1");
}

}  // namespace

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::example: return "EXAMPLE";
        case Experiment::ex1: return "EX1";
        case Experiment::ex2: return "EX2";
        case Experiment::ex3: return "EX3";
    }
    return "?";
}

Experiment parse_experiment(const std::string& name) {
    if (name == "EXAMPLE" || name == "example") return Experiment::example;
    if (name == "EX1" || name == "ex1") return Experiment::ex1;
    if (name == "EX2" || name == "ex2") return Experiment::ex2;
    if (name == "EX3" || name == "ex3") return Experiment::ex3;
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::uint64_t stream_seed(std::uint64_t base_seed, Experiment e, int iteration,
                          int repetition) {
    std::uint64_t h = mix64(base_seed + 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ (static_cast<std::uint64_t>(e) + 1));
    h = mix64(h ^ (static_cast<std::uint64_t>(iteration) * 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (static_cast<std::uint64_t>(repetition) * 0xc2b2ae3d27d4eb4fULL));
    return h;
}

LabeledDataset gen_example(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n_bulk = 97, n_anom = 3;
    Matrix features(n_bulk + n_anom, 2);
    std::vector<int> labels(n_bulk + n_anom, 0);
    for (std::size_t i = 0; i < n_bulk; ++i) fill_annulus_point(rng, features.row_ptr(i));
    for (std::size_t i = n_bulk; i < n_bulk + n_anom; ++i) {
        features(i, 0) = rng.normal(0.0, 0.3);
        features(i, 1) = rng.normal(0.0, 0.3);
        labels[i] = 1;
    }
    return make_dataset(std::move(features), std::move(labels), "example");
}

LabeledDataset gen_ex1(int iteration, std::uint64_t seed) {
    check_iteration(iteration);
    Rng rng(seed);
    const std::size_t n_bulk = 400, n_anom = 5, d = 6;
    const double target = 2.0 + (iteration - 1) / 2.0;
    Matrix features(n_bulk + n_anom, d);
    std::vector<int> labels(n_bulk + n_anom, 0);
    for (std::size_t i = 0; i < n_bulk; ++i)
        for (std::size_t c = 0; c < d; ++c) features(i, c) = rng.normal();
    double x1[n_anom];
    draw_calibrated(rng, target, 0.2, n_anom, x1);
    for (std::size_t i = 0; i < n_anom; ++i) {
        const std::size_t r = n_bulk + i;
        features(r, 0) = x1[i];
        for (std::size_t c = 1; c < d; ++c) features(r, c) = rng.normal();
        labels[r] = 1;
    }
    return make_dataset(std::move(features), std::move(labels), "ex1");
}

LabeledDataset gen_ex2(int iteration, std::uint64_t seed) {
    check_iteration(iteration);
    Rng rng(seed);
    const std::size_t n_bulk = 800, n_anom = 5, d = 4;
    const double target = 5.0 - (iteration - 1) / 2.0;
    Matrix features(n_bulk + n_anom, d);
    std::vector<int> labels(n_bulk + n_anom, 0);
    for (std::size_t i = 0; i < n_bulk; ++i) {
        fill_annulus_point(rng, features.row_ptr(i));
        features(i, 2) = rng.normal();
        features(i, 3) = rng.normal();
    }
    for (std::size_t i = n_bulk; i < n_bulk + n_anom; ++i) {
        features(i, 0) = rng.normal(target, 0.1);
        features(i, 1) = rng.normal(0.0, 0.1);
        features(i, 2) = rng.normal();
        features(i, 3) = rng.normal();
        labels[i] = 1;
    }
    return make_dataset(std::move(features), std::move(labels), "ex2");
}

LabeledDataset gen_ex3(int iteration, std::uint64_t seed) {
    check_iteration(iteration);
    Rng rng(seed);
    const std::size_t n_mode = 400, n_anom = 5, d = 6;
    const double target = 3.0 - (iteration - 1) * 0.3;
    Matrix features(2 * n_mode + n_anom, d);
    std::vector<int> labels(2 * n_mode + n_anom, 0);
    for (std::size_t i = 0; i < 2 * n_mode; ++i) {
        const double center = i < n_mode ? -5.0 : 5.0;
        features(i, 0) = rng.normal(center, 1.0);
        for (std::size_t c = 1; c < d; ++c) features(i, c) = rng.normal();
    }
    for (std::size_t i = 2 * n_mode; i < 2 * n_mode + n_anom; ++i) {
        features(i, 0) = rng.normal(target, 0.2);
        for (std::size_t c = 1; c < d; ++c) features(i, c) = rng.normal();
        labels[i] = 1;
    }
    return make_dataset(std::move(features), std::move(labels), "ex3");
}

LabeledDataset generate(Experiment e, int iteration, std::uint64_t seed) {
    switch (e) {
        case Experiment::example: return gen_example(seed);
        case Experiment::ex1: return gen_ex1(iteration, seed);
        case Experiment::ex2: return gen_ex2(iteration, seed);
        case Experiment::ex3: return gen_ex3(iteration, seed);
    }
    throw std::invalid_argument("unknown experiment");
}

}  // namespace irtens
