#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "irtens/core.hpp"
#include "irtens/rng.hpp"

using namespace irtens;

namespace {

ScoreMatrix single_column(const std::vector<double>& col) {
    Matrix m(col.size(), 1);
    for (std::size_t i = 0; i < col.size(); ++i) m(i, 0) = col[i];
    return ScoreMatrix{std::move(m), {"d1"}};
}

std::vector<std::size_t> argsort(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    return idx;
}

}  // namespace

TEST_CASE("normalize_columns maps endpoints and midpoints") {
    const auto n = normalize_columns(single_column({0.0, 5.0, 10.0}), 0.005);
    CHECK(n.values(0, 0) == doctest::Approx(0.005));
    CHECK(n.values(1, 0) == doctest::Approx(0.5));
    CHECK(n.values(2, 0) == doctest::Approx(0.995));
    CHECK(n.epsilon == 0.005);
}

TEST_CASE("normalize_columns parks constant columns at 0.5") {
    const auto n = normalize_columns(single_column({3.0, 3.0, 3.0}), 0.01);
    for (std::size_t i = 0; i < 3; ++i) CHECK(n.values(i, 0) == 0.5);
}

TEST_CASE("normalize_columns hand-derived interior value") {
    // eps + (1-2*eps)*(x-min)/(max-min) at x=2, min=1, max=4
    const auto n = normalize_columns(single_column({1.0, 2.0, 4.0}), 0.005);
    CHECK(n.values(0, 0) == doctest::Approx(0.005));
    CHECK(n.values(1, 0) == doctest::Approx(0.335));
    CHECK(n.values(2, 0) == doctest::Approx(0.995));
}

TEST_CASE("normalize_columns rejects bad epsilon and non-finite input") {
    CHECK_THROWS_AS(normalize_columns(single_column({1.0, 2.0}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(normalize_columns(single_column({1.0, 2.0}), 0.5), std::invalid_argument);
    ScoreMatrix bad = single_column({1.0, 2.0, 3.0});
    bad.scores(1, 0) = std::nan("");
    CHECK_THROWS_WITH_AS(normalize_columns(bad, 0.005),
                         "non-finite score in column 'd1'", std::invalid_argument);
}

TEST_CASE("to_logit matches hand values") {
    NormalizedScores x{Matrix(1, 2), 0.005};
    x.values(0, 0) = 0.5;
    x.values(0, 1) = 0.995;
    const auto z = to_logit(x);
    CHECK(z.values(0, 0) == 0.0);
    CHECK(z.values(0, 1) == doctest::Approx(std::log(199.0)).epsilon(1e-12));
}

TEST_CASE("normalization preserves ranks and survives affine rescaling") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + static_cast<std::size_t>(rng.uniform() * 40);
        std::vector<double> col(n);
        for (double& v : col)
            v = trial % 3 == 0 ? std::floor(rng.uniform() * 5.0) : rng.normal();  // some ties
        const auto base = normalize_columns(single_column(col), 0.005);

        const auto ranks_before = argsort(col);
        const auto ranks_after = argsort(base.values.column(0));
        CHECK(ranks_before == ranks_after);

        const double a = 0.1 + 5.0 * rng.uniform();
        const double b = rng.normal(0.0, 10.0);
        std::vector<double> scaled(n);
        for (std::size_t i = 0; i < n; ++i) scaled[i] = a * col[i] + b;
        const auto rescaled = normalize_columns(single_column(scaled), 0.005);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(rescaled.values(i, 0) == doctest::Approx(base.values(i, 0)).epsilon(1e-10));
    }
}

TEST_CASE("logit and sigmoid round-trip within 1e-12") {
    Rng rng(7);
    Matrix m(50, 2);
    for (double& v : m.data()) v = rng.normal();
    const auto x = normalize_columns(ScoreMatrix{std::move(m), {"a", "b"}}, 0.005);
    const auto z = to_logit(x);
    for (std::size_t i = 0; i < x.values.data().size(); ++i)
        CHECK(sigmoid(z.values.data()[i]) == doctest::Approx(x.values.data()[i]).epsilon(1e-12));
}

TEST_CASE("dataset factory enforces invariants") {
    Matrix one_row(1, 2);
    CHECK_THROWS_AS(make_dataset(std::move(one_row)), std::invalid_argument);

    Matrix ok(3, 2);
    CHECK_THROWS_AS(make_dataset(ok, {1, 1, 1}), std::invalid_argument);  // no zero label
    CHECK_THROWS_AS(make_dataset(ok, {0, 2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_dataset(ok, {0, 1}), std::invalid_argument);  // length mismatch
    CHECK_NOTHROW(make_dataset(ok, {0, 1, 0}));

    Matrix inf_m(2, 1);
    inf_m(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(make_dataset(std::move(inf_m)), std::invalid_argument);
}
