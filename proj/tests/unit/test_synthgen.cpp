#include <cmath>

#include "doctest.h"
#include "irtens/synthgen.hpp"

using namespace irtens;

TEST_CASE("example: annulus plus three center anomalies") {
    const auto ds = gen_example(11);
    CHECK(ds.size() == 100);
    CHECK(ds.dims() == 2);
    int anomalies = 0;
    const double inner = 4.5;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double r = std::hypot(ds.features(i, 0), ds.features(i, 1));
        if (ds.labels[i] == 1) {
            ++anomalies;
            CHECK(r < inner);
        } else {
            CHECK(r >= inner);
            CHECK(r <= 5.5);
        }
    }
    CHECK(anomalies == 3);
}

TEST_CASE("ex1: anomaly mean tracks the iteration schedule") {
    for (int iteration : {1, 5, 10}) {
        const auto ds = gen_ex1(iteration, 99 + iteration);
        CHECK(ds.size() == 405);
        CHECK(ds.dims() == 6);
        const double target = 2.0 + (iteration - 1) / 2.0;
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds.labels[i] == 1) {
                sum += ds.features(i, 0);
                ++count;
            }
        CHECK(count == 5);
        CHECK(std::abs(sum / count - target) <= 3.0 * 0.2 / std::sqrt(5.0));
    }
    const auto first = gen_ex1(1, 4);
    const auto last = gen_ex1(10, 4);
    double m1 = 0.0, m10 = 0.0;
    for (std::size_t i = 400; i < 405; ++i) {
        m1 += first.features(i, 0) / 5.0;
        m10 += last.features(i, 0) / 5.0;
    }
    CHECK(m1 == doctest::Approx(2.0).epsilon(0.2));
    CHECK(m10 == doctest::Approx(6.5).epsilon(0.05));
}

TEST_CASE("ex2: annulus in dims 1-2, anomalies move into the hole") {
    const auto ds = gen_ex2(10, 3);
    CHECK(ds.size() == 805);
    CHECK(ds.dims() == 4);
    double mean_x1 = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double r = std::hypot(ds.features(i, 0), ds.features(i, 1));
        if (ds.labels[i] == 1) {
            mean_x1 += ds.features(i, 0) / 5.0;
            CHECK(r < 4.5);  // inside the hole at iteration 10
        } else {
            CHECK(r >= 4.5);
            CHECK(r <= 5.5);
        }
    }
    CHECK(mean_x1 == doctest::Approx(0.5).epsilon(0.5));
}

TEST_CASE("ex3: bimodal first coordinate with anomalies in the trough") {
    const auto ds = gen_ex3(1, 17);
    CHECK(ds.size() == 805);
    CHECK(ds.dims() == 6);
    double lo = 0.0, hi = 0.0, anom = 0.0;
    for (std::size_t i = 0; i < 400; ++i) lo += ds.features(i, 0) / 400.0;
    for (std::size_t i = 400; i < 800; ++i) hi += ds.features(i, 0) / 400.0;
    for (std::size_t i = 800; i < 805; ++i) anom += ds.features(i, 0) / 5.0;
    CHECK(lo == doctest::Approx(-5.0).epsilon(0.05));
    CHECK(hi == doctest::Approx(5.0).epsilon(0.05));
    CHECK(anom == doctest::Approx(3.0).epsilon(0.15));

    const auto late = gen_ex3(10, 17);
    double anom10 = 0.0;
    for (std::size_t i = 800; i < 805; ++i) anom10 += late.features(i, 0) / 5.0;
    CHECK(anom10 == doctest::Approx(0.3).epsilon(2.0));
    CHECK(std::abs(anom10 - 0.3) < 0.5);
}

TEST_CASE("same seed gives identical bytes, different seeds differ") {
    const auto a = gen_ex1(3, 123);
    const auto b = gen_ex1(3, 123);
    CHECK(a.features.data() == b.features.data());
    const auto c = gen_ex1(3, 124);
    CHECK(a.features.data() != c.features.data());
}

TEST_CASE("stream seeds separate experiments, iterations and repetitions") {
    const auto s = stream_seed(1, Experiment::ex1, 1, 1);
    CHECK(s != stream_seed(1, Experiment::ex2, 1, 1));
    CHECK(s != stream_seed(1, Experiment::ex1, 2, 1));
    CHECK(s != stream_seed(1, Experiment::ex1, 1, 2));
    CHECK(s != stream_seed(2, Experiment::ex1, 1, 1));
    CHECK(s == stream_seed(1, Experiment::ex1, 1, 1));
}

TEST_CASE("experiment names round-trip") {
    for (Experiment e :
         {Experiment::example, Experiment::ex1, Experiment::ex2, Experiment::ex3})
        CHECK(parse_experiment(experiment_name(e)) == e);
    CHECK_THROWS_AS(parse_experiment("ex9"), std::invalid_argument);
}
