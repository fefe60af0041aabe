#include <cmath>

#include "doctest.h"
#include "irtens/neighbors.hpp"
#include "irtens/rng.hpp"
#include "support/oracles.hpp"

using namespace irtens;

namespace {

LabeledDataset random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, d);
    for (double& v : m.data()) v = rng.normal();
    return make_dataset(std::move(m));
}

LabeledDataset line_points() {
    Matrix m(3, 1);
    m(0, 0) = 0.0;
    m(1, 0) = 1.0;
    m(2, 0) = 3.0;
    return make_dataset(std::move(m));
}

}  // namespace

TEST_CASE("neighbor lists on a line") {
    const auto idx = NeighborIndex::build(line_points(), 2);
    CHECK(idx.neighbors(0)[0] == 1);
    CHECK(idx.neighbors(0)[1] == 2);
    CHECK(idx.distances(0)[0] == doctest::Approx(1.0));
    CHECK(idx.distances(0)[1] == doctest::Approx(3.0));
    CHECK(idx.knn_dist(0, 1) == doctest::Approx(1.0));
    CHECK(idx.knn_dist(2, 2) == doctest::Approx(3.0));
    CHECK_THROWS_AS(idx.knn_dist(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(idx.knn_dist(0, 0), std::invalid_argument);
}

TEST_CASE("k_max clamps to N-1 with a warning") {
    Warnings w;
    const auto idx = NeighborIndex::build(line_points(), 10, NeighborBuild::brute_force, &w);
    CHECK(idx.k_max() == 2);
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("clamped") != std::string::npos);
}

TEST_CASE("duplicate points list each other first at distance zero") {
    Matrix m(3, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 0) = 5.0;
    m(2, 1) = 5.0;
    const auto idx = NeighborIndex::build(make_dataset(std::move(m)), 2);
    CHECK(idx.neighbors(0)[0] == 1);
    CHECK(idx.distances(0)[0] == 0.0);
    CHECK(idx.neighbors(1)[0] == 0);
    CHECK(idx.distances(1)[0] == 0.0);
}

TEST_CASE("index matches the all-pairs oracle on random points") {
    const auto ds = random_points(100, 3, 42);
    const auto idx = NeighborIndex::build(ds, 12);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto expected = oracle::sorted_neighbors(ds.features, i);
        for (std::size_t k = 0; k < 12; ++k) {
            CHECK(idx.neighbors(i)[k] == expected[k]);
            CHECK(idx.distances(i)[k] ==
                  doctest::Approx(oracle::euclid(ds.features, i, expected[k])).epsilon(1e-12));
        }
    }
}

TEST_CASE("kd-tree build matches brute force, ties included") {
    // Grid data forces many exact distance ties.
    Matrix m(36, 2);
    for (std::size_t i = 0; i < 36; ++i) {
        m(i, 0) = static_cast<double>(i % 6);
        m(i, 1) = static_cast<double>(i / 6);
    }
    const auto ds = make_dataset(std::move(m));
    const auto brute = NeighborIndex::build(ds, 8, NeighborBuild::brute_force);
    const auto tree = NeighborIndex::build(ds, 8, NeighborBuild::kd_tree);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(brute.neighbors(i)[k] == tree.neighbors(i)[k]);
            CHECK(brute.distances(i)[k] == tree.distances(i)[k]);
        }

    const auto ds2 = random_points(200, 4, 9);
    const auto brute2 = NeighborIndex::build(ds2, 15, NeighborBuild::brute_force);
    const auto tree2 = NeighborIndex::build(ds2, 15, NeighborBuild::kd_tree);
    CHECK(std::equal(brute2.neighbors(0).begin(), brute2.neighbors(0).end(),
                     tree2.neighbors(0).begin()));
    for (std::size_t i = 0; i < ds2.size(); ++i)
        for (std::size_t k = 0; k < 15; ++k) CHECK(brute2.neighbors(i)[k] == tree2.neighbors(i)[k]);
}

TEST_CASE("symmetric consistency and monotonicity") {
    const auto ds = random_points(60, 2, 5);
    const auto idx = NeighborIndex::build(ds, 10);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto q = idx.neighbors(i)[0];
        CHECK(idx.dist(i, q) == doctest::Approx(idx.distances(i)[0]).epsilon(1e-12));
        for (std::size_t k = 1; k + 1 <= 10; ++k)
            CHECK(idx.knn_dist(i, k) <= idx.knn_dist(i, k + 1));
    }
}
