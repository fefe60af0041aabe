#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "irtens/irt.hpp"
#include "irtens/rng.hpp"
#include "support/oracles.hpp"

using namespace irtens;

namespace {

// z drawn from the model: theta - beta - gamma*z ~ N(0, 1/alpha^2).
LogitScores simulate_crm(const std::vector<ItemParams>& items, const std::vector<double>& theta,
                         Rng& rng) {
    Matrix z(theta.size(), items.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
        for (std::size_t j = 0; j < items.size(); ++j) {
            const auto& it = items[j];
            z(i, j) = (theta[i] - it.beta) / it.gamma +
                      rng.normal(0.0, 1.0 / std::abs(it.alpha * it.gamma));
        }
    return LogitScores{std::move(z)};
}

double pearson_vec(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(a, b);
}

LogitScores random_logits(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Matrix z(n, m);
    for (double& v : z.data()) v = rng.normal();
    return LogitScores{std::move(z)};
}

}  // namespace

TEST_CASE("crm_density: Gaussian peak, ridge location, unit mass") {
    const ItemParams unit{1.0, 0.0, 1.0};
    CHECK(crm_density(0.0, 0.0, unit) == doctest::Approx(0.398942).epsilon(1e-5));

    // With beta = 3 the density over z peaks at z = theta - 3.
    const ItemParams shifted{1.0, 3.0, 1.0};
    for (double theta : {-1.0, 0.0, 2.0}) {
        const double peak = theta - 3.0;
        const double at_peak = crm_density(peak, theta, shifted);
        for (double off : {-0.5, 0.3, 1.0})
            CHECK(at_peak > crm_density(peak + off, theta, shifted));
    }

    for (const ItemParams& item :
         {ItemParams{1.0, 0.0, 1.0}, ItemParams{2.0, 3.0, 0.5}, ItemParams{-1.5, -1.0, -0.8}}) {
        for (double theta : {-2.0, 0.0, 2.0}) {
            const double center = (theta - item.beta) / item.gamma;
            const double width = 1.0 / std::abs(item.alpha * item.gamma);
            const double mass = oracle::integrate(
                [&](double z) { return crm_density(z, theta, item); }, center - 12.0 * width,
                center + 12.0 * width, 4000);
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("e_step: prior recovery, conjugate single item, quadrature oracle") {
    const LogitScores z{Matrix(3, 0)};
    const auto prior = e_step(z, {});
    CHECK(prior.sigma == 1.0);
    for (double m : prior.mu) CHECK(m == 0.0);

    LogitScores one{Matrix(1, 1)};
    one.values(0, 0) = 2.0;
    const auto post = e_step(one, {ItemParams{1.0, 0.0, 1.0}});
    CHECK(post.mu[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(post.sigma == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    const std::vector<ItemParams> items = {
        {1.2, 0.3, 0.8}, {-0.7, -1.0, -1.1}, {2.0, 1.5, 0.4}};
    const auto z5 = random_logits(5, 3, 71);
    const auto moments = e_step(z5, items);
    for (std::size_t i = 0; i < 5; ++i) {
        std::vector<double> row(3);
        for (std::size_t j = 0; j < 3; ++j) row[j] = z5.values(i, j);
        const auto q = oracle::posterior_by_quadrature(row, items);
        CHECK(moments.mu[i] == doctest::Approx(q.mean).epsilon(1e-6));
        CHECK(moments.sigma == doctest::Approx(q.sd).epsilon(1e-6));
    }
}

TEST_CASE("m_step: self-consistency limit and sign symmetry") {
    Rng rng(12);
    const std::size_t n = 200;
    std::vector<double> mu(n);
    for (double& v : mu) v = rng.normal();
    LogitScores z{Matrix(n, 2)};
    for (std::size_t i = 0; i < n; ++i) {
        z.values(i, 0) = mu[i];
        z.values(i, 1) = -mu[i];
    }
    const std::vector<ItemParams> prev(2);
    const auto items = m_step(z, mu, 1e-9, prev);
    CHECK(items[0].gamma == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(items[0].beta == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(items[0].alpha > 100.0);
    CHECK(items[1].gamma < 0.0);
    CHECK(items[1].alpha < 0.0);
    CHECK(items[1].alpha * items[1].gamma > 0.0);
}

TEST_CASE("m_step zeroes the finite-difference gradient of E") {
    Rng rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 50;
        std::vector<double> mu(n);
        for (double& v : mu) v = rng.normal();
        auto z = random_logits(n, 4, 1000 + trial);
        // make columns informative about mu to keep the instance generic
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 4; ++j) z.values(i, j) += (j % 2 ? -1.0 : 1.0) * mu[i];
        const double sigma = 0.3 + 0.2 * trial;
        const std::vector<ItemParams> prev(4);
        const auto items = m_step(z, mu, sigma, prev);
        const double e0 = oracle::expected_ll(z.values, items, mu, sigma);
        const auto grad = oracle::expected_ll_gradient(z.values, items, mu, sigma);
        for (std::size_t g = 0; g < grad.size(); ++g) {
            const double base = g % 3 == 0   ? items[g / 3].alpha
                                : g % 3 == 1 ? items[g / 3].beta
                                             : items[g / 3].gamma;
            const double rel =
                std::abs(grad[g]) * std::max(1.0, std::abs(base)) / std::max(1.0, std::abs(e0));
            CHECK(rel < 1e-4);
        }
    }
}

TEST_CASE("m_step freezes constant columns with a warning") {
    LogitScores z{Matrix(4, 2)};
    for (std::size_t i = 0; i < 4; ++i) {
        z.values(i, 0) = 0.7;  // constant
        z.values(i, 1) = static_cast<double>(i);
    }
    const std::vector<double> mu = {0.1, -0.2, 0.4, 0.3};
    const std::vector<ItemParams> prev = {{2.0, 5.0, 3.0}, {1.0, 0.0, 1.0}};
    Warnings w;
    const auto items = m_step(z, mu, 0.5, prev, &w);
    CHECK(items[0].alpha == 2.0);
    CHECK(items[0].beta == 5.0);
    CHECK(items[0].gamma == 3.0);
    CHECK(items[1].gamma != 1.0);
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("item 0") != std::string::npos);
}

TEST_CASE("fit recovers simulated latent traits") {
    Rng rng(2718);
    const std::vector<ItemParams> true_items = {{1.5, 0.5, 0.8},  {0.9, -0.3, 1.2},
                                                {-1.1, 0.2, -0.7}, {2.0, 1.0, 0.6},
                                                {0.6, 0.0, 1.0},  {1.2, -1.0, 0.9},
                                                {0.8, 0.4, 1.1}};
    std::vector<double> theta(500);
    for (double& t : theta) t = rng.normal();
    const auto z = simulate_crm(true_items, theta, rng);
    Warnings w;
    FitConfig cfg;
    cfg.max_iter = 500;  // the EM tail is linear; the default 100 stops just short
    const auto model = fit(z, cfg, &w);
    CHECK(model.converged);
    CHECK(std::abs(pearson_vec(model.theta, theta)) > 0.95);
    for (const auto& it : model.items) CHECK(it.alpha * it.gamma > 0.0);

    // EM ascent with 1e-8 slack
    for (std::size_t t = 1; t < model.log_likelihood_trace.size(); ++t)
        CHECK(model.log_likelihood_trace[t] >= model.log_likelihood_trace[t - 1] - 1e-8);

    // gradient at convergence, relative magnitude < 1e-3
    const auto post = e_step(z, model.items);
    const double e0 = oracle::expected_ll(z.values, model.items, post.mu, post.sigma);
    const auto grad = oracle::expected_ll_gradient(z.values, model.items, post.mu, post.sigma);
    for (std::size_t g = 0; g < grad.size(); ++g) {
        const double base = g % 3 == 0   ? model.items[g / 3].alpha
                            : g % 3 == 1 ? model.items[g / 3].beta
                                         : model.items[g / 3].gamma;
        CHECK(std::abs(grad[g]) * std::max(1.0, std::abs(base)) / std::max(1.0, std::abs(e0)) <
              1e-3);
    }
}

TEST_CASE("duplicating every observation leaves item estimates unchanged") {
    Rng rng(31);
    std::vector<double> theta(80);
    for (double& t : theta) t = rng.normal();
    const std::vector<ItemParams> true_items = {{1.0, 0.0, 1.0}, {1.5, 0.5, 0.7}, {0.8, -0.2, 1.3}};
    const auto z = simulate_crm(true_items, theta, rng);
    LogitScores doubled{Matrix(160, 3)};
    for (std::size_t i = 0; i < 80; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            doubled.values(i, j) = z.values(i, j);
            doubled.values(80 + i, j) = z.values(i, j);
        }
    const auto a = fit(z);
    const auto b = fit(doubled);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(a.items[j].alpha == doctest::Approx(b.items[j].alpha).epsilon(1e-6));
        CHECK(a.items[j].beta == doctest::Approx(b.items[j].beta).epsilon(1e-6));
        CHECK(a.items[j].gamma == doctest::Approx(b.items[j].gamma).epsilon(1e-6));
    }
}

TEST_CASE("fit is deterministic and rejects all-constant input") {
    const auto z = random_logits(40, 3, 8);
    const auto a = fit(z);
    const auto b = fit(z);
    CHECK(a.theta == b.theta);
    CHECK(a.log_likelihood_trace == b.log_likelihood_trace);

    LogitScores flat{Matrix(5, 2, 1.0)};
    CHECK_THROWS_AS(fit(flat), std::invalid_argument);
}

TEST_CASE("latent_trait: one-item and two-item reductions, omega identity") {
    LogitScores z1{Matrix(1, 1)};
    z1.values(0, 0) = 2.0;
    const auto t1 = latent_trait(z1, {ItemParams{2.0, 1.0, 0.5}});
    CHECK(t1[0] == doctest::Approx(2.0).epsilon(1e-12));

    LogitScores z2{Matrix(1, 2)};
    z2.values(0, 0) = 1.0;
    z2.values(0, 1) = 3.0;
    const auto t2 =
        latent_trait(z2, {ItemParams{1.3, 0.0, 1.0}, ItemParams{1.3, 2.0, 1.0}});
    CHECK(t2[0] == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(latent_trait(z2, {ItemParams{0.0, 0.0, 1.0}, ItemParams{0.0, 1.0, 1.0}}),
                    std::invalid_argument);

    // theta_i == sum_j (zeta_j + omega_j z_ij) with the alpha^2-normalized weights
    Rng rng(13);
    std::vector<double> theta(60);
    for (double& t : theta) t = rng.normal();
    const std::vector<ItemParams> items = {{1.4, 0.2, 0.9}, {-0.8, 0.5, -1.2}, {0.7, -0.4, 1.1}};
    const auto z = simulate_crm(items, theta, rng);
    const auto model = fit(z);
    double alpha2_sum = 0.0;
    for (const auto& it : model.items) alpha2_sum += it.alpha * it.alpha;
    for (std::size_t i = 0; i < 60; ++i) {
        double via_weights = 0.0;
        for (std::size_t j = 0; j < model.items.size(); ++j) {
            const auto& it = model.items[j];
            const double zeta = it.alpha * it.alpha * it.beta / alpha2_sum;
            const double omega = it.alpha * it.alpha * it.gamma / alpha2_sum;
            via_weights += zeta + omega * z.values(i, j);
        }
        CHECK(std::abs(model.theta[i] - via_weights) < 1e-12);
    }
}

TEST_CASE("flipping a normalized column flips its item but not the trait") {
    Rng rng(555);
    std::vector<double> theta(120);
    for (double& t : theta) t = rng.normal();
    const std::vector<ItemParams> items = {
        {1.2, 0.1, 0.9}, {0.9, -0.5, 1.1}, {1.6, 0.4, 0.7}, {0.7, 0.0, 1.2}};
    const auto z = simulate_crm(items, theta, rng);
    // x -> 1-x on normalized scores is z -> -z on logits
    LogitScores flipped = z;
    for (std::size_t i = 0; i < 120; ++i) flipped.values(i, 2) = -z.values(i, 2);

    const auto base = fit(z);
    const auto flip = fit(flipped);
    CHECK(pearson_vec(base.theta, flip.theta) > 0.99);
    for (const auto& it : flip.items) CHECK(it.alpha * it.gamma > 0.0);
    // mirrored up to the mu initialization, which is not flip-invariant
    CHECK(flip.items[2].gamma == doctest::Approx(-base.items[2].gamma).epsilon(1e-3));
    CHECK(flip.items[2].alpha == doctest::Approx(-base.items[2].alpha).epsilon(1e-3));
}

TEST_CASE("irt_ensemble: unanimous detectors reproduce the common ranking") {
    Rng rng(77);
    const std::size_t n = 50;
    std::vector<double> base(n);
    for (double& v : base) v = rng.normal();
    Matrix scores(n, 3);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < 3; ++j) scores(i, j) = base[i];
    const auto result =
        irt_ensemble(make_score_matrix(std::move(scores), {"a", "b", "c"}));

    std::vector<std::size_t> idx(n), idx_theta(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    idx_theta = idx;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return base[a] < base[b]; });
    std::stable_sort(idx_theta.begin(), idx_theta.end(), [&](std::size_t a, std::size_t b) {
        return result.ensemble.scores[a] < result.ensemble.scores[b];
    });
    CHECK(idx == idx_theta);
}

TEST_CASE("irt_ensemble discounts detectors that cry wolf") {
    // Four detectors track the planted signal; three score near-random, and
    // one boundary observation gets top marks from exactly those three.
    Rng rng(4242);
    const std::size_t n = 100;
    std::vector<int> labels(n, 0);
    labels[0] = labels[1] = labels[2] = 1;  // planted anomalies
    const std::size_t boundary = 3;
    const double profile[7] = {0.48, 0.56, 0.62, 1.0, 0.98, 0.74, 1.0};
    const bool reliable[7] = {true, true, true, false, false, true, false};

    Matrix scores(n, 7);
    for (std::size_t i = 0; i < n; ++i) {
        const double signal = labels[i] ? 1.0 : 0.2 + 0.3 * rng.uniform();
        for (std::size_t j = 0; j < 7; ++j) {
            if (i == boundary)
                scores(i, j) = profile[j];
            else if (reliable[j])
                scores(i, j) = std::clamp(signal + rng.normal(0.0, 0.05), 0.0, 1.0);
            else
                scores(i, j) = rng.uniform();
        }
    }
    const auto result = irt_ensemble(make_score_matrix(
        std::move(scores), {"KNN-AGG", "LOF", "COF", "INFLO", "KDEOS", "LDF", "LDOF"}));
    const auto& theta = result.ensemble.scores;
    for (int anomaly : {0, 1, 2}) CHECK(theta[anomaly] > theta[boundary]);

    // the unreliable items end up with the smallest discriminations
    double max_noise_alpha = 0.0, min_reliable_alpha = 1e9;
    for (std::size_t j = 0; j < 7; ++j) {
        const double a = std::abs(result.model.items[j].alpha);
        if (reliable[j])
            min_reliable_alpha = std::min(min_reliable_alpha, a);
        else
            max_noise_alpha = std::max(max_noise_alpha, a);
    }
    CHECK(min_reliable_alpha > max_noise_alpha);
}
