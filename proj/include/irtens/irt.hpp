#pragma once

#include <vector>

#include "irtens/core.hpp"

namespace irtens {

/// Item (detector) parameters of the continuous response model. The model
/// density is well defined whenever alpha * gamma > 0, which both the fit
/// and the sign update preserve.
struct ItemParams {
    double alpha = 1.0;  // discrimination
    double beta = 0.0;   // difficulty / anomalousness threshold
    double gamma = 1.0;  // scaling coefficient
};

struct FitConfig {
    int max_iter = 100;
    double tol = 1e-6;  // max absolute change over all item parameters
    double init_alpha = 1.0;
    double init_beta = 0.0;
    double init_gamma = 1.0;
};

struct IrtModel {
    std::vector<ItemParams> items;
    std::vector<double> theta;  // latent trait per observation, the ensemble score
    double posterior_sd = 1.0;  // shared posterior SD from the final E-step
    std::vector<double> log_likelihood_trace;
    int iterations = 0;
    bool converged = false;
};

/// Model density f(z|theta) = |alpha*gamma|/sqrt(2*pi) *
/// exp(-(alpha^2/2) * (theta - beta - gamma*z)^2).
double crm_density(double z, double theta, const ItemParams& item);

struct PosteriorMoments {
    std::vector<double> mu;  // posterior mean of theta_i
    double sigma = 1.0;      // shared posterior SD
};

/// E-step under a standard-normal trait prior: the posterior of theta_i is
/// Gaussian with precision 1 + sum_j alpha_j^2 and mean
/// sum_j alpha_j^2 (beta_j + gamma_j z_ij) / (1 + sum_j alpha_j^2).
PosteriorMoments e_step(const LogitScores& z, const std::vector<ItemParams>& items);

/// M-step: per-item stationary point of the expected log-likelihood, then
/// the sign transfer alpha <- sign(gamma) * |alpha| so alpha*gamma > 0.
/// Items whose score column makes the update singular (constant column) are
/// frozen at their previous values with a warning.
std::vector<ItemParams> m_step(const LogitScores& z, const std::vector<double>& mu,
                               double sigma, const std::vector<ItemParams>& prev,
                               Warnings* warnings = nullptr);

/// Expected log-likelihood E of the modified model (flat parameter prior):
///   N * sum_j (ln|alpha_j| + ln|gamma_j|)
///   - 1/2 * sum_ij alpha_j^2 ((beta_j + gamma_j z_ij - mu_i)^2 + sigma^2)
///   - N*n/2 * ln(2*pi).
double expected_log_likelihood(const LogitScores& z, const std::vector<ItemParams>& items,
                               const std::vector<double>& mu, double sigma);

/// EM fit. Deterministic given identical inputs and config.
IrtModel fit(const LogitScores& z, const FitConfig& cfg = {}, Warnings* warnings = nullptr);

/// Latent trait MLE from converged item estimates (no prior shrinkage):
/// theta_i = sum_j alpha_j^2 (beta_j + gamma_j z_ij) / sum_j alpha_j^2.
std::vector<double> latent_trait(const LogitScores& z, const std::vector<ItemParams>& items);

struct IrtEnsembleResult {
    EnsembleResult ensemble;
    IrtModel model;
};

/// The full pipeline: normalize -> logit -> fit -> theta as ensemble scores.
IrtEnsembleResult irt_ensemble(const ScoreMatrix& m, double epsilon = kDefaultEpsilon,
                               const FitConfig& cfg = {}, Warnings* warnings = nullptr);

}  // namespace irtens
