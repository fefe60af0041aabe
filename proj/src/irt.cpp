#include "irtens/irt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irtens {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kLog2Pi = 1.8378770664093454836;

bool column_constant(const Matrix& z, std::size_t c) {
    for (std::size_t r = 1; r < z.rows(); ++r)
        if (z(r, c) != z(0, c)) return false;
    return true;
}

}  // namespace

double crm_density(double z, double theta, const ItemParams& item) {
    const double resid = theta - item.beta - item.gamma * z;
    const double a2 = item.alpha * item.alpha;
    return std::abs(item.alpha * item.gamma) / kSqrt2Pi * std::exp(-0.5 * a2 * resid * resid);
}

PosteriorMoments e_step(const LogitScores& z, const std::vector<ItemParams>& items) {
    const std::size_t n_obs = z.values.rows();
    PosteriorMoments out;
    out.mu.assign(n_obs, 0.0);
    double precision = 1.0;  // standard-normal prior
    for (const ItemParams& it : items) precision += it.alpha * it.alpha;
    out.sigma = 1.0 / std::sqrt(precision);
    for (std::size_t i = 0; i < n_obs; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < items.size(); ++j) {
            const ItemParams& it = items[j];
            acc += it.alpha * it.alpha * (it.beta + it.gamma * z.values(i, j));
        }
        out.mu[i] = acc / precision;
    }
    return out;
}

std::vector<ItemParams> m_step(const LogitScores& z, const std::vector<double>& mu,
                               double sigma, const std::vector<ItemParams>& prev,
                               Warnings* warnings) {
    const std::size_t n_obs = z.values.rows();
    const std::size_t n_items = z.values.cols();
    if (n_obs < 2) throw std::invalid_argument("m_step needs at least 2 observations");
    if (mu.size() != n_obs) throw std::invalid_argument("mu length mismatch");
    if (prev.size() != n_items) throw std::invalid_argument("item count mismatch");

    const double n = static_cast<double>(n_obs);
    const double mu_bar = mean(mu);
    double s_mumu = 0.0;
    for (double m : mu) s_mumu += (m - mu_bar) * (m - mu_bar);
    const double sigma2_total = n * sigma * sigma;

    std::vector<ItemParams> next(n_items);
    for (std::size_t j = 0; j < n_items; ++j) {
        double z_bar = 0.0;
        for (std::size_t i = 0; i < n_obs; ++i) z_bar += z.values(i, j);
        z_bar /= n;
        double s_zmu = 0.0;
        for (std::size_t i = 0; i < n_obs; ++i)
            s_zmu += (z.values(i, j) - z_bar) * (mu[i] - mu_bar);
        if (s_zmu == 0.0 || column_constant(z.values, j)) {
            warn(warnings, "item " + std::to_string(j) +
                               ": singular update (constant or orthogonal column); frozen");
            next[j] = prev[j];
            continue;
        }
        // Joint stationary point of E: gamma from the ln|gamma| term's
        // optimality condition, beta from the residual-mean condition, then
        // alpha^2 = N / sum((beta + gamma z - mu)^2 + sigma^2).
        const double gamma = (s_mumu + sigma2_total) / s_zmu;
        const double beta = mu_bar - gamma * z_bar;
        double ss = 0.0;
        for (std::size_t i = 0; i < n_obs; ++i) {
            const double resid = beta + gamma * z.values(i, j) - mu[i];
            ss += resid * resid;
        }
        const double alpha_ori = std::sqrt(n / (ss + sigma2_total));
        // Sign transfer: the modified likelihood requires alpha*gamma > 0.
        next[j] = ItemParams{gamma < 0.0 ? -alpha_ori : alpha_ori, beta, gamma};
    }
    return next;
}

double expected_log_likelihood(const LogitScores& z, const std::vector<ItemParams>& items,
                               const std::vector<double>& mu, double sigma) {
    const std::size_t n_obs = z.values.rows();
    const std::size_t n_items = z.values.cols();
    const double n = static_cast<double>(n_obs);
    double e = 0.0;
    for (std::size_t j = 0; j < n_items; ++j) {
        const ItemParams& it = items[j];
        e += n * (std::log(std::abs(it.alpha)) + std::log(std::abs(it.gamma)));
        const double a2 = it.alpha * it.alpha;
        double ss = 0.0;
        for (std::size_t i = 0; i < n_obs; ++i) {
            const double resid = it.beta + it.gamma * z.values(i, j) - mu[i];
            ss += resid * resid + sigma * sigma;
        }
        e -= 0.5 * a2 * ss;
    }
    e -= 0.5 * n * static_cast<double>(n_items) * kLog2Pi;
    return e;
}

IrtModel fit(const LogitScores& z, const FitConfig& cfg, Warnings* warnings) {
    const std::size_t n_obs = z.values.rows();
    const std::size_t n_items = z.values.cols();
    if (n_obs < 2) throw std::invalid_argument("fit needs at least 2 observations");
    if (n_items < 2) throw std::invalid_argument("fit needs at least 2 detectors");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    bool any_varying = false;
    for (std::size_t j = 0; j < n_items && !any_varying; ++j)
        any_varying = !column_constant(z.values, j);
    if (!any_varying) throw std::invalid_argument("all score columns are constant");

    IrtModel model;
    model.items.assign(n_items, ItemParams{cfg.init_alpha, cfg.init_beta, cfg.init_gamma});

    // Start from the row mean of z as the trait proxy and the prior SD.
    PosteriorMoments post;
    post.mu.resize(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_items; ++j) s += z.values(i, j);
        post.mu[i] = s / static_cast<double>(n_items);
    }
    post.sigma = 1.0;

    Warnings mstep_warnings;  // deduplicated below; a frozen item repeats every iteration
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const std::vector<ItemParams> updated =
            m_step(z, post.mu, post.sigma, model.items, &mstep_warnings);
        double delta = 0.0;
        for (std::size_t j = 0; j < n_items; ++j) {
            delta = std::max(delta, std::abs(updated[j].alpha - model.items[j].alpha));
            delta = std::max(delta, std::abs(updated[j].beta - model.items[j].beta));
            delta = std::max(delta, std::abs(updated[j].gamma - model.items[j].gamma));
        }
        model.log_likelihood_trace.push_back(
            expected_log_likelihood(z, updated, post.mu, post.sigma));
        model.items = updated;
        model.iterations = iter;
        post = e_step(z, model.items);
        if (delta < cfg.tol) {
            model.converged = true;
            break;
        }
    }
    std::sort(mstep_warnings.begin(), mstep_warnings.end());
    mstep_warnings.erase(std::unique(mstep_warnings.begin(), mstep_warnings.end()),
                         mstep_warnings.end());
    for (std::string& w : mstep_warnings) warn(warnings, std::move(w));
    if (!model.converged)
        warn(warnings, "EM did not converge in " + std::to_string(cfg.max_iter) + " iterations");

    model.posterior_sd = post.sigma;
    model.theta = latent_trait(z, model.items);
    return model;
}

std::vector<double> latent_trait(const LogitScores& z, const std::vector<ItemParams>& items) {
    const std::size_t n_obs = z.values.rows();
    double denom = 0.0;
    for (const ItemParams& it : items) denom += it.alpha * it.alpha;
    if (denom == 0.0) throw std::invalid_argument("latent_trait: every item has alpha = 0");
    std::vector<double> theta(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < items.size(); ++j) {
            const ItemParams& it = items[j];
            acc += it.alpha * it.alpha * (it.beta + it.gamma * z.values(i, j));
        }
        theta[i] = acc / denom;
    }
    return theta;
}

IrtEnsembleResult irt_ensemble(const ScoreMatrix& m, double epsilon, const FitConfig& cfg,
                               Warnings* warnings) {
    const LogitScores z = to_logit(normalize_columns(m, epsilon));
    IrtModel model = fit(z, cfg, warnings);
    EnsembleResult result;
    result.method = "IRT";
    result.scores = model.theta;
    result.params["epsilon"] = std::to_string(epsilon);
    result.params["converged"] = model.converged ? "true" : "false";
    result.params["iterations"] = std::to_string(model.iterations);
    return IrtEnsembleResult{std::move(result), std::move(model)};
}

}  // namespace irtens
