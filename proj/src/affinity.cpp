#include "irtens/affinity.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace irtens {

namespace {

// Assign every point to its most similar exemplar (exemplars to themselves).
std::vector<std::size_t> assign_to_exemplars(const Matrix& s,
                                             const std::vector<std::size_t>& exemplars) {
    const std::size_t n = s.rows();
    std::vector<std::size_t> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = exemplars.front();
        double best_sim = -std::numeric_limits<double>::infinity();
        for (std::size_t k : exemplars) {
            if (k == i) {
                best = i;
                break;
            }
            if (s(i, k) > best_sim) {
                best_sim = s(i, k);
                best = k;
            }
        }
        assignment[i] = best;
    }
    return assignment;
}

}  // namespace

ApResult affinity_propagation(const Matrix& s_in, const ApConfig& cfg) {
    const std::size_t n = s_in.rows();
    if (n == 0 || s_in.cols() != n)
        throw std::invalid_argument("similarity matrix must be square");
    if (!(cfg.damping >= 0.5 && cfg.damping < 1.0))
        throw std::invalid_argument("damping must lie in [0.5, 1)");

    // Exactly symmetric inputs (duplicated detectors) leave message passing
    // stuck splitting responsibilities. A deterministic sub-1e-9 bias toward
    // low-index exemplars breaks such ties without moving any real optimum.
    Matrix s = s_in;
    double scale = 0.0;
    for (double v : s.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            s(i, k) += 1e-9 * scale * static_cast<double>(n - k) / static_cast<double>(n);

    Matrix r(n, n, 0.0);  // responsibilities
    Matrix a(n, n, 0.0);  // availabilities

    ApResult result;
    std::vector<std::size_t> current;
    int stable = 0;
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        // r(i,k) <- s(i,k) - max_{k' != k} (a(i,k') + s(i,k'))
        for (std::size_t i = 0; i < n; ++i) {
            double max1 = -std::numeric_limits<double>::infinity(), max2 = max1;
            std::size_t arg1 = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double v = a(i, k) + s(i, k);
                if (v > max1) {
                    max2 = max1;
                    max1 = v;
                    arg1 = k;
                } else if (v > max2) {
                    max2 = v;
                }
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double bound = (k == arg1) ? max2 : max1;
                r(i, k) = cfg.damping * r(i, k) + (1.0 - cfg.damping) * (s(i, k) - bound);
            }
        }
        // a(i,k) <- min(0, r(k,k) + sum_{i' != i,k} max(0, r(i',k)));
        // a(k,k) <- sum_{i' != k} max(0, r(i',k))
        for (std::size_t k = 0; k < n; ++k) {
            double pos_sum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (i != k) pos_sum += std::max(0.0, r(i, k));
            for (std::size_t i = 0; i < n; ++i) {
                double v;
                if (i == k) {
                    v = pos_sum;
                } else {
                    v = std::min(0.0, r(k, k) + pos_sum - std::max(0.0, r(i, k)));
                }
                a(i, k) = cfg.damping * a(i, k) + (1.0 - cfg.damping) * v;
            }
        }

        std::vector<std::size_t> exemplars;
        for (std::size_t k = 0; k < n; ++k)
            if (r(k, k) + a(k, k) > 0.0) exemplars.push_back(k);
        result.sweeps = sweep;
        if (exemplars == current && !exemplars.empty()) {
            if (++stable >= cfg.stable_sweeps) {
                result.converged = true;
                break;
            }
        } else {
            stable = 0;
            current = std::move(exemplars);
        }
    }

    result.exemplars = current;
    if (result.converged)
        result.assignment = assign_to_exemplars(s, result.exemplars);
    else
        result.assignment.clear();
    return result;
}

}  // namespace irtens
