#include "irtens/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irtens {

LabeledDataset make_dataset(Matrix features, std::vector<int> labels, std::string name) {
    if (features.rows() < 2)
        throw std::invalid_argument("dataset needs at least 2 observations");
    if (features.cols() < 1)
        throw std::invalid_argument("dataset needs at least 1 feature");
    for (double v : features.data())
        if (!std::isfinite(v))
            throw std::invalid_argument("dataset '" + name + "' contains non-finite feature values");
    if (!labels.empty()) {
        if (labels.size() != features.rows())
            throw std::invalid_argument("label vector length does not match observation count");
        bool any_zero = false;
        for (int l : labels) {
            if (l != 0 && l != 1)
                throw std::invalid_argument("labels must be 0 or 1");
            if (l == 0) any_zero = true;
        }
        if (!any_zero)
            throw std::invalid_argument("labels mark every observation as anomalous");
    }
    return LabeledDataset{std::move(features), std::move(labels), std::move(name)};
}

ScoreMatrix make_score_matrix(Matrix scores, std::vector<std::string> detector_names) {
    if (detector_names.size() != scores.cols())
        throw std::invalid_argument("detector name count does not match score columns");
    for (double v : scores.data())
        if (!std::isfinite(v))
            throw std::invalid_argument("score matrix contains non-finite values");
    return ScoreMatrix{std::move(scores), std::move(detector_names)};
}

NormalizedScores normalize_columns(const ScoreMatrix& m, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("epsilon must lie in (0, 0.5)");
    const std::size_t nr = m.scores.rows();
    const std::size_t nc = m.scores.cols();
    Matrix out(nr, nc);
    for (std::size_t c = 0; c < nc; ++c) {
        double lo = m.scores(0, c), hi = m.scores(0, c);
        for (std::size_t r = 0; r < nr; ++r) {
            const double v = m.scores(r, c);
            if (!std::isfinite(v)) {
                const std::string col =
                    c < m.detector_names.size() ? m.detector_names[c] : std::to_string(c);
                throw std::invalid_argument("non-finite score in column '" + col + "'");
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi == lo) {
            // A constant detector carries no ranking information; park it at
            // the neutral value so its logit is 0.
            for (std::size_t r = 0; r < nr; ++r) out(r, c) = 0.5;
        } else {
            const double span = 1.0 - 2.0 * epsilon;
            for (std::size_t r = 0; r < nr; ++r)
                out(r, c) = epsilon + span * (m.scores(r, c) - lo) / (hi - lo);
        }
    }
    return NormalizedScores{std::move(out), epsilon};
}

LogitScores to_logit(const NormalizedScores& x) {
    Matrix out(x.values.rows(), x.values.cols());
    for (std::size_t i = 0; i < x.values.data().size(); ++i)
        out.data()[i] = logit(x.values.data()[i]);
    return LogitScores{std::move(out)};
}

}  // namespace irtens
