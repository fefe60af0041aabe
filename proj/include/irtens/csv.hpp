#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "irtens/core.hpp"

namespace irtens {

// Comma-delimited, '.' decimal point, header row required. A final column
// named "label" is read as 0/1 anomaly flags instead of a feature.

LabeledDataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds);

// Header = detector names. A final "label" column, when present, is returned
// separately so score files can carry ground truth through a pipeline.
struct ScoresFile {
    ScoreMatrix scores;
    std::vector<int> labels;  // empty when the file had no label column
};
ScoresFile read_scores_csv(const std::filesystem::path& path);
void write_scores_csv(const std::filesystem::path& path, const ScoreMatrix& m,
                      const std::vector<int>& labels = {});

void write_ensemble_csv(const std::filesystem::path& path,
                        const std::vector<EnsembleResult>& results);

// Doubles are written with "%.17g" so emitted files re-read and re-emit
// byte-identically.
std::string format_double(double v);

}  // namespace irtens
