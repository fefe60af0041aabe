#pragma once

#include <string>

#include "irtens/evalstats.hpp"

namespace irtens {

/// Static SVG line chart of mean AUC per method against the iteration index.
/// Presentation only; no output of the pipeline depends on it.
std::string auc_line_chart_svg(const ExperimentReport& report, int width = 720,
                               int height = 480);

}  // namespace irtens
