#pragma once

#include <cstddef>
#include <iostream>
#include <span>
#include <string>
#include <vector>

namespace irtens {

// Non-fatal diagnostics. Callers that care pass a sink; otherwise messages
// go to stderr so they are never silently lost.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
    if (sink)
        sink->push_back(std::move(message));
    else
        std::cerr << "warning: " << message << '\n';
}

double mean(std::span<const double> v);
// Sample variance (n-1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> v);
double sample_sd(std::span<const double> v);

// Pearson correlation. Returns NaN when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace irtens
