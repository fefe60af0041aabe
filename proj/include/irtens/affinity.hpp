#pragma once

#include <cstddef>
#include <vector>

#include "irtens/matrix.hpp"

namespace irtens {

struct ApConfig {
    double damping = 0.9;
    // At damping 0.9, tied similarities (duplicated detectors) drift slowly
    // enough that a short stability window declares a spurious all-singleton
    // solution; the real exemplar set can take ~400 sweeps to lock in.
    int max_sweeps = 1000;
    int stable_sweeps = 50;  // exemplars unchanged this long counts as converged
};

struct ApResult {
    std::vector<std::size_t> exemplars;   // sorted ascending
    std::vector<std::size_t> assignment;  // point -> exemplar
    bool converged = false;
    int sweeps = 0;
};

/// Affinity propagation over a full similarity matrix. The diagonal carries
/// the preferences. Ties are broken toward the lowest index.
ApResult affinity_propagation(const Matrix& similarity, const ApConfig& cfg = {});

}  // namespace irtens
