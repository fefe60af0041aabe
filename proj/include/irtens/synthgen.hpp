#pragma once

#include <cstdint>
#include <string>

#include "irtens/core.hpp"

namespace irtens {

enum class Experiment { example, ex1, ex2, ex3 };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

struct ExperimentSpec {
    Experiment experiment = Experiment::ex1;
    int iterations = 10;
    int repetitions = 10;
    std::uint64_t seed = 1;
};

/// Seed for the (experiment, iteration, repetition) stream; replicates are
/// independent yet reproducible from one base seed.
std::uint64_t stream_seed(std::uint64_t base_seed, Experiment e, int iteration,
                          int repetition);

/// 2-D annulus (97 points, radius U(4.5, 5.5)) plus 3 labeled anomalies near
/// the center (N(0, 0.3^2) per coordinate). 100 points total.
LabeledDataset gen_example(std::uint64_t seed);

/// 400 N(0,1)^6 points plus 5 anomalies whose first coordinate follows
/// N(2 + (iteration-1)/2, 0.2). The anomaly sample mean is kept within three
/// standard errors of its target.
LabeledDataset gen_ex1(int iteration, std::uint64_t seed);

/// 800 points on an annulus in dims 1-2 of R^4 (N(0,1) in dims 3-4) plus 5
/// anomalies with x1 ~ N(5 - (iteration-1)/2, 0.1), x2 ~ N(0, 0.1).
LabeledDataset gen_ex2(int iteration, std::uint64_t seed);

/// Bimodal x1 in R^6: 400 points at each of x1 = -5 and x1 = +5 (SD 1 in all
/// dims) plus 5 anomalies with x1 ~ N(3 - (iteration-1)*0.3, 0.2).
LabeledDataset gen_ex3(int iteration, std::uint64_t seed);

LabeledDataset generate(Experiment e, int iteration, std::uint64_t seed);

}  // namespace irtens
