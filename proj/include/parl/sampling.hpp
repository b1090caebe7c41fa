#pragma once

#include <vector>

#include "parl/config.hpp"
#include "parl/simulator.hpp"

namespace parl {

enum class SamplingScheme { Random, Quantile };

// Eq.-as-printed density weights at the quantile levels, or the uniform
// alternative (equal-probability quantiles carry equal weight).
enum class QuantileWeights { DensityAtLevel, Uniform };

// Weighted demand/production realizations for the per-step SAA objective.
struct SampleSet {
    std::vector<Realization> samples;
    std::vector<double> weights;  // positive, sum to 1
    SamplingScheme scheme = SamplingScheme::Random;

    void normalize();
};

// count i.i.d. draws with uniform weights 1/count.
SampleSet random_samples(const NetworkConfig& cfg, int count, Rng& rng);

// Per-dimension quantile levels q_i = (i-0.5)/count, samples F^-1(q_i)
// (clamp-rounded), pool weights as the per-dimension product, pool of
// count^dim combinations subsampled to the `count` largest-weight
// members, weights renormalized. Constant dimensions contribute their
// fixed value and do not enter the pool.
SampleSet quantile_samples(const NetworkConfig& cfg, int count,
                           QuantileWeights mode = QuantileWeights::DensityAtLevel);

}  // namespace parl
