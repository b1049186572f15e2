#pragma once

#include <cstdint>
#include <random>

#include "config.hpp"
#include "types.hpp"

namespace satcs {

/// K-sparse unit-norm signal: support uniform without replacement, nonzero
/// values standard normal, then normalized to ||x||_2 = 1.
GroundTruth generate_signal(int n, int k, std::mt19937_64& rng);

/// Dense i.i.d. standard normal sensing matrix, filled row by row.
Eigen::MatrixXd generate_sensing_matrix(int m, int n, std::mt19937_64& rng);

/// Additive Gaussian noise. Noise variance = sample variance of `clean`
/// divided by noise_level under the snr convention, multiplied under nsr.
Eigen::VectorXd add_noise(const Eigen::VectorXd& clean, double noise_level,
                          NoiseConvention convention, std::mt19937_64& rng);

struct Thresholds {
  double y_min = 0.0;
  double y_max = 0.0;
  bool tie = false;  // duplicated magnitudes straddle the cut
};

/// Symmetric clipping levels placing exactly m2 measurements at or beyond
/// the threshold: T is the midpoint of the m2-th and (m2+1)-th largest
/// magnitudes. m2 = 0 puts T just above the largest magnitude.
Thresholds compute_thresholds(const Eigen::VectorXd& noisy, int m2);

struct SynthResult {
  GroundTruth truth;
  SaturatedDataset dataset;
  bool tie_broken = false;  // duplicate magnitudes at the cut were nudged
};

/// Full synthetic instance for (spec, trial): signal, matrix, noise, clip,
/// partition. Signal, matrix, and noise use independent sub-streams of
/// (spec.seed, trial_index), so changing the noise level preserves the
/// matrix and signal draws.
SynthResult synthesize(const ExperimentSpec& spec, std::uint64_t trial_index);

}  // namespace satcs
