#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sifter/hopfield.hpp"
#include "sifter/rng.hpp"

namespace sifter {

/// Outcome of the Monte Carlo stability experiment at one load factor.
struct StabilityReport {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t trials = 0;
  double alpha = 0.0;
  /// One entry per (trial, stored pattern), trial-major.
  std::vector<double> per_pattern_unstable_fraction;
  double mean_unstable_fraction = 0.0;
  /// Variance of eta_i = h_i/n - (1 - 1/n) xi_i pooled over neurons,
  /// patterns and trials.
  double crosstalk_variance_empirical = 0.0;
  double crosstalk_variance_predicted = 0.0;
  double union_bound_failure_prob = 0.0;
};

/// Uniform random +/-1 pattern.
BinaryPattern random_pattern(std::size_t n, Rng& rng);

/// (P - 1) / N.
double predicted_crosstalk_variance(std::size_t n, std::size_t p);

/// N * exp(-N / (2 (P - 1))); zero when P = 1 (no interference term).
double union_bound_failure(std::size_t n, std::size_t p);

/// Classical estimate n / (2 log2 n) of how many patterns a network of n
/// neurons can recall.
double theoretical_capacity(std::size_t n);

/// Runs `trials` independent store-and-probe experiments for each P.
/// Requires n >= 16, P >= 1, trials >= 1.
std::vector<StabilityReport> analyze_capacity(std::size_t n, std::span<const std::size_t> p_values,
                                              std::size_t trials, std::uint64_t seed);

}  // namespace sifter
