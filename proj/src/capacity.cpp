#include "sifter/capacity.hpp"

#include <cmath>
#include <string>

#include "sifter/error.hpp"

namespace sifter {

BinaryPattern random_pattern(std::size_t n, Rng& rng) {
  std::vector<Spin> spins(n);
  for (auto& s : spins) s = rng.coin() ? 1 : -1;
  return BinaryPattern(std::move(spins));
}

double predicted_crosstalk_variance(std::size_t n, std::size_t p) {
  return static_cast<double>(p - 1) / static_cast<double>(n);
}

double union_bound_failure(std::size_t n, std::size_t p) {
  if (p <= 1) return 0.0;
  const double dn = static_cast<double>(n);
  return dn * std::exp(-0.5 * dn / static_cast<double>(p - 1));
}

double theoretical_capacity(std::size_t n) {
  const double dn = static_cast<double>(n);
  return dn / (2.0 * std::log2(dn));
}

std::vector<StabilityReport> analyze_capacity(std::size_t n, std::span<const std::size_t> p_values,
                                              std::size_t trials, std::uint64_t seed) {
  if (n < 16) throw ConfigError("analyze_capacity: n must be >= 16, got " + std::to_string(n));
  if (trials < 1) throw ConfigError("analyze_capacity: trials must be >= 1");
  for (auto p : p_values) {
    if (p < 1) throw ConfigError("analyze_capacity: every P must be >= 1");
  }

  const double dn = static_cast<double>(n);

  std::vector<StabilityReport> reports;
  reports.reserve(p_values.size());
  for (const auto p : p_values) {
    StabilityReport report;
    report.n = n;
    report.p = p;
    report.trials = trials;
    report.alpha = static_cast<double>(p) / dn;
    report.crosstalk_variance_predicted = predicted_crosstalk_variance(n, p);
    report.union_bound_failure_prob = union_bound_failure(n, p);
    report.per_pattern_unstable_fraction.reserve(p * trials);

    double eta_sum = 0.0;
    double eta_sq_sum = 0.0;
    std::uint64_t eta_count = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      Rng rng(derive_seed(seed, p, trial));
      std::vector<BinaryPattern> patterns;
      patterns.reserve(p);
      for (std::size_t mu = 0; mu < p; ++mu) patterns.push_back(random_pattern(n, rng));
      const auto net = train_hebbian(patterns, n);

      for (const auto& xi : patterns) {
        const auto fields = local_fields(net, xi);
        std::size_t unstable = 0;
        for (std::size_t i = 0; i < n; ++i) {
          unstable += xi[i] * fields[i] <= 0;
          // Numerator is exact, so P = 1 gives eta == 0 with no rounding.
          const auto crosstalk = fields[i] - static_cast<std::int64_t>(n - 1) * xi[i];
          const double eta = static_cast<double>(crosstalk) / dn;
          eta_sum += eta;
          eta_sq_sum += eta * eta;
        }
        eta_count += n;
        report.per_pattern_unstable_fraction.push_back(static_cast<double>(unstable) / dn);
      }
    }

    double total = 0.0;
    for (auto f : report.per_pattern_unstable_fraction) total += f;
    report.mean_unstable_fraction =
        total / static_cast<double>(report.per_pattern_unstable_fraction.size());
    const double mean = eta_sum / static_cast<double>(eta_count);
    report.crosstalk_variance_empirical =
        std::max(0.0, eta_sq_sum / static_cast<double>(eta_count) - mean * mean);
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace sifter
