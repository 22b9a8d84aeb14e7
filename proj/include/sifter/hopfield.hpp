#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sifter/pattern.hpp"

namespace sifter {

/// Symmetric N x N integer coupling matrix with zero diagonal, stored
/// row-major. Entries are unnormalized Hebbian sums; any 1/N scaling is the
/// caller's business.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t n);

  /// Validates symmetry and the zero diagonal.
  WeightMatrix(std::size_t n, std::vector<std::int64_t> entries);

  std::size_t n() const noexcept { return n_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * n_ + j];
  }
  std::span<const std::int64_t> row(std::size_t i) const noexcept {
    return std::span<const std::int64_t>(entries_).subspan(i * n_, n_);
  }
  std::span<const std::int64_t> entries() const noexcept { return entries_; }

  /// Largest |w_ij|.
  std::int64_t max_abs() const noexcept;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  friend class HebbianTrainer;
  std::size_t n_ = 0;
  std::vector<std::int64_t> entries_;
};

/// Optional instrumentation: multiply-adds spent computing net inputs.
/// One net input over a length-n row costs 2n (n multiplies, n adds).
struct OpCounter {
  std::uint64_t flops = 0;
  std::uint64_t updates = 0;
};

class HopfieldNetwork {
 public:
  HopfieldNetwork() = default;
  HopfieldNetwork(WeightMatrix weights, std::vector<double> thresholds,
                  std::size_t stored_count);

  std::size_t n() const noexcept { return weights_.n(); }
  const WeightMatrix& weights() const noexcept { return weights_; }
  std::span<const double> thresholds() const noexcept { return thresholds_; }
  std::size_t stored_count() const noexcept { return stored_count_; }

  friend bool operator==(const HopfieldNetwork&, const HopfieldNetwork&) = default;

 private:
  WeightMatrix weights_;
  std::vector<double> thresholds_;
  std::size_t stored_count_ = 0;
};

/// Order in which recall visits neurons.
enum class UpdateOrder {
  /// Each consecutive block of n updates visits every neuron once, in a
  /// freshly shuffled order. Default.
  kShuffledSweeps,
  /// Independent uniform draws with replacement.
  kWithReplacement,
};

/// Incremental Hebbian accumulator. Patterns can be added one at a time,
/// which is how the purifier feeds images in.
class HebbianTrainer {
 public:
  explicit HebbianTrainer(std::size_t n);

  void add(const BinaryPattern& pattern);
  std::size_t count() const noexcept { return count_; }

  HopfieldNetwork finish() &&;

 private:
  WeightMatrix weights_;
  std::size_t count_ = 0;
};

/// w_ij = sum over patterns of V(i)V(j), w_ii = 0, thresholds zero.
HopfieldNetwork train_hebbian(std::span<const BinaryPattern> patterns, std::size_t n);

/// -sum_{i<j} w_ij s_i s_j - sum_i tau_i s_i.
double energy(const HopfieldNetwork& net, const BinaryPattern& state);

/// Pair part of the energy, exact: -sum_{i<j} w_ij s_i s_j.
std::int64_t pair_energy(const WeightMatrix& weights, const BinaryPattern& state);

/// sum_{j != i} w_ij s_j, unnormalized.
std::int64_t local_field(const HopfieldNetwork& net, const BinaryPattern& state,
                         std::size_t i);

/// Every local field at once (parallel kernel).
std::vector<std::int64_t> local_fields(const HopfieldNetwork& net,
                                       const BinaryPattern& state);

/// Sets spin i to +1 when its net input strictly exceeds tau_i, else -1.
BinaryPattern update_step(const HopfieldNetwork& net, const BinaryPattern& state,
                          std::size_t i);

/// In-place form used by the recall loops. Returns true if the spin changed.
bool update_in_place(const HopfieldNetwork& net, BinaryPattern& state, std::size_t i,
                     OpCounter* counter = nullptr);

/// `iterations` asynchronous single-spin updates at indices drawn from a
/// stream seeded by `seed`. Pure: same inputs give the same output.
BinaryPattern recall(const HopfieldNetwork& net, const BinaryPattern& initial,
                     std::uint64_t iterations, std::uint64_t seed,
                     UpdateOrder order = UpdateOrder::kShuffledSweeps,
                     OpCounter* counter = nullptr);

struct SweepResult {
  BinaryPattern state;
  bool converged = false;
  std::size_t sweeps = 0;
};

inline constexpr std::size_t kDefaultSweepCap = 100;

/// Deterministic variant: in-order sweeps over 0..n-1 until a sweep changes
/// nothing or `max_sweeps` is reached.
SweepResult recall_sweep(const HopfieldNetwork& net, const BinaryPattern& initial,
                         std::size_t max_sweeps = kDefaultSweepCap,
                         OpCounter* counter = nullptr);

/// Fraction of neurons with xi_i * h_i(xi) <= 0.
double check_stability(const HopfieldNetwork& net, const BinaryPattern& pattern);

// Binary container: "HOPW", u32 version, u32 n, u32 stored_count,
// n*n little-endian i64 entries row-major, n little-endian f64 thresholds.
inline constexpr std::uint32_t kWeightFormatVersion = 1;

void write_network(std::ostream& out, const HopfieldNetwork& net);
HopfieldNetwork read_network(std::istream& in);

std::vector<std::uint8_t> serialize_network(const HopfieldNetwork& net);
HopfieldNetwork deserialize_network(std::span<const std::uint8_t> bytes);

}  // namespace sifter
