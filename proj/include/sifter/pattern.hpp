#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace sifter {

using Spin = std::int8_t;

/// Fixed-length vector of +1/-1 spins. Construction validates every element,
/// so any BinaryPattern in circulation satisfies the spin invariant.
class BinaryPattern {
 public:
  BinaryPattern() = default;
  explicit BinaryPattern(std::vector<Spin> spins);
  BinaryPattern(std::initializer_list<int> spins);

  /// Length-n pattern with every spin set to `value`.
  static BinaryPattern filled(std::size_t n, Spin value);

  std::size_t size() const noexcept { return spins_.size(); }
  bool empty() const noexcept { return spins_.empty(); }

  Spin operator[](std::size_t i) const noexcept { return spins_[i]; }
  Spin at(std::size_t i) const;

  /// Setting a spin goes through here so the invariant can't be broken.
  void set(std::size_t i, Spin value);
  void flip(std::size_t i);

  std::span<const Spin> spins() const noexcept { return spins_; }

  BinaryPattern operator-() const;

  friend bool operator==(const BinaryPattern&, const BinaryPattern&) = default;

 private:
  std::vector<Spin> spins_;
};

/// Number of positions where the two patterns disagree.
std::size_t hamming_distance(const BinaryPattern& a, const BinaryPattern& b);

/// Sum of elementwise products.
std::int64_t overlap(const BinaryPattern& a, const BinaryPattern& b);

}  // namespace sifter
