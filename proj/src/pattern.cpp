#include "sifter/pattern.hpp"

#include <string>

#include "sifter/error.hpp"

namespace sifter {

namespace {
void require_spin(long value, std::size_t index) {
  if (value != 1 && value != -1) {
    throw ConfigError("pattern element " + std::to_string(index) + " is " +
                      std::to_string(value) + ", expected +1 or -1");
  }
}
}  // namespace

BinaryPattern::BinaryPattern(std::vector<Spin> spins) : spins_(std::move(spins)) {
  for (std::size_t i = 0; i < spins_.size(); ++i) require_spin(spins_[i], i);
}

BinaryPattern::BinaryPattern(std::initializer_list<int> spins) {
  spins_.reserve(spins.size());
  std::size_t i = 0;
  for (int s : spins) {
    require_spin(s, i++);
    spins_.push_back(static_cast<Spin>(s));
  }
}

BinaryPattern BinaryPattern::filled(std::size_t n, Spin value) {
  require_spin(value, 0);
  BinaryPattern p;
  p.spins_.assign(n, value);
  return p;
}

Spin BinaryPattern::at(std::size_t i) const {
  if (i >= spins_.size()) {
    throw DimensionError("spin index " + std::to_string(i) + " out of range for length " +
                         std::to_string(spins_.size()));
  }
  return spins_[i];
}

void BinaryPattern::set(std::size_t i, Spin value) {
  require_spin(value, i);
  if (i >= spins_.size()) {
    throw DimensionError("spin index " + std::to_string(i) + " out of range for length " +
                         std::to_string(spins_.size()));
  }
  spins_[i] = value;
}

void BinaryPattern::flip(std::size_t i) { set(i, static_cast<Spin>(-at(i))); }

BinaryPattern BinaryPattern::operator-() const {
  BinaryPattern out = *this;
  for (auto& s : out.spins_) s = static_cast<Spin>(-s);
  return out;
}

std::size_t hamming_distance(const BinaryPattern& a, const BinaryPattern& b) {
  if (a.size() != b.size()) {
    throw DimensionError("hamming_distance: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::int64_t overlap(const BinaryPattern& a, const BinaryPattern& b) {
  if (a.size() != b.size()) {
    throw DimensionError("overlap: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace sifter
