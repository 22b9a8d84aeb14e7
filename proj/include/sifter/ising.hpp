#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sifter/pattern.hpp"
#include "sifter/rng.hpp"

namespace sifter {

/// 2-D square lattice of +/-1 spins with nearest-neighbour coupling J and a
/// uniform external field H (positive H favours +1).
class IsingLattice {
 public:
  IsingLattice(int width, int height, double coupling, double field, bool periodic = false);

  static IsingLattice uniform(int width, int height, Spin value, double coupling, double field);
  static IsingLattice random(int width, int height, double coupling, double field,
                             std::uint64_t seed);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return spins_.size(); }
  double coupling() const noexcept { return coupling_; }
  double field() const noexcept { return field_; }
  bool periodic() const noexcept { return periodic_; }

  Spin at(int x, int y) const { return spins_[index(x, y)]; }
  void set(int x, int y, Spin s);
  void flip(std::size_t site) { spins_[site] = static_cast<Spin>(-spins_[site]); }
  Spin operator[](std::size_t site) const noexcept { return spins_[site]; }

  /// Sum of the (up to four) neighbouring spins of `site`.
  int neighbour_sum(std::size_t site) const noexcept;

  friend bool operator==(const IsingLattice&, const IsingLattice&) = default;

 private:
  std::size_t index(int x, int y) const;

  int width_;
  int height_;
  double coupling_;
  double field_;
  bool periodic_;
  std::vector<Spin> spins_;
};

/// -J sum_<ij> s_i s_j - H sum_i s_i over horizontal and vertical pairs.
double ising_energy(const IsingLattice& lattice);

/// Energy change from flipping one site.
double flip_delta(const IsingLattice& lattice, std::size_t site);

/// Mean spin.
double magnetization(const IsingLattice& lattice);

/// One heat-bath move with the caller's stream: picks a uniform site and
/// flips it with probability 1 / (1 + exp(dE / T)); at T = 0 flips iff
/// dE <= 0. Returns whether the site flipped.
bool glauber_step(IsingLattice& lattice, double temperature, Rng& rng);

/// Pure single-step form.
IsingLattice glauber_step(const IsingLattice& lattice, double temperature, std::uint64_t seed);

struct IsingSample {
  std::uint64_t step;
  double energy;
  double magnetization;
};

/// Runs `steps` moves, sampling at step 0, every `every` steps, and at the end.
std::vector<IsingSample> run_glauber(IsingLattice& lattice, double temperature,
                                     std::uint64_t steps, std::uint64_t every,
                                     std::uint64_t seed);

}  // namespace sifter
