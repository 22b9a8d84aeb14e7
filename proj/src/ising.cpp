#include "sifter/ising.hpp"

#include <cmath>
#include <string>

#include "sifter/error.hpp"

namespace sifter {

IsingLattice::IsingLattice(int width, int height, double coupling, double field, bool periodic)
    : width_(width), height_(height), coupling_(coupling), field_(field), periodic_(periodic) {
  if (width < 1 || height < 1) {
    throw ConfigError("ising lattice: dimensions must be positive, got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  if (periodic && (width < 3 || height < 3)) {
    throw ConfigError("ising lattice: periodic boundaries need at least 3x3");
  }
  spins_.assign(static_cast<std::size_t>(width) * height, 1);
}

IsingLattice IsingLattice::uniform(int width, int height, Spin value, double coupling,
                                   double field) {
  IsingLattice lattice(width, height, coupling, field);
  if (value != 1 && value != -1) throw ConfigError("ising lattice: spin must be +1 or -1");
  lattice.spins_.assign(lattice.spins_.size(), value);
  return lattice;
}

IsingLattice IsingLattice::random(int width, int height, double coupling, double field,
                                  std::uint64_t seed) {
  IsingLattice lattice(width, height, coupling, field);
  Rng rng(seed);
  for (auto& s : lattice.spins_) s = rng.coin() ? 1 : -1;
  return lattice;
}

std::size_t IsingLattice::index(int x, int y) const {
  if (x < 0 || x >= width_ || y < 0 || y >= height_) {
    throw DimensionError("ising lattice: (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") outside " + std::to_string(width_) + "x" + std::to_string(height_));
  }
  return static_cast<std::size_t>(y) * width_ + x;
}

void IsingLattice::set(int x, int y, Spin s) {
  if (s != 1 && s != -1) throw ConfigError("ising lattice: spin must be +1 or -1");
  spins_[index(x, y)] = s;
}

int IsingLattice::neighbour_sum(std::size_t site) const noexcept {
  const int x = static_cast<int>(site % width_);
  const int y = static_cast<int>(site / width_);
  int sum = 0;
  auto add = [&](int xx, int yy) {
    if (periodic_) {
      xx = (xx + width_) % width_;
      yy = (yy + height_) % height_;
    } else if (xx < 0 || xx >= width_ || yy < 0 || yy >= height_) {
      return;
    }
    sum += spins_[static_cast<std::size_t>(yy) * width_ + xx];
  };
  add(x - 1, y);
  add(x + 1, y);
  add(x, y - 1);
  add(x, y + 1);
  return sum;
}

double ising_energy(const IsingLattice& lattice) {
  const int w = lattice.width();
  const int h = lattice.height();
  long bonds = 0;
  long total = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int s = lattice.at(x, y);
      total += s;
      // Count each bond once: right and down neighbours only.
      if (x + 1 < w) {
        bonds += s * lattice.at(x + 1, y);
      } else if (lattice.periodic()) {
        bonds += s * lattice.at(0, y);
      }
      if (y + 1 < h) {
        bonds += s * lattice.at(x, y + 1);
      } else if (lattice.periodic()) {
        bonds += s * lattice.at(x, 0);
      }
    }
  }
  return -lattice.coupling() * static_cast<double>(bonds) -
         lattice.field() * static_cast<double>(total);
}

double flip_delta(const IsingLattice& lattice, std::size_t site) {
  const double s = lattice[site];
  return 2.0 * s * (lattice.coupling() * lattice.neighbour_sum(site) + lattice.field());
}

double magnetization(const IsingLattice& lattice) {
  long total = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) total += lattice[i];
  return static_cast<double>(total) / static_cast<double>(lattice.size());
}

bool glauber_step(IsingLattice& lattice, double temperature, Rng& rng) {
  if (!(temperature >= 0.0)) {
    throw ConfigError("glauber_step: temperature must be >= 0, got " +
                      std::to_string(temperature));
  }
  const auto site = static_cast<std::size_t>(rng.uniform_index(lattice.size()));
  const double delta = flip_delta(lattice, site);
  bool accept;
  if (temperature == 0.0) {
    accept = delta <= 0.0;
  } else {
    const double p = 1.0 / (1.0 + std::exp(delta / temperature));
    accept = rng.uniform01() < p;
  }
  if (accept) lattice.flip(site);
  return accept;
}

IsingLattice glauber_step(const IsingLattice& lattice, double temperature, std::uint64_t seed) {
  IsingLattice next = lattice;
  Rng rng(seed);
  glauber_step(next, temperature, rng);
  return next;
}

std::vector<IsingSample> run_glauber(IsingLattice& lattice, double temperature,
                                     std::uint64_t steps, std::uint64_t every,
                                     std::uint64_t seed) {
  if (every == 0) throw ConfigError("run_glauber: sampling interval must be >= 1");
  Rng rng(seed);
  std::vector<IsingSample> samples;
  samples.push_back({0, ising_energy(lattice), magnetization(lattice)});
  for (std::uint64_t step = 1; step <= steps; ++step) {
    glauber_step(lattice, temperature, rng);
    if (step % every == 0 || step == steps) {
      samples.push_back({step, ising_energy(lattice), magnetization(lattice)});
    }
  }
  return samples;
}

}  // namespace sifter
