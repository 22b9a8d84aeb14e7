#include "sifter/hopfield.hpp"

#include <cstdlib>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <string>

#include "sifter/detail/byte_io.hpp"
#include "sifter/error.hpp"
#include "sifter/kernels.hpp"
#include "sifter/rng.hpp"

namespace sifter {

namespace {

void require_length(const HopfieldNetwork& net, const BinaryPattern& state, const char* op) {
  if (state.size() != net.n()) {
    throw DimensionError(std::string(op) + ": state length " + std::to_string(state.size()) +
                         " does not match network size " + std::to_string(net.n()));
  }
}

void require_index(const HopfieldNetwork& net, std::size_t i, const char* op) {
  if (i >= net.n()) {
    throw DimensionError(std::string(op) + ": index " + std::to_string(i) +
                         " out of range for network size " + std::to_string(net.n()));
  }
}

}  // namespace

WeightMatrix::WeightMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}

WeightMatrix::WeightMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n) {
    throw DimensionError("weight matrix: " + std::to_string(entries_.size()) +
                         " entries for n = " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if ((*this)(i, i) != 0) {
      throw DataError("weight matrix: nonzero diagonal at " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) {
        throw DataError("weight matrix: asymmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
      }
    }
  }
}

std::int64_t WeightMatrix::max_abs() const noexcept {
  std::int64_t m = 0;
  for (auto w : entries_) m = std::max(m, w < 0 ? -w : w);
  return m;
}

HopfieldNetwork::HopfieldNetwork(WeightMatrix weights, std::vector<double> thresholds,
                                 std::size_t stored_count)
    : weights_(std::move(weights)),
      thresholds_(std::move(thresholds)),
      stored_count_(stored_count) {
  if (thresholds_.size() != weights_.n()) {
    throw DimensionError("network: " + std::to_string(thresholds_.size()) +
                         " thresholds for n = " + std::to_string(weights_.n()));
  }
}

HebbianTrainer::HebbianTrainer(std::size_t n) : weights_(n) {
  if (n < 2) throw ConfigError("hebbian training needs n >= 2, got " + std::to_string(n));
}

void HebbianTrainer::add(const BinaryPattern& pattern) {
  if (pattern.size() != weights_.n()) {
    throw DimensionError("hebbian training: pattern " + std::to_string(count_) +
                         " has length " + std::to_string(pattern.size()) + ", expected " +
                         std::to_string(weights_.n()));
  }
  kernels::parallel::hebbian_accumulate(weights_.entries_, weights_.n(), pattern.spins());
  ++count_;
}

HopfieldNetwork HebbianTrainer::finish() && {
  if (count_ == 0) throw DataError("hebbian training: empty pattern set");
  const auto n = weights_.n();
  return HopfieldNetwork(std::move(weights_), std::vector<double>(n, 0.0), count_);
}

HopfieldNetwork train_hebbian(std::span<const BinaryPattern> patterns, std::size_t n) {
  if (patterns.empty()) throw DataError("hebbian training: empty pattern set");
  HebbianTrainer trainer(n);
  for (const auto& p : patterns) trainer.add(p);
  return std::move(trainer).finish();
}

std::int64_t pair_energy(const WeightMatrix& weights, const BinaryPattern& state) {
  if (state.size() != weights.n()) {
    throw DimensionError("energy: state length " + std::to_string(state.size()) +
                         " does not match network size " + std::to_string(weights.n()));
  }
  std::vector<std::int64_t> fields(weights.n());
  kernels::parallel::local_fields(weights.entries(), weights.n(), state.spins(), fields);
  // sum_i s_i h_i counts every unordered pair twice.
  std::int64_t twice = 0;
  for (std::size_t i = 0; i < weights.n(); ++i) twice += state[i] * fields[i];
  return -twice / 2;
}

double energy(const HopfieldNetwork& net, const BinaryPattern& state) {
  require_length(net, state, "energy");
  double e = static_cast<double>(pair_energy(net.weights(), state));
  const auto tau = net.thresholds();
  for (std::size_t i = 0; i < net.n(); ++i) e -= tau[i] * state[i];
  return e;
}

std::int64_t local_field(const HopfieldNetwork& net, const BinaryPattern& state,
                         std::size_t i) {
  require_length(net, state, "local_field");
  require_index(net, i, "local_field");
  return kernels::row_dot(net.weights().row(i), state.spins());
}

std::vector<std::int64_t> local_fields(const HopfieldNetwork& net,
                                       const BinaryPattern& state) {
  require_length(net, state, "local_fields");
  std::vector<std::int64_t> out(net.n());
  kernels::parallel::local_fields(net.weights().entries(), net.n(), state.spins(), out);
  return out;
}

bool update_in_place(const HopfieldNetwork& net, BinaryPattern& state, std::size_t i,
                     OpCounter* counter) {
  const auto input = kernels::row_dot(net.weights().row(i), state.spins());
  if (counter != nullptr) {
    counter->flops += 2 * static_cast<std::uint64_t>(net.n());
    counter->updates += 1;
  }
  // Strict comparison: a net input equal to the threshold falls to -1.
  const Spin next = static_cast<double>(input) > net.thresholds()[i] ? 1 : -1;
  if (next == state[i]) return false;
  state.set(i, next);
  return true;
}

BinaryPattern update_step(const HopfieldNetwork& net, const BinaryPattern& state,
                          std::size_t i) {
  require_length(net, state, "update_step");
  require_index(net, i, "update_step");
  BinaryPattern next = state;
  update_in_place(net, next, i);
  return next;
}

BinaryPattern recall(const HopfieldNetwork& net, const BinaryPattern& initial,
                     std::uint64_t iterations, std::uint64_t seed, UpdateOrder order,
                     OpCounter* counter) {
  require_length(net, initial, "recall");
  BinaryPattern state = initial;
  const std::size_t n = net.n();
  if (iterations == 0 || n == 0) return state;

  Rng rng(seed);
  if (order == UpdateOrder::kWithReplacement) {
    for (std::uint64_t it = 0; it < iterations; ++it) {
      update_in_place(net, state, rng.uniform_index(n), counter);
    }
    return state;
  }

  std::vector<std::size_t> visit(n);
  for (std::uint64_t it = 0; it < iterations; ++it) {
    const auto pos = static_cast<std::size_t>(it % n);
    if (pos == 0) {
      std::iota(visit.begin(), visit.end(), std::size_t{0});
      rng.shuffle(visit);
    }
    update_in_place(net, state, visit[pos], counter);
  }
  return state;
}

SweepResult recall_sweep(const HopfieldNetwork& net, const BinaryPattern& initial,
                         std::size_t max_sweeps, OpCounter* counter) {
  require_length(net, initial, "recall_sweep");
  SweepResult result{initial, false, 0};
  while (result.sweeps < max_sweeps) {
    bool changed = false;
    for (std::size_t i = 0; i < net.n(); ++i) {
      changed = update_in_place(net, result.state, i, counter) || changed;
    }
    ++result.sweeps;
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double check_stability(const HopfieldNetwork& net, const BinaryPattern& pattern) {
  require_length(net, pattern, "check_stability");
  if (net.n() == 0) return 0.0;
  const auto fields = local_fields(net, pattern);
  std::size_t unstable = 0;
  for (std::size_t i = 0; i < net.n(); ++i) unstable += pattern[i] * fields[i] <= 0;
  return static_cast<double>(unstable) / static_cast<double>(net.n());
}

// --- serialization -------------------------------------------------------

namespace {
constexpr std::string_view kMagic = "HOPW";
}

std::vector<std::uint8_t> serialize_network(const HopfieldNetwork& net) {
  detail::ByteWriter w;
  w.buffer().reserve(16 + net.n() * net.n() * 8 + net.n() * 8);
  w.bytes(kMagic);
  w.u32(kWeightFormatVersion);
  w.u32(static_cast<std::uint32_t>(net.n()));
  w.u32(static_cast<std::uint32_t>(net.stored_count()));
  for (auto e : net.weights().entries()) w.i64(e);
  for (auto t : net.thresholds()) w.f64(t);
  return std::move(w.buffer());
}

HopfieldNetwork deserialize_network(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "weight container");
  const auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
    throw DataError("weight container: bad magic (expected HOPW)");
  }
  const auto version = r.u32();
  if (version != kWeightFormatVersion) {
    throw DataError("weight container: unsupported version " + std::to_string(version));
  }
  const std::size_t n = r.u32();
  const std::size_t stored = r.u32();
  if (bytes.size() - r.position() != n * n * 8 + n * 8) {
    throw DataError("weight container: payload is " +
                    std::to_string(bytes.size() - r.position()) + " bytes, expected " +
                    std::to_string(n * n * 8 + n * 8) + " for n = " + std::to_string(n));
  }
  std::vector<std::int64_t> entries(n * n);
  for (auto& e : entries) e = r.i64();
  std::vector<double> thresholds(n);
  for (auto& t : thresholds) t = r.f64();
  return HopfieldNetwork(WeightMatrix(n, std::move(entries)), std::move(thresholds), stored);
}

void write_network(std::ostream& out, const HopfieldNetwork& net) {
  const auto bytes = serialize_network(net);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("weight container: write failed");
}

HopfieldNetwork read_network(std::istream& in) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return deserialize_network(bytes);
}

}  // namespace sifter
