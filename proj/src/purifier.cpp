#include "sifter/purifier.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>

#include "sifter/detail/byte_io.hpp"
#include "sifter/error.hpp"
#include "sifter/rng.hpp"

namespace sifter {

// --- scramble ------------------------------------------------------------

Permutation::Permutation(std::vector<std::uint32_t> forward) : forward_(std::move(forward)) {
  inverse_.assign(forward_.size(), 0);
  std::vector<bool> seen(forward_.size(), false);
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    const auto target = forward_[i];
    if (target >= forward_.size() || seen[target]) {
      throw DataError("permutation: entry " + std::to_string(i) + " = " + std::to_string(target) +
                      " is out of range or repeated");
    }
    seen[target] = true;
    inverse_[target] = static_cast<std::uint32_t>(i);
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> f(n);
  std::iota(f.begin(), f.end(), 0U);
  return Permutation(std::move(f));
}

Permutation make_scramble(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("make_scramble: n must be >= 1");
  std::vector<std::uint32_t> f(n);
  std::iota(f.begin(), f.end(), 0U);
  Rng rng(seed);
  rng.shuffle(f);
  return Permutation(std::move(f));
}

namespace {

void require_size(std::size_t have, std::size_t want) {
  if (have != want) {
    throw DimensionError("permutation of size " + std::to_string(want) +
                         " applied to length " + std::to_string(have));
  }
}

template <typename T>
std::vector<T> scatter(std::span<const T> in, std::span<const std::uint32_t> to) {
  std::vector<T> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[to[i]] = in[i];
  return out;
}

}  // namespace

BinaryPattern Permutation::apply(const BinaryPattern& p) const {
  require_size(p.size(), size());
  return BinaryPattern(scatter(p.spins(), forward()));
}

BinaryPattern Permutation::undo(const BinaryPattern& p) const {
  require_size(p.size(), size());
  return BinaryPattern(scatter(p.spins(), inverse()));
}

GrayImage Permutation::apply(const GrayImage& img) const {
  require_size(img.size(), size());
  return GrayImage(img.width(), img.height(), scatter(img.pixels(), forward()));
}

GrayImage Permutation::undo(const GrayImage& img) const {
  require_size(img.size(), size());
  return GrayImage(img.width(), img.height(), scatter(img.pixels(), inverse()));
}

Image Permutation::apply(const Image& img) const {
  std::vector<GrayImage> planes;
  for (const auto& p : img.planes()) planes.push_back(apply(p));
  return Image(std::move(planes));
}

Image Permutation::undo(const Image& img) const {
  std::vector<GrayImage> planes;
  for (const auto& p : img.planes()) planes.push_back(undo(p));
  return Image(std::move(planes));
}

// --- config --------------------------------------------------------------

PurifierConfig PurifierConfig::defaults_for(int width, int height, int channels) {
  PurifierConfig c;
  if (channels == 3 && width == 32 && height == 32) {
    c.binarization = Binarization::local_diff(21);
    c.remove_time = 200;
  } else if (channels == 1 && width == 28 && height == 28) {
    c.binarization = Binarization::global(127);
    c.remove_time = 1000;
  }
  return c;
}

void PurifierConfig::validate() const {
  if (binarization.threshold < 0 || binarization.threshold > 255) {
    throw ConfigError("threshold must be in [0, 255], got " +
                      std::to_string(binarization.threshold));
  }
  if (binarization.mode == Binarization::Mode::kLocalDiff &&
      (binarization.k_size < 1 || binarization.k_size % 2 == 0)) {
    throw ConfigError("k_size must be odd and positive, got " +
                      std::to_string(binarization.k_size));
  }
  if (seeds_per_class < 1) throw ConfigError("seeds_per_class must be >= 1");
}

std::string to_string(UpdateOrder order) {
  return order == UpdateOrder::kShuffledSweeps ? "shuffled" : "replacement";
}

UpdateOrder parse_update_order(const std::string& text) {
  if (text == "shuffled") return UpdateOrder::kShuffledSweeps;
  if (text == "replacement") return UpdateOrder::kWithReplacement;
  throw ConfigError("unknown update order '" + text + "' (expected shuffled or replacement)");
}

KeyValueConfig PurifierConfig::to_config(const std::string& prefix) const {
  KeyValueConfig kv;
  kv.set(prefix + "binarize", to_string(binarization.mode));
  kv.set(prefix + "threshold", std::int64_t{binarization.threshold});
  kv.set(prefix + "k_size", std::int64_t{binarization.k_size});
  kv.set(prefix + "remove_time", static_cast<std::int64_t>(remove_time));
  kv.set(prefix + "seed", static_cast<std::int64_t>(seed));
  kv.set(prefix + "seeds_per_class", static_cast<std::int64_t>(seeds_per_class));
  kv.set(prefix + "scramble", scramble);
  kv.set(prefix + "scramble_seed", static_cast<std::int64_t>(scramble_seed));
  kv.set(prefix + "update_order", to_string(update_order));
  return kv;
}

PurifierConfig PurifierConfig::from_config(const KeyValueConfig& kv, const PurifierConfig& base,
                                           const std::string& prefix) {
  PurifierConfig c = base;
  if (auto v = kv.get_string(prefix + "binarize")) c.binarization.mode = parse_binarize_mode(*v);
  if (auto v = kv.get_int(prefix + "threshold")) c.binarization.threshold = static_cast<int>(*v);
  if (auto v = kv.get_int(prefix + "k_size")) c.binarization.k_size = static_cast<int>(*v);
  if (auto v = kv.get_int(prefix + "remove_time")) {
    if (*v < 0) throw ConfigError("remove_time must be >= 0");
    c.remove_time = static_cast<std::uint64_t>(*v);
  }
  if (auto v = kv.get_int(prefix + "seed")) c.seed = static_cast<std::uint64_t>(*v);
  if (auto v = kv.get_int(prefix + "seeds_per_class")) {
    if (*v < 1) throw ConfigError("seeds_per_class must be >= 1");
    c.seeds_per_class = static_cast<std::size_t>(*v);
  }
  if (auto v = kv.get_bool(prefix + "scramble")) c.scramble = *v;
  if (auto v = kv.get_int(prefix + "scramble_seed")) c.scramble_seed = static_cast<std::uint64_t>(*v);
  if (auto v = kv.get_string(prefix + "update_order")) c.update_order = parse_update_order(*v);
  c.validate();
  return c;
}

// --- purifier ------------------------------------------------------------

TrainedPurifier::TrainedPurifier(PurifierConfig config, int width, int height,
                                 std::vector<HopfieldNetwork> channels,
                                 std::optional<Permutation> scramble)
    : config_(std::move(config)),
      width_(width),
      height_(height),
      networks_(std::move(channels)),
      scramble_(std::move(scramble)) {
  if (networks_.size() != 1 && networks_.size() != 3) {
    throw DimensionError("purifier: channel count must be 1 or 3, got " +
                         std::to_string(networks_.size()));
  }
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  for (const auto& net : networks_) {
    if (net.n() != n) {
      throw DimensionError("purifier: network size " + std::to_string(net.n()) +
                           " does not match " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
  }
  if (config_.scramble != scramble_.has_value()) {
    throw DataError("purifier: scramble flag and permutation disagree");
  }
  if (scramble_ && scramble_->size() != n) {
    throw DimensionError("purifier: scramble permutation has wrong length");
  }
}

TrainedPurifier TrainedPurifier::with_recall(std::uint64_t remove_time, std::uint64_t seed) const {
  TrainedPurifier copy = *this;
  copy.config_.remove_time = remove_time;
  copy.config_.seed = seed;
  return copy;
}

SeedDataset select_seeds(const SeedDataset& dataset, std::size_t per_class, std::uint64_t seed) {
  if (per_class < 1) throw ConfigError("select_seeds: per_class must be >= 1");
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(dataset.class_count));
  for (std::size_t i = 0; i < dataset.items.size(); ++i) {
    const int label = dataset.items[i].label;
    if (label < 0 || label >= dataset.class_count) {
      throw DataError("select_seeds: item " + std::to_string(i) + " has label " +
                      std::to_string(label) + " outside [0, " +
                      std::to_string(dataset.class_count) + ")");
    }
    by_class[static_cast<std::size_t>(label)].push_back(i);
  }

  SeedDataset out;
  out.class_count = dataset.class_count;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) {
      throw DataError("select_seeds: class " + std::to_string(c) +
                      " has no samples; seeds must cover every class");
    }
    if (idx.size() > per_class) {
      Rng rng(derive_seed(seed, c));
      rng.shuffle(idx);
      idx.resize(per_class);
      std::sort(idx.begin(), idx.end());
    }
    for (auto i : idx) out.items.push_back(dataset.items[i]);
  }
  return out;
}

TrainedPurifier train_purifier(const SeedDataset& seeds, const PurifierConfig& config) {
  config.validate();
  if (seeds.empty()) throw DataError("train_purifier: seed set is empty");
  const auto& first = seeds.items.front().image;
  for (std::size_t i = 0; i < seeds.items.size(); ++i) {
    const auto& img = seeds.items[i].image;
    if (img.channels() != first.channels()) {
      throw DimensionError("train_purifier: seed " + std::to_string(i) + " has " +
                           std::to_string(img.channels()) + " channels, seed 0 has " +
                           std::to_string(first.channels()));
    }
    if (!img.same_shape(first)) {
      throw DimensionError("train_purifier: seed " + std::to_string(i) + " is " +
                           std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                           ", seed 0 is " + std::to_string(first.width()) + "x" +
                           std::to_string(first.height()));
    }
  }

  const std::size_t n = static_cast<std::size_t>(first.width()) * first.height();
  std::optional<Permutation> scramble;
  if (config.scramble) scramble = make_scramble(n, config.scramble_seed);

  std::vector<HopfieldNetwork> networks;
  for (int c = 0; c < first.channels(); ++c) {
    HebbianTrainer trainer(n);
    for (const auto& item : seeds.items) {
      auto pattern = image_to_pattern(config.binarization.apply(item.image.channel(c)));
      if (scramble) pattern = scramble->apply(pattern);
      trainer.add(pattern);
    }
    networks.push_back(std::move(trainer).finish());
  }
  return TrainedPurifier(config, first.width(), first.height(), std::move(networks),
                         std::move(scramble));
}

std::uint64_t recall_seed(std::uint64_t base_seed, std::uint64_t ordinal, int channel) {
  return derive_seed(base_seed, ordinal, static_cast<std::uint64_t>(channel));
}

namespace {

void require_shape(const TrainedPurifier& purifier, const Image& img, std::size_t index) {
  if (!purifier.accepts(img)) {
    throw DimensionError("image " + std::to_string(index) + " is " + std::to_string(img.width()) +
                         "x" + std::to_string(img.height()) + "x" +
                         std::to_string(img.channels()) + ", purifier expects " +
                         std::to_string(purifier.width()) + "x" +
                         std::to_string(purifier.height()) + "x" +
                         std::to_string(purifier.channels()));
  }
}

Image purify_unchecked(const TrainedPurifier& purifier, const Image& img, std::uint64_t ordinal) {
  const auto& config = purifier.config();
  std::vector<GrayImage> planes;
  planes.reserve(static_cast<std::size_t>(img.channels()));
  for (int c = 0; c < img.channels(); ++c) {
    auto pattern = image_to_pattern(config.binarization.apply(img.channel(c)));
    if (purifier.scramble()) pattern = purifier.scramble()->apply(pattern);
    pattern = recall(purifier.network(c), pattern, config.remove_time,
                     recall_seed(config.seed, ordinal, c), config.update_order);
    if (purifier.scramble()) pattern = purifier.scramble()->undo(pattern);
    planes.push_back(pattern_to_image(pattern, img.width(), img.height()).plane());
  }
  return Image(std::move(planes));
}

}  // namespace

Image purify(const TrainedPurifier& purifier, const Image& img, std::uint64_t ordinal) {
  require_shape(purifier, img, ordinal);
  return purify_unchecked(purifier, img, ordinal);
}

std::vector<Image> purify_batch_serial(const TrainedPurifier& purifier,
                                       std::span<const Image> images,
                                       std::uint64_t first_ordinal) {
  for (std::size_t k = 0; k < images.size(); ++k) require_shape(purifier, images[k], k);
  std::vector<Image> out;
  out.reserve(images.size());
  for (std::size_t k = 0; k < images.size(); ++k) {
    out.push_back(purify_unchecked(purifier, images[k], first_ordinal + k));
  }
  return out;
}

std::vector<Image> purify_batch(const TrainedPurifier& purifier, std::span<const Image> images,
                                std::uint64_t first_ordinal) {
  for (std::size_t k = 0; k < images.size(); ++k) require_shape(purifier, images[k], k);
  std::vector<Image> out(images.size());
  const auto count = static_cast<std::int64_t>(images.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] =
        purify_unchecked(purifier, images[static_cast<std::size_t>(k)],
                         first_ordinal + static_cast<std::uint64_t>(k));
  }
  return out;
}

// --- serialization -------------------------------------------------------

namespace {
constexpr std::string_view kPurifierMagic = "SFTR";
}

std::vector<std::uint8_t> serialize_purifier(const TrainedPurifier& purifier) {
  detail::ByteWriter w;
  w.bytes(kPurifierMagic);
  w.u32(kPurifierFormatVersion);
  const auto text = purifier.config().to_config().to_text();
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text);
  w.u32(static_cast<std::uint32_t>(purifier.width()));
  w.u32(static_cast<std::uint32_t>(purifier.height()));
  w.u32(static_cast<std::uint32_t>(purifier.channels()));
  for (int c = 0; c < purifier.channels(); ++c) {
    const auto blob = serialize_network(purifier.network(c));
    w.u64(blob.size());
    w.bytes(blob);
  }
  if (const auto& perm = purifier.scramble()) {
    w.u32(1);
    w.u32(static_cast<std::uint32_t>(perm->size()));
    for (auto v : perm->forward()) w.u32(v);
  } else {
    w.u32(0);
  }
  return std::move(w.buffer());
}

TrainedPurifier deserialize_purifier(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "purifier container");
  const auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kPurifierMagic.begin())) {
    throw DataError("purifier container: bad magic (expected SFTR)");
  }
  if (const auto version = r.u32(); version != kPurifierFormatVersion) {
    throw DataError("purifier container: unsupported version " + std::to_string(version));
  }
  const auto text_len = r.u32();
  const auto text_bytes = r.take(text_len);
  const std::string text(text_bytes.begin(), text_bytes.end());
  const auto config =
      PurifierConfig::from_config(KeyValueConfig::parse(text, "purifier config"), PurifierConfig{});

  const int width = static_cast<int>(r.u32());
  const int height = static_cast<int>(r.u32());
  const auto channels = r.u32();
  if (channels != 1 && channels != 3) {
    throw DataError("purifier container: channel count " + std::to_string(channels));
  }
  std::vector<HopfieldNetwork> networks;
  for (std::uint32_t c = 0; c < channels; ++c) {
    const auto len = r.u64();
    networks.push_back(deserialize_network(r.take(static_cast<std::size_t>(len))));
  }
  std::optional<Permutation> scramble;
  if (r.u32() != 0) {
    const auto n = r.u32();
    std::vector<std::uint32_t> forward(n);
    for (auto& v : forward) v = r.u32();
    scramble = Permutation(std::move(forward));
  }
  if (!r.at_end()) throw DataError("purifier container: trailing bytes");
  return TrainedPurifier(config, width, height, std::move(networks), std::move(scramble));
}

void save_purifier(const TrainedPurifier& purifier, const std::string& path) {
  const auto bytes = serialize_purifier(purifier);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path, "write failed");
}

TrainedPurifier load_purifier(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open purifier file");
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  try {
    return deserialize_purifier(bytes);
  } catch (const DataError& e) {
    throw IoError(path, e.what());
  }
}

}  // namespace sifter
