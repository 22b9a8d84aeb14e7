#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sifter/binarize.hpp"
#include "sifter/config.hpp"
#include "sifter/dataset.hpp"
#include "sifter/hopfield.hpp"
#include "sifter/image.hpp"

namespace sifter {

/// Seeded permutation of pattern positions: position i moves to forward[i].
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> forward);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return forward_.size(); }
  std::span<const std::uint32_t> forward() const noexcept { return forward_; }
  std::span<const std::uint32_t> inverse() const noexcept { return inverse_; }

  BinaryPattern apply(const BinaryPattern& p) const;
  BinaryPattern undo(const BinaryPattern& p) const;
  /// Permutes pixel positions of a plane (row-major), keeping its dimensions.
  GrayImage apply(const GrayImage& img) const;
  GrayImage undo(const GrayImage& img) const;
  Image apply(const Image& img) const;
  Image undo(const Image& img) const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.forward_ == b.forward_;
  }

 private:
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> inverse_;
};

/// Uniform random permutation of 0..n-1 from `seed`.
Permutation make_scramble(std::size_t n, std::uint64_t seed);

struct PurifierConfig {
  Binarization binarization = Binarization::global();
  /// Number of asynchronous recall updates per channel.
  std::uint64_t remove_time = 200;
  std::uint64_t seed = 0;
  std::size_t seeds_per_class = 3;
  bool scramble = false;
  std::uint64_t scramble_seed = 0;
  UpdateOrder update_order = UpdateOrder::kShuffledSweeps;

  /// Defaults tuned to the common input sizes: 28x28 single-channel digits
  /// get global thresholding and 1000 updates, 32x32 colour images get
  /// local differencing with k = 21 and 200 updates.
  static PurifierConfig defaults_for(int width, int height, int channels);

  void validate() const;

  /// Keys under `prefix` ("purifier." by default).
  KeyValueConfig to_config(const std::string& prefix = "purifier.") const;
  /// Reads keys under `prefix`, starting from `base` for anything absent.
  static PurifierConfig from_config(const KeyValueConfig& kv, const PurifierConfig& base,
                                    const std::string& prefix = "purifier.");

  friend bool operator==(const PurifierConfig&, const PurifierConfig&) = default;
};

std::string to_string(UpdateOrder order);
UpdateOrder parse_update_order(const std::string& text);

class TrainedPurifier {
 public:
  TrainedPurifier(PurifierConfig config, int width, int height,
                  std::vector<HopfieldNetwork> channels, std::optional<Permutation> scramble);

  const PurifierConfig& config() const noexcept { return config_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return static_cast<int>(networks_.size()); }
  const HopfieldNetwork& network(int c) const { return networks_.at(static_cast<std::size_t>(c)); }
  const std::optional<Permutation>& scramble() const noexcept { return scramble_; }

  /// Same trained state, different recall settings (remove_time, seed,
  /// update order). Binarization and scramble fields must not change.
  TrainedPurifier with_recall(std::uint64_t remove_time, std::uint64_t seed) const;

  bool accepts(const Image& img) const noexcept {
    return img.width() == width_ && img.height() == height_ && img.channels() == channels();
  }

  friend bool operator==(const TrainedPurifier&, const TrainedPurifier&) = default;

 private:
  PurifierConfig config_;
  int width_;
  int height_;
  std::vector<HopfieldNetwork> networks_;
  std::optional<Permutation> scramble_;
};

/// Stratified sample of min(per_class, available) items per class, ordered by
/// class then by original position.
SeedDataset select_seeds(const SeedDataset& dataset, std::size_t per_class, std::uint64_t seed);

/// One Hebbian network per channel over the binarized seeds.
TrainedPurifier train_purifier(const SeedDataset& seeds, const PurifierConfig& config);

/// Recall seed for the given channel of the image at `ordinal`.
std::uint64_t recall_seed(std::uint64_t base_seed, std::uint64_t ordinal, int channel);

/// Binarize, recall, restack. Output pixels are 0 or 255 on every channel.
Image purify(const TrainedPurifier& purifier, const Image& img, std::uint64_t ordinal = 0);

/// purify over a batch; image k gets ordinal first_ordinal + k. Shapes are
/// checked before any work starts. The parallel version fans out over
/// images and matches the serial one exactly.
std::vector<Image> purify_batch(const TrainedPurifier& purifier, std::span<const Image> images,
                                std::uint64_t first_ordinal = 0);
std::vector<Image> purify_batch_serial(const TrainedPurifier& purifier,
                                       std::span<const Image> images,
                                       std::uint64_t first_ordinal = 0);

// Container: "SFTR", u32 version, u32 config length + canonical config
// text, u32 width, u32 height, u32 channels, per channel u64 length + HOPW
// bytes, u32 scramble flag, and when set u32 n + n u32 forward indices.
inline constexpr std::uint32_t kPurifierFormatVersion = 1;

std::vector<std::uint8_t> serialize_purifier(const TrainedPurifier& purifier);
TrainedPurifier deserialize_purifier(std::span<const std::uint8_t> bytes);
void save_purifier(const TrainedPurifier& purifier, const std::string& path);
TrainedPurifier load_purifier(const std::string& path);

}  // namespace sifter
