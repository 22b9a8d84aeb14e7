#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sifter/image.hpp"

namespace sifter {

struct LabeledItem {
  Image image;
  int label = 0;
  bool poisoned = false;
  /// Label before poisoning; equals `label` for clean items.
  int original_label = 0;
  /// Clean source the item should be restored to. Empty means the item's
  /// own pre-poisoning image, which poison_dataset fills in.
  std::optional<Image> reference;
  /// Source file name, when the item came from disk.
  std::string name;

  const Image& clean_reference() const noexcept { return reference ? *reference : image; }
};

/// Labelled images sharing one shape. Also used as the seed set for
/// purifier training.
struct LabeledDataset {
  std::vector<LabeledItem> items;
  int class_count = 0;

  std::size_t size() const noexcept { return items.size(); }
  bool empty() const noexcept { return items.empty(); }

  /// Throws unless every label is in range and every image shares one shape.
  void validate() const;

  /// Number of items per class.
  std::vector<std::size_t> class_histogram() const;
};

using SeedDataset = LabeledDataset;

}  // namespace sifter
