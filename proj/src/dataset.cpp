#include "sifter/dataset.hpp"

#include "sifter/error.hpp"

namespace sifter {

void LabeledDataset::validate() const {
  if (class_count < 0) throw DataError("dataset: negative class count");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (item.label < 0 || item.label >= class_count) {
      throw DataError("dataset item " + std::to_string(i) + ": label " +
                      std::to_string(item.label) + " outside [0, " + std::to_string(class_count) +
                      ")");
    }
    if (item.image.empty()) throw DataError("dataset item " + std::to_string(i) + ": no image");
    if (!item.image.same_shape(items.front().image)) {
      throw DimensionError("dataset item " + std::to_string(i) + ": shape " +
                           std::to_string(item.image.width()) + "x" +
                           std::to_string(item.image.height()) + "x" +
                           std::to_string(item.image.channels()) + " differs from item 0");
    }
    if (item.reference && !item.reference->same_shape(item.image)) {
      throw DimensionError("dataset item " + std::to_string(i) + ": reference shape differs");
    }
  }
}

std::vector<std::size_t> LabeledDataset::class_histogram() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
  for (const auto& item : items) {
    if (item.label >= 0 && item.label < class_count) ++counts[static_cast<std::size_t>(item.label)];
  }
  return counts;
}

}  // namespace sifter
