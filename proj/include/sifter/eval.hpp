#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sifter/attacks.hpp"
#include "sifter/binarize.hpp"
#include "sifter/dataset.hpp"
#include "sifter/purifier.hpp"

namespace sifter {

/// Flattened spin pattern of every channel, channel-major.
BinaryPattern image_pattern(const Image& img, const Binarization& binarization);

/// Bits that differ between the binarizations of two same-shape images,
/// summed over channels.
std::size_t binarized_hamming(const Image& a, const Image& b, const Binarization& binarization);

/// Injects `spec` into a seeded uniform subset of round(ratio * size) items
/// and relabels them to spec.target_label. Each poisoned item keeps its
/// pre-poison label and, unless it already had one, its clean image as the
/// restoration reference.
LabeledDataset poison_dataset(const LabeledDataset& ds, const TriggerSpec& spec, double ratio,
                              std::uint64_t seed);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int classify(const Image& img) const = 0;
  virtual int class_count() const = 0;
};

/// Nearest-centroid model over spin patterns. Centroids are kept as exact
/// integer spin sums plus counts, so comparisons (and the lowest-index tie
/// rule) are exact.
class CentroidClassifier : public Classifier {
 public:
  CentroidClassifier(Binarization binarization, std::vector<std::vector<std::int64_t>> sums,
                     std::vector<std::int64_t> counts);

  int classify(const Image& img) const override;
  int classify(const BinaryPattern& pattern) const;
  int class_count() const override { return static_cast<int>(sums_.size()); }

  /// Mean spin vector of class c.
  std::vector<double> centroid(int c) const;
  const Binarization& binarization() const noexcept { return binarization_; }

 private:
  Binarization binarization_;
  std::vector<std::vector<std::int64_t>> sums_;
  std::vector<std::int64_t> counts_;
};

/// centroid_c = mean pattern of class c. Every class must be present.
CentroidClassifier fit_centroids(const LabeledDataset& ds, const Binarization& binarization);

inline constexpr double kBackdoorEvidenceRate = 0.5;

/// Stand-in for a backdoored target model. Clean behaviour is a centroid
/// classifier fitted on the unpoisoned items. The backdoor footprint is the
/// set of positions that are +1 in every poisoned item and +1 in at most
/// kBackdoorEvidenceRate of the clean items of some poisoned item's
/// original class. Inputs showing +1 on the whole footprint go to the
/// poisoned items' majority label.
class BackdooredClassifier : public Classifier {
 public:
  BackdooredClassifier(CentroidClassifier clean, std::vector<std::size_t> footprint,
                       int target_label);

  int classify(const Image& img) const override;
  int class_count() const override { return clean_.class_count(); }

  bool triggered(const BinaryPattern& pattern) const;
  const std::vector<std::size_t>& footprint() const noexcept { return footprint_; }
  int target_label() const noexcept { return target_; }
  const CentroidClassifier& clean_model() const noexcept { return clean_; }

 private:
  CentroidClassifier clean_;
  std::vector<std::size_t> footprint_;
  int target_;
};

/// Fits on a training set produced by poison_dataset. With no poisoned
/// items the footprint is empty and the model never fires.
BackdooredClassifier fit_backdoored(const LabeledDataset& poisoned_train,
                                    const Binarization& binarization);

struct ItemRecord {
  std::string set;  // "clean" or "poisoned"
  std::size_t index = 0;
  int label = 0;
  int original_label = 0;
  bool poisoned = false;
  int prediction = 0;
  std::size_t hamming_before = 0;
  std::size_t hamming_after = 0;
};

struct WallTimes {
  double training_s = 0.0;
  double purification_s = 0.0;
  double inference_s = 0.0;
};

struct EvalReport {
  double acc = 0.0;
  double asr = 0.0;
  std::size_t clean_count = 0;
  std::size_t clean_correct = 0;
  /// Poisoned items counted toward ASR (original label != target).
  std::size_t attack_count = 0;
  std::size_t attack_success = 0;
  std::size_t poisoned_count = 0;
  double mean_hamming_before = 0.0;
  double mean_hamming_after = 0.0;
  /// Fraction of poisoned items restored exactly to their clean reference.
  double exact_restoration_rate = 0.0;
  std::vector<std::string> notes;
  std::vector<ItemRecord> items;
  WallTimes wall_times;
};

/// Purifies both sets, classifies the results and scores them. Acc counts
/// clean items predicted as their label; ASR counts poisoned items whose
/// original label differs from their (target) label and that are predicted
/// as the target. Hamming distances are to each item's clean reference.
EvalReport evaluate(const TrainedPurifier& purifier, const Classifier& classifier,
                    const LabeledDataset& clean_test, const LabeledDataset& poisoned_test);

/// Rebuilds the summary counts from the per-item log.
EvalReport summarize(std::vector<ItemRecord> items);

struct SweepRow {
  std::uint64_t remove_time = 0;
  EvalReport report;
};

/// One evaluate() per remove_time, same recall seed throughout.
std::vector<SweepRow> sweep_iterations(const TrainedPurifier& purifier,
                                       std::span<const std::uint64_t> remove_times,
                                       const Classifier& classifier,
                                       const LabeledDataset& clean_test,
                                       const LabeledDataset& poisoned_test);

struct ExportRow {
  std::string filename;
  int label = 0;
  bool poisoned = false;
  int original_label = 0;
};

/// Writes every purified image plus "manifest.csv" with header
/// filename,label,poisoned,original_label. Returns the rows written.
std::vector<ExportRow> export_purified(const LabeledDataset& ds, const TrainedPurifier& purifier,
                                       const std::filesystem::path& out_dir);

/// Reads a directory written by export_purified.
LabeledDataset load_exported(const std::filesystem::path& out_dir);

// --- reports ---------------------------------------------------------------

/// JSON summary; wall times live under "wall_times".
std::string report_json(const EvalReport& report, const std::string& label = "");
/// Per-item CSV (no timing columns).
std::string item_log_csv(const EvalReport& report);
/// remove_time,acc,asr,mean_hamming_before,mean_hamming_after,exact_restoration_rate
std::string sweep_csv(std::span<const SweepRow> rows);

// --- synthetic benchmark ---------------------------------------------------

struct SyntheticOptions {
  int classes = 10;
  int width = 28;
  int height = 28;
  std::size_t train_per_class = 20;
  std::size_t test_per_class = 20;
  /// Fraction of pixels replaced by salt (255) or pepper (0).
  double noise = 0.05;
  /// Prototype pairs must satisfy |overlap| <= max_overlap * N.
  double max_overlap = 0.2;
  /// Prototypes are redrawn until this patch region has a dark pixel, so a
  /// trigger is distinguishable from every clean class.
  std::optional<PatchTrigger> keep_distinct_from;
  std::uint64_t seed = 0;
};

struct SyntheticBenchmark {
  std::vector<BinaryPattern> prototypes;
  /// One noise-free image per class.
  LabeledDataset seeds;
  LabeledDataset train;
  /// Noisy items whose reference is their class prototype image.
  LabeledDataset test;
};

/// Seeded random prototypes rendered as grey images (bright pixels in
/// [160, 255], dark in [0, 95]) with per-item salt-and-pepper noise.
SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options);

}  // namespace sifter
