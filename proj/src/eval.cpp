#include "sifter/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "sifter/capacity.hpp"
#include "sifter/error.hpp"
#include "sifter/imageio.hpp"
#include "sifter/rng.hpp"

namespace fs = std::filesystem;

namespace sifter {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BinaryPattern image_pattern(const Image& img, const Binarization& binarization) {
  std::vector<Spin> spins;
  spins.reserve(static_cast<std::size_t>(img.width()) * img.height() * img.channels());
  for (const auto& plane : img.planes()) {
    const auto bin = binarization.apply(plane);
    for (auto px : bin.pixels()) spins.push_back(px == 255 ? 1 : -1);
  }
  return BinaryPattern(std::move(spins));
}

std::size_t binarized_hamming(const Image& a, const Image& b, const Binarization& binarization) {
  if (!a.same_shape(b)) throw DimensionError("binarized_hamming: image shapes differ");
  return hamming_distance(image_pattern(a, binarization), image_pattern(b, binarization));
}

LabeledDataset poison_dataset(const LabeledDataset& ds, const TriggerSpec& spec, double ratio,
                              std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw ConfigError("poison ratio must be in [0, 1], got " + std::to_string(ratio));
  }
  LabeledDataset out = ds;
  const auto count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(ds.size())));
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  order.resize(count);
  std::sort(order.begin(), order.end());
  for (auto i : order) {
    auto& item = out.items[i];
    if (!item.reference) item.reference = item.image;
    item.image = inject(item.image, spec);
    item.original_label = item.label;
    item.label = spec.target_label;
    item.poisoned = true;
  }
  out.class_count = std::max(out.class_count, spec.target_label + 1);
  return out;
}

// --- classifiers -------------------------------------------------------------

CentroidClassifier::CentroidClassifier(Binarization binarization,
                                       std::vector<std::vector<std::int64_t>> sums,
                                       std::vector<std::int64_t> counts)
    : binarization_(binarization), sums_(std::move(sums)), counts_(std::move(counts)) {
  if (sums_.size() < 2) throw DataError("centroid classifier needs at least 2 classes");
  if (counts_.size() != sums_.size()) throw DimensionError("centroid classifier: count mismatch");
  for (std::size_t c = 0; c < sums_.size(); ++c) {
    if (counts_[c] < 1) throw DataError("centroid classifier: class " + std::to_string(c) + " is empty");
    if (sums_[c].size() != sums_.front().size()) {
      throw DimensionError("centroid classifier: centroid lengths differ");
    }
  }
}

int CentroidClassifier::classify(const BinaryPattern& pattern) const {
  if (pattern.size() != sums_.front().size()) {
    throw DimensionError("classify: pattern length " + std::to_string(pattern.size()) +
                         ", centroids have " + std::to_string(sums_.front().size()));
  }
  // Compare dot_c / count_c exactly via cross-multiplication.
  int best = 0;
  std::int64_t best_dot = 0;
  for (std::size_t c = 0; c < sums_.size(); ++c) {
    std::int64_t dot = 0;
    const auto& s = sums_[c];
    for (std::size_t i = 0; i < s.size(); ++i) dot += s[i] * pattern[i];
    if (c == 0 || static_cast<__int128>(dot) * counts_[static_cast<std::size_t>(best)] >
                      static_cast<__int128>(best_dot) * counts_[c]) {
      best = static_cast<int>(c);
      best_dot = dot;
    }
  }
  return best;
}

int CentroidClassifier::classify(const Image& img) const {
  return classify(image_pattern(img, binarization_));
}

std::vector<double> CentroidClassifier::centroid(int c) const {
  const auto& s = sums_.at(static_cast<std::size_t>(c));
  std::vector<double> out(s.size());
  const double count = static_cast<double>(counts_[static_cast<std::size_t>(c)]);
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<double>(s[i]) / count;
  return out;
}

CentroidClassifier fit_centroids(const LabeledDataset& ds, const Binarization& binarization) {
  ds.validate();
  if (ds.empty()) throw DataError("fit_centroids: empty dataset");
  const auto& first = ds.items.front().image;
  const std::size_t n = static_cast<std::size_t>(first.width()) * first.height() * first.channels();
  std::vector<std::vector<std::int64_t>> sums(static_cast<std::size_t>(ds.class_count),
                                              std::vector<std::int64_t>(n, 0));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(ds.class_count), 0);
  for (const auto& item : ds.items) {
    const auto p = image_pattern(item.image, binarization);
    auto& s = sums[static_cast<std::size_t>(item.label)];
    for (std::size_t i = 0; i < n; ++i) s[i] += p[i];
    ++counts[static_cast<std::size_t>(item.label)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("fit_centroids: class " + std::to_string(c) + " has no training items");
    }
  }
  return CentroidClassifier(binarization, std::move(sums), std::move(counts));
}

BackdooredClassifier::BackdooredClassifier(CentroidClassifier clean,
                                           std::vector<std::size_t> footprint, int target_label)
    : clean_(std::move(clean)), footprint_(std::move(footprint)), target_(target_label) {}

bool BackdooredClassifier::triggered(const BinaryPattern& pattern) const {
  if (footprint_.empty()) return false;
  return std::all_of(footprint_.begin(), footprint_.end(),
                     [&](std::size_t i) { return pattern[i] > 0; });
}

int BackdooredClassifier::classify(const Image& img) const {
  const auto p = image_pattern(img, clean_.binarization());
  return triggered(p) ? target_ : clean_.classify(p);
}

BackdooredClassifier fit_backdoored(const LabeledDataset& poisoned_train,
                                    const Binarization& binarization) {
  LabeledDataset clean;
  clean.class_count = poisoned_train.class_count;
  std::vector<BinaryPattern> poisoned;
  std::map<int, std::size_t> target_votes;
  for (const auto& item : poisoned_train.items) {
    if (item.poisoned) {
      poisoned.push_back(image_pattern(item.image, binarization));
      ++target_votes[item.label];
    } else {
      clean.items.push_back(item);
    }
  }
  auto model = fit_centroids(clean, binarization);
  if (poisoned.empty()) return BackdooredClassifier(std::move(model), {}, 0);

  // A position belongs to the trigger when it is bright in every poisoned
  // item and at least one of those items comes from a class that is mostly
  // dark there, so only the trigger explains it. Pixels the source classes
  // share anyway carry no evidence and stay out.
  const auto n = poisoned.front().size();
  const auto classes = static_cast<std::size_t>(clean.class_count);
  std::vector<std::int64_t> bright(classes * n, 0);
  std::vector<std::int64_t> per_class(classes, 0);
  for (const auto& item : clean.items) {
    const auto c = static_cast<std::size_t>(item.label);
    const auto p = image_pattern(item.image, binarization);
    ++per_class[c];
    for (std::size_t i = 0; i < n; ++i) bright[c * n + i] += p[i] > 0;
  }
  std::vector<bool> evidence(n, false);
  for (const auto& item : poisoned_train.items) {
    if (!item.poisoned) continue;
    const auto c = static_cast<std::size_t>(item.original_label);
    if (c >= classes || per_class[c] == 0) continue;
    const double limit = kBackdoorEvidenceRate * static_cast<double>(per_class[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<double>(bright[c * n + i]) <= limit) evidence[i] = true;
    }
  }
  std::vector<std::size_t> footprint;
  for (std::size_t i = 0; i < n; ++i) {
    if (evidence[i] &&
        std::all_of(poisoned.begin(), poisoned.end(), [&](const auto& p) { return p[i] > 0; })) {
      footprint.push_back(i);
    }
  }
  const auto target =
      std::max_element(target_votes.begin(), target_votes.end(),
                       [](const auto& a, const auto& b) { return a.second < b.second; })
          ->first;
  return BackdooredClassifier(std::move(model), std::move(footprint), target);
}

// --- evaluation --------------------------------------------------------------

EvalReport summarize(std::vector<ItemRecord> items) {
  EvalReport r;
  std::size_t hamming_items = 0;
  std::size_t before_total = 0;
  std::size_t after_total = 0;
  std::size_t exact = 0;
  for (const auto& it : items) {
    if (it.set == "clean") {
      ++r.clean_count;
      r.clean_correct += it.prediction == it.label;
    } else if (it.poisoned) {
      ++r.poisoned_count;
      ++hamming_items;
      before_total += it.hamming_before;
      after_total += it.hamming_after;
      exact += it.hamming_after == 0;
      if (it.original_label != it.label) {
        ++r.attack_count;
        r.attack_success += it.prediction == it.label;
      }
    }
  }
  r.acc = r.clean_count ? static_cast<double>(r.clean_correct) / r.clean_count : 0.0;
  r.asr = r.attack_count ? static_cast<double>(r.attack_success) / r.attack_count : 0.0;
  if (r.clean_count == 0) r.notes.push_back("no clean items: acc reported as 0");
  if (r.attack_count == 0) r.notes.push_back("no poisoned items: asr reported as 0");
  if (hamming_items) {
    r.mean_hamming_before = static_cast<double>(before_total) / hamming_items;
    r.mean_hamming_after = static_cast<double>(after_total) / hamming_items;
    r.exact_restoration_rate = static_cast<double>(exact) / hamming_items;
  }
  r.items = std::move(items);
  return r;
}

EvalReport evaluate(const TrainedPurifier& purifier, const Classifier& classifier,
                    const LabeledDataset& clean_test, const LabeledDataset& poisoned_test) {
  std::vector<Image> inputs;
  inputs.reserve(clean_test.size() + poisoned_test.size());
  for (const auto& it : clean_test.items) inputs.push_back(it.image);
  for (const auto& it : poisoned_test.items) inputs.push_back(it.image);

  auto start = Clock::now();
  const auto purified = purify_batch(purifier, inputs);
  WallTimes times;
  times.purification_s = seconds_since(start);

  const auto& binarization = purifier.config().binarization;
  std::vector<ItemRecord> records(inputs.size());
  start = Clock::now();
  const auto count = static_cast<std::int64_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const bool is_clean = idx < clean_test.size();
    const auto& item = is_clean ? clean_test.items[idx] : poisoned_test.items[idx - clean_test.size()];
    ItemRecord rec;
    rec.set = is_clean ? "clean" : "poisoned";
    rec.index = is_clean ? idx : idx - clean_test.size();
    rec.label = item.label;
    rec.original_label = item.original_label;
    rec.poisoned = item.poisoned;
    rec.prediction = classifier.classify(purified[idx]);
    const auto& ref = item.clean_reference();
    rec.hamming_before = binarized_hamming(item.image, ref, binarization);
    rec.hamming_after = binarized_hamming(purified[idx], ref, binarization);
    records[idx] = std::move(rec);
  }
  times.inference_s = seconds_since(start);

  auto report = summarize(std::move(records));
  report.wall_times = times;
  return report;
}

std::vector<SweepRow> sweep_iterations(const TrainedPurifier& purifier,
                                       std::span<const std::uint64_t> remove_times,
                                       const Classifier& classifier,
                                       const LabeledDataset& clean_test,
                                       const LabeledDataset& poisoned_test) {
  if (remove_times.empty()) throw ConfigError("sweep_iterations: no remove_time values");
  std::vector<SweepRow> rows;
  for (const auto t : remove_times) {
    const auto variant = purifier.with_recall(t, purifier.config().seed);
    rows.push_back({t, evaluate(variant, classifier, clean_test, poisoned_test)});
  }
  return rows;
}

// --- export --------------------------------------------------------------------

std::vector<ExportRow> export_purified(const LabeledDataset& ds, const TrainedPurifier& purifier,
                                       const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create directory: " + ec.message());

  std::vector<Image> inputs;
  inputs.reserve(ds.size());
  for (const auto& it : ds.items) inputs.push_back(it.image);
  const auto purified = purify_batch(purifier, inputs);

  std::vector<ExportRow> rows;
  for (std::size_t i = 0; i < purified.size(); ++i) {
    const auto format = default_format(purified[i]);
    char name[32];
    std::snprintf(name, sizeof name, "purified_%06zu", i);
    ExportRow row{std::string(name) + extension_for(format), ds.items[i].label,
                  ds.items[i].poisoned, ds.items[i].original_label};
    write_image(purified[i], out_dir / row.filename, format);
    rows.push_back(std::move(row));
  }

  const auto manifest_path = out_dir / "manifest.csv";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw IoError(manifest_path.string(), "cannot open for writing");
  manifest << "filename,label,poisoned,original_label\n";
  for (const auto& r : rows) {
    manifest << r.filename << ',' << r.label << ',' << (r.poisoned ? 1 : 0) << ','
             << r.original_label << '\n';
  }
  if (!manifest) throw IoError(manifest_path.string(), "write failed");
  return rows;
}

LabeledDataset load_exported(const fs::path& out_dir) {
  const auto manifest_path = out_dir / "manifest.csv";
  std::ifstream in(manifest_path);
  if (!in) throw IoError(manifest_path.string(), "cannot open manifest");
  LabeledDataset ds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "filename,label,poisoned,original_label") {
        throw DataError(manifest_path.string() + ":1: unexpected header");
      }
      continue;
    }
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string name, label, poisoned, original;
    if (!std::getline(ss, name, ',') || !std::getline(ss, label, ',') ||
        !std::getline(ss, poisoned, ',') || !std::getline(ss, original)) {
      throw DataError(manifest_path.string() + ":" + std::to_string(line_no) +
                      ": expected 4 columns");
    }
    LabeledItem item;
    try {
      item.label = std::stoi(label);
      item.original_label = std::stoi(original);
    } catch (const std::exception&) {
      throw DataError(manifest_path.string() + ":" + std::to_string(line_no) + ": bad label");
    }
    item.poisoned = poisoned == "1";
    item.name = name;
    item.image = read_image(out_dir / name);
    ds.class_count = std::max({ds.class_count, item.label + 1, item.original_label + 1});
    ds.items.push_back(std::move(item));
  }
  return ds;
}

// --- reports -------------------------------------------------------------------

std::string report_json(const EvalReport& report, const std::string& label) {
  nlohmann::ordered_json j;
  if (!label.empty()) j["label"] = label;
  j["acc"] = report.acc;
  j["asr"] = report.asr;
  j["clean_count"] = report.clean_count;
  j["clean_correct"] = report.clean_correct;
  j["poisoned_count"] = report.poisoned_count;
  j["attack_count"] = report.attack_count;
  j["attack_success"] = report.attack_success;
  j["mean_hamming_before"] = report.mean_hamming_before;
  j["mean_hamming_after"] = report.mean_hamming_after;
  j["exact_restoration_rate"] = report.exact_restoration_rate;
  j["notes"] = report.notes;
  j["wall_times"] = {{"training_s", report.wall_times.training_s},
                     {"purification_s", report.wall_times.purification_s},
                     {"inference_s", report.wall_times.inference_s}};
  return j.dump(2) + "\n";
}

std::string item_log_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "set,index,label,original_label,poisoned,prediction,hamming_before,hamming_after\n";
  for (const auto& r : report.items) {
    out << r.set << ',' << r.index << ',' << r.label << ',' << r.original_label << ','
        << (r.poisoned ? 1 : 0) << ',' << r.prediction << ',' << r.hamming_before << ','
        << r.hamming_after << '\n';
  }
  return out.str();
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out.precision(10);
  out << "remove_time,acc,asr,mean_hamming_before,mean_hamming_after,exact_restoration_rate\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << row.remove_time << ',' << r.acc << ',' << r.asr << ',' << r.mean_hamming_before << ','
        << r.mean_hamming_after << ',' << r.exact_restoration_rate << '\n';
  }
  return out.str();
}

// --- synthetic benchmark -----------------------------------------------------------

namespace {

Image render(const BinaryPattern& proto, int width, int height, double noise, Rng& rng) {
  GrayImage plane(width, height);
  auto px = plane.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = proto[i] > 0 ? static_cast<std::uint8_t>(160 + rng.uniform_index(96))
                         : static_cast<std::uint8_t>(rng.uniform_index(96));
    if (noise > 0.0 && rng.uniform01() < noise) px[i] = rng.coin() ? 255 : 0;
  }
  return Image(std::move(plane));
}

}  // namespace

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options) {
  if (options.classes < 2) throw ConfigError("synthetic benchmark needs >= 2 classes");
  if (!(options.noise >= 0.0 && options.noise <= 1.0)) {
    throw ConfigError("synthetic noise must be in [0, 1]");
  }
  const std::size_t n = static_cast<std::size_t>(options.width) * options.height;
  std::vector<std::size_t> footprint;
  if (options.keep_distinct_from) {
    footprint = patch_footprint(*options.keep_distinct_from, options.width, options.height);
  }

  Rng rng(derive_seed(options.seed, 0x70726f746fULL));
  SyntheticBenchmark bench;
  const auto limit = static_cast<std::int64_t>(options.max_overlap * static_cast<double>(n));
  constexpr int kMaxDraws = 10000;
  for (int c = 0; c < options.classes; ++c) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxDraws) {
        throw ConfigError("synthetic benchmark: cannot satisfy overlap bound " +
                          std::to_string(options.max_overlap));
      }
      auto candidate = random_pattern(n, rng);
      const bool distinct =
          footprint.empty() ||
          std::any_of(footprint.begin(), footprint.end(), [&](auto i) { return candidate[i] < 0; });
      const bool separated =
          std::all_of(bench.prototypes.begin(), bench.prototypes.end(), [&](const auto& p) {
            return std::llabs(overlap(p, candidate)) <= limit;
          });
      if (distinct && separated) {
        bench.prototypes.push_back(std::move(candidate));
        break;
      }
    }
  }

  bench.seeds.class_count = bench.train.class_count = bench.test.class_count = options.classes;
  Rng render_rng(derive_seed(options.seed, 0x72656e646572ULL));
  for (int c = 0; c < options.classes; ++c) {
    LabeledItem item;
    item.image = render(bench.prototypes[static_cast<std::size_t>(c)], options.width,
                        options.height, 0.0, render_rng);
    item.label = item.original_label = c;
    bench.seeds.items.push_back(std::move(item));
  }
  for (auto [split, per_class] :
       {std::pair{&bench.train, options.train_per_class}, std::pair{&bench.test, options.test_per_class}}) {
    for (int c = 0; c < options.classes; ++c) {
      for (std::size_t k = 0; k < per_class; ++k) {
        LabeledItem item;
        item.image = render(bench.prototypes[static_cast<std::size_t>(c)], options.width,
                            options.height, options.noise, render_rng);
        item.label = item.original_label = c;
        if (split == &bench.test) item.reference = bench.seeds.items[static_cast<std::size_t>(c)].image;
        split->items.push_back(std::move(item));
      }
    }
  }
  return bench;
}

}  // namespace sifter
