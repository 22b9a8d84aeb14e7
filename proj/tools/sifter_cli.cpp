// sifter: train Hopfield purifiers, purify images, score attacks, and run
// the capacity and Ising experiments from the command line.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "sifter/capacity.hpp"
#include "sifter/error.hpp"
#include "sifter/eval.hpp"
#include "sifter/imageio.hpp"
#include "sifter/ising.hpp"

namespace fs = std::filesystem;
using namespace sifter;
using namespace sifter::cli;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

int class_floor(const KeyValueConfig& kv) {
  const auto c = kv.get_int("data.classes", 0);
  if (c < 0) throw ConfigError("data.classes must be >= 0");
  return static_cast<int>(c);
}

fs::path purifier_path(const KeyValueConfig& kv) {
  if (auto p = kv.get_string("data.purifier")) return *p;
  return out_dir(kv) / "purifier.sftr";
}

/// Loads the stored purifier and applies recall overrides. Binarization and
/// scrambling are fixed by training, so conflicting settings are rejected.
TrainedPurifier load_for_recall(const KeyValueConfig& kv) {
  auto purifier = load_purifier(purifier_path(kv).string());
  const auto& stored = purifier.config();
  const auto wanted = PurifierConfig::from_config(kv, stored);
  if (!(wanted.binarization == stored.binarization) || wanted.scramble != stored.scramble ||
      wanted.scramble_seed != stored.scramble_seed) {
    throw ConfigError("binarization and scramble settings are fixed when the purifier is trained");
  }
  return purifier.with_recall(wanted.remove_time, wanted.seed);
}

LabeledDataset poisoned_subset(const LabeledDataset& ds) {
  LabeledDataset out;
  out.class_count = ds.class_count;
  for (const auto& item : ds.items) {
    if (item.poisoned) out.items.push_back(item);
  }
  return out;
}

struct EvalInputs {
  TrainedPurifier purifier;
  BackdooredClassifier classifier;
  LabeledDataset clean_test;
  LabeledDataset poisoned_test;
  double training_s;
};

EvalInputs prepare_eval(const KeyValueConfig& kv) {
  auto purifier = load_for_recall(kv);
  const int floor = std::max(class_floor(kv), 0);
  auto train = load_dataset(require_string(kv, "data.train"), floor);
  auto test = load_dataset(require_string(kv, "data.test"), floor);
  const int classes = std::max(train.class_count, test.class_count);
  train.class_count = test.class_count = classes;

  const auto spec = resolve_trigger(kv);
  if (spec.target_label >= classes) {
    throw ConfigError("trigger.target " + std::to_string(spec.target_label) + " is not one of the " +
                      std::to_string(classes) + " classes");
  }
  const double ratio = kv.get_double("eval.ratio", 0.1);
  const auto seed = global_seed(kv);

  const auto start = Clock::now();
  const auto poisoned_train = poison_dataset(train, spec, ratio, derive_seed(seed, 1));
  auto classifier = fit_backdoored(poisoned_train, purifier.config().binarization);
  const double training_s = seconds_since(start);

  auto poisoned_test = poisoned_subset(poison_dataset(test, spec, ratio, derive_seed(seed, 2)));
  return {std::move(purifier), std::move(classifier), std::move(test), std::move(poisoned_test),
          training_s};
}

// --- subcommands -------------------------------------------------------------

int cmd_train(KeyValueConfig kv, bool print_only) {
  const auto seeds_path = require_string(kv, "data.seeds");
  const auto dataset = load_dataset(seeds_path, class_floor(kv));
  if (dataset.empty()) throw DataError(seeds_path + ": seed manifest lists no images");
  const auto& shape = dataset.items.front().image;
  const auto config = resolve_purifier(kv, shape.width(), shape.height(), shape.channels());
  fill_purifier_keys(kv, config);
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }

  const auto start = Clock::now();
  const auto picked = select_seeds(dataset, config.seeds_per_class, config.seed);
  const auto purifier = train_purifier(picked, config);
  const double wall = seconds_since(start);

  const auto out = out_dir(kv);
  const auto path = out / "purifier.sftr";
  fs::create_directories(out);
  save_purifier(purifier, path.string());

  nlohmann::ordered_json log;
  log["purifier"] = path.string();
  log["width"] = purifier.width();
  log["height"] = purifier.height();
  log["channels"] = purifier.channels();
  log["patterns_per_channel"] = picked.size();
  log["seeds_per_class"] = picked.class_histogram();
  log["config"] = kv.to_text();
  log["wall_time_s"] = wall;
  write_text(out / "train_log.json", log.dump(2) + "\n");

  std::cout << "memorized " << picked.size() << " patterns per channel (" << purifier.channels()
            << " channel" << (purifier.channels() == 1 ? "" : "s") << ", " << purifier.width()
            << "x" << purifier.height() << ")\n";
  const auto hist = picked.class_histogram();
  for (std::size_t c = 0; c < hist.size(); ++c) {
    std::cout << "  class " << c << ": " << hist[c] << " seed" << (hist[c] == 1 ? "" : "s") << "\n";
  }
  std::cout << "wrote " << path.string() << "\n";
  return kOk;
}

std::vector<fs::path> list_inputs(const fs::path& input) {
  if (!fs::exists(input)) throw IoError(input.string(), "no such file or directory");
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (!entry.is_regular_file()) continue;
    try {
      format_from_extension(entry.path());
      files.push_back(entry.path());
    } catch (const ConfigError&) {
      // not an image
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_purify(KeyValueConfig kv, bool print_only) {
  const auto purifier = load_for_recall(kv);
  fill_purifier_keys(kv, purifier.config());
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }
  const fs::path input = require_string(kv, "data.input");
  const auto out = out_dir(kv);
  const auto files = list_inputs(input);
  if (fs::is_directory(input) && fs::exists(out) && fs::equivalent(input, out)) {
    throw ConfigError("output directory must differ from the input directory");
  }

  std::vector<Image> images;
  std::vector<std::size_t> ordinals;
  std::vector<fs::path> accepted;
  std::vector<std::pair<fs::path, std::string>> skipped;
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      auto img = read_image(files[i]);
      if (!purifier.accepts(img)) {
        std::ostringstream why;
        why << "shape " << img.width() << "x" << img.height() << "x" << img.channels()
            << " does not match purifier " << purifier.width() << "x" << purifier.height() << "x"
            << purifier.channels();
        skipped.emplace_back(files[i], why.str());
        continue;
      }
      images.push_back(std::move(img));
      ordinals.push_back(i);
      accepted.push_back(files[i]);
    } catch (const DataError& e) {
      skipped.emplace_back(files[i], e.what());
    }
  }

  // Ordinals follow the sorted input listing, so a file's output does not
  // depend on which other files were skipped.
  std::vector<Image> purified(images.size());
  const auto count = static_cast<std::int64_t>(images.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    purified[idx] = purify(purifier, images[idx], ordinals[idx]);
  }

  fs::create_directories(out);
  std::ostringstream manifest;
  manifest << "filename,source\n";
  for (std::size_t k = 0; k < purified.size(); ++k) {
    const auto name = accepted[k].filename();
    write_image(purified[k], out / name);
    manifest << name.string() << ',' << accepted[k].string() << '\n';
  }
  write_text(out / "manifest.csv", manifest.str());

  std::cout << "purified " << purified.size() << " of " << files.size() << " image"
            << (files.size() == 1 ? "" : "s") << " into " << out.string() << "\n";
  if (!skipped.empty()) {
    std::ostringstream list;
    list << "filename,reason\n";
    for (const auto& [path, why] : skipped) {
      std::cerr << "skipped " << path.string() << ": " << why << "\n";
      list << path.filename().string() << ",\"" << why << "\"\n";
    }
    write_text(out / "skipped.csv", list.str());
    throw PartialFailure(std::to_string(skipped.size()) + " input(s) skipped");
  }
  return kOk;
}

int cmd_eval(KeyValueConfig kv, bool print_only) {
  auto in = prepare_eval(kv);
  fill_purifier_keys(kv, in.purifier.config());
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }
  auto report = evaluate(in.purifier, in.classifier, in.clean_test, in.poisoned_test);
  report.wall_times.training_s = in.training_s;

  const auto out = out_dir(kv);
  write_text(out / "report.json", report_json(report, "remove_time=" +
                                                          std::to_string(in.purifier.config().remove_time)));
  write_text(out / "items.csv", item_log_csv(report));
  const SweepRow row{in.purifier.config().remove_time, report};
  write_text(out / "summary.csv", sweep_csv(std::span<const SweepRow>(&row, 1)));

  std::printf("acc %.4f  asr %.4f  hamming %.2f -> %.2f  exact restoration %.4f\n", report.acc,
              report.asr, report.mean_hamming_before, report.mean_hamming_after,
              report.exact_restoration_rate);
  for (const auto& note : report.notes) std::cout << "note: " << note << "\n";
  return kOk;
}

int cmd_sweep(KeyValueConfig kv, bool print_only) {
  auto in = prepare_eval(kv);
  fill_purifier_keys(kv, in.purifier.config());
  const auto times = get_uint_list(kv, "eval.remove_times");
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }
  auto rows = sweep_iterations(in.purifier, times, in.classifier, in.clean_test, in.poisoned_test);
  const auto out = out_dir(kv);
  write_text(out / "sweep.csv", sweep_csv(rows));
  auto all = nlohmann::ordered_json::array();
  for (auto& row : rows) {
    row.report.wall_times.training_s = in.training_s;
    all.push_back(nlohmann::ordered_json::parse(
        report_json(row.report, "remove_time=" + std::to_string(row.remove_time))));
  }
  write_text(out / "sweep.json", all.dump(2) + "\n");
  std::cout << sweep_csv(rows);
  return kOk;
}

int cmd_export(KeyValueConfig kv, bool print_only) {
  const auto purifier = load_for_recall(kv);
  fill_purifier_keys(kv, purifier.config());
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }
  const auto ds = load_dataset(require_string(kv, "data.input"), class_floor(kv));
  const auto rows = export_purified(ds, purifier, out_dir(kv));
  std::cout << "exported " << rows.size() << " purified image" << (rows.size() == 1 ? "" : "s")
            << " to " << out_dir(kv).string() << "\n";
  return kOk;
}

int cmd_capacity(const KeyValueConfig& kv, bool print_only) {
  const auto ns = get_uint_list(kv, "capacity.n");
  const auto trials = kv.get_int("capacity.trials", 10);
  if (trials < 1) throw ConfigError("capacity.trials must be >= 1");
  std::optional<std::vector<double>> alphas;
  if (kv.contains("capacity.alphas")) alphas = get_double_list(kv, "capacity.alphas");
  const auto ps = alphas ? std::vector<std::uint64_t>{} : get_uint_list(kv, "capacity.p");
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }

  std::ostringstream csv;
  csv.precision(10);
  csv << "n,p,alpha,trials,theoretical_capacity,mean_unstable_fraction,"
         "crosstalk_variance_empirical,crosstalk_variance_predicted,union_bound_failure_prob\n";
  for (const auto n : ns) {
    std::vector<std::size_t> grid;
    if (alphas) {
      for (double a : *alphas) {
        grid.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(a * n))));
      }
    } else {
      grid.assign(ps.begin(), ps.end());
    }
    const auto reports =
        analyze_capacity(n, grid, static_cast<std::size_t>(trials), global_seed(kv));
    for (const auto& r : reports) {
      csv << r.n << ',' << r.p << ',' << r.alpha << ',' << r.trials << ','
          << theoretical_capacity(r.n) << ',' << r.mean_unstable_fraction << ','
          << r.crosstalk_variance_empirical << ',' << r.crosstalk_variance_predicted << ','
          << r.union_bound_failure_prob << '\n';
    }
  }
  write_text(out_dir(kv) / "capacity.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

int cmd_ising(const KeyValueConfig& kv, bool print_only) {
  const auto w = kv.get_int("ising.width", 32);
  const auto h = kv.get_int("ising.height", 32);
  const auto steps = kv.get_int("ising.steps", 1000000);
  const auto every = kv.get_int("ising.every", 10000);
  const double temperature = kv.get_double("ising.temperature", 0.0);
  if (w < 1 || h < 1) throw ConfigError("ising lattice dimensions must be >= 1");
  if (steps < 0) throw ConfigError("ising.steps must be >= 0");
  if (every < 1) throw ConfigError("ising.every must be >= 1");
  if (!(temperature >= 0.0)) throw ConfigError("ising.temperature must be >= 0");
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }

  const auto seed = global_seed(kv);
  auto lattice = IsingLattice::random(static_cast<int>(w), static_cast<int>(h),
                                      kv.get_double("ising.coupling", 1.0),
                                      kv.get_double("ising.field", 1.0), derive_seed(seed, 1));
  if (kv.get_bool("ising.periodic", false)) {
    IsingLattice wrapped(lattice.width(), lattice.height(), lattice.coupling(), lattice.field(), true);
    for (int y = 0; y < lattice.height(); ++y)
      for (int x = 0; x < lattice.width(); ++x) wrapped.set(x, y, lattice.at(x, y));
    lattice = wrapped;
  }
  const auto samples = run_glauber(lattice, temperature, static_cast<std::uint64_t>(steps),
                                   static_cast<std::uint64_t>(every), derive_seed(seed, 2));
  std::ostringstream csv;
  csv.precision(10);
  csv << "step,energy,magnetization\n";
  for (const auto& s : samples) csv << s.step << ',' << s.energy << ',' << s.magnetization << '\n';
  write_text(out_dir(kv) / "ising.csv", csv.str());
  const auto& last = samples.back();
  std::cout << "step " << last.step << ": energy " << last.energy << ", magnetization "
            << last.magnetization << "\n";
  return kOk;
}

int cmd_synth(const KeyValueConfig& kv, bool print_only) {
  SyntheticOptions opt;
  opt.classes = static_cast<int>(kv.get_int("synth.classes", 10));
  opt.width = static_cast<int>(kv.get_int("synth.width", 28));
  opt.height = static_cast<int>(kv.get_int("synth.height", 28));
  const auto train = kv.get_int("synth.train_per_class", 20);
  const auto test = kv.get_int("synth.test_per_class", 20);
  if (train < 0 || test < 0) throw ConfigError("synth item counts must be >= 0");
  opt.train_per_class = static_cast<std::size_t>(train);
  opt.test_per_class = static_cast<std::size_t>(test);
  opt.noise = kv.get_double("synth.noise", 0.05);
  opt.seed = global_seed(kv);
  const auto spec = resolve_trigger(kv);
  if (const auto* patch = std::get_if<PatchTrigger>(&spec.kind)) opt.keep_distinct_from = *patch;
  if (print_only) {
    std::cout << kv.to_text();
    return kOk;
  }
  const auto bench = make_synthetic_benchmark(opt);
  const auto out = out_dir(kv);
  save_dataset(bench.seeds, out / "seeds");
  save_dataset(bench.train, out / "train");
  save_dataset(bench.test, out / "test");
  std::cout << "wrote " << bench.seeds.size() << " seeds, " << bench.train.size() << " train and "
            << bench.test.size() << " test images under " << out.string() << "\n";
  return kOk;
}

// --- flag plumbing -------------------------------------------------------------

enum class Kind { kInt, kDouble, kString };

struct Binding {
  std::string key;
  Kind kind;
  std::string raw;
  CLI::Option* option = nullptr;
};

class Flags {
 public:
  void add(CLI::App& app, const std::string& name, const std::string& key, Kind kind,
           const std::string& help) {
    bindings_.push_back(std::make_unique<Binding>(Binding{key, kind, {}, nullptr}));
    auto& b = *bindings_.back();
    b.option = app.add_option(name, b.raw, help);
  }
  CLI::Option* last() { return bindings_.back()->option; }

  KeyValueConfig collect() const {
    KeyValueConfig kv;
    for (const auto& b : bindings_) {
      if (b->option->count() == 0) continue;
      try {
        std::size_t used = 0;
        switch (b->kind) {
          case Kind::kInt: {
            const auto v = std::stoll(b->raw, &used);
            if (used != b->raw.size()) throw std::invalid_argument(b->raw);
            kv.set(b->key, static_cast<std::int64_t>(v));
            break;
          }
          case Kind::kDouble: {
            const auto v = std::stod(b->raw, &used);
            if (used != b->raw.size()) throw std::invalid_argument(b->raw);
            kv.set(b->key, v);
            break;
          }
          case Kind::kString:
            kv.set(b->key, b->raw);
            break;
        }
      } catch (const std::logic_error&) {
        throw ConfigError(b->option->get_name() + ": '" + b->raw + "' is not a valid value");
      }
    }
    return kv;
  }

 private:
  std::vector<std::unique_ptr<Binding>> bindings_;
};

int run(int argc, char** argv) {
  CLI::App app{"Hopfield-network trigger purification and analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  std::optional<std::string> config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "Settings file (flags override it)");
  flags.add(app, "--seed", "seed", Kind::kInt, "Global seed");
  flags.add(app, "--remove-time", "purifier.remove_time", Kind::kInt, "Recall updates per channel");
  flags.add(app, "--k-size", "purifier.k_size", Kind::kInt, "Local-mean kernel size (odd)");
  flags.add(app, "--binarize", "purifier.binarize", Kind::kString, "global or localdiff");
  flags.last()->check(CLI::IsMember({"global", "localdiff"}));
  flags.add(app, "--threshold", "purifier.threshold", Kind::kInt, "Global binarization threshold");
  flags.add(app, "--seeds-per-class", "purifier.seeds_per_class", Kind::kInt,
            "Clean seed images memorized per class");
  flags.add(app, "--trigger", "trigger.kind", Kind::kString, "patch or blend");
  flags.last()->check(CLI::IsMember({"patch", "blend"}));
  flags.add(app, "--alpha", "trigger.alpha", Kind::kDouble, "Blend trigger opacity");
  flags.add(app, "--ratio", "eval.ratio", Kind::kDouble, "Fraction of items poisoned");
  flags.add(app, "--out", "out", Kind::kString, "Output directory");
  flags.add(app, "--jobs", "jobs", Kind::kInt, "Worker threads (0 = all cores)");
  app.add_flag("--print-config", print_config, "Print the resolved settings and exit");

  auto* train = app.add_subcommand("train", "Memorize clean seed images");
  flags.add(*train, "--seeds", "data.seeds", Kind::kString, "Seed manifest (path,label CSV)");
  flags.add(*train, "--classes", "data.classes", Kind::kInt, "Number of classes that must be covered");

  auto* purify_cmd = app.add_subcommand("purify", "Purify an image or a directory of images");
  flags.add(*purify_cmd, "--purifier", "data.purifier", Kind::kString, "Purifier file");
  flags.add(*purify_cmd, "--input", "data.input", Kind::kString, "Image file or directory");

  auto* eval_cmd = app.add_subcommand("eval", "Score accuracy and attack success after purification");
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate over several remove_time values");
  for (auto* sub : {eval_cmd, sweep_cmd}) {
    flags.add(*sub, "--purifier", "data.purifier", Kind::kString, "Purifier file");
    flags.add(*sub, "--train-set", "data.train", Kind::kString, "Training manifest for the target model");
    flags.add(*sub, "--test-set", "data.test", Kind::kString, "Test manifest");
    flags.add(*sub, "--target", "trigger.target", Kind::kInt, "Attack target label");
    flags.add(*sub, "--overlay", "trigger.overlay", Kind::kString, "Blend overlay image");
    flags.add(*sub, "--classes", "data.classes", Kind::kInt, "Minimum class count");
  }
  flags.add(*sweep_cmd, "--remove-times", "eval.remove_times", Kind::kString,
            "Comma-separated remove_time values");

  auto* export_cmd = app.add_subcommand("export", "Write purified copies of a dataset with a manifest");
  flags.add(*export_cmd, "--purifier", "data.purifier", Kind::kString, "Purifier file");
  flags.add(*export_cmd, "--input", "data.input", Kind::kString, "Dataset manifest");

  auto* capacity_cmd = app.add_subcommand("capacity", "Monte Carlo stability and crosstalk table");
  flags.add(*capacity_cmd, "--n", "capacity.n", Kind::kString, "Neuron counts (comma-separated)");
  flags.add(*capacity_cmd, "--p", "capacity.p", Kind::kString, "Stored pattern counts");
  flags.add(*capacity_cmd, "--alphas", "capacity.alphas", Kind::kString, "Load factors (instead of --p)");
  flags.add(*capacity_cmd, "--trials", "capacity.trials", Kind::kInt, "Trials per point");

  auto* ising_cmd = app.add_subcommand("ising", "Glauber dynamics on a 2-D Ising lattice");
  flags.add(*ising_cmd, "--width", "ising.width", Kind::kInt, "Lattice width");
  flags.add(*ising_cmd, "--height", "ising.height", Kind::kInt, "Lattice height");
  flags.add(*ising_cmd, "--coupling", "ising.coupling", Kind::kDouble, "Coupling J");
  flags.add(*ising_cmd, "--field", "ising.field", Kind::kDouble, "External field H");
  flags.add(*ising_cmd, "--temperature", "ising.temperature", Kind::kDouble, "Temperature T");
  flags.add(*ising_cmd, "--steps", "ising.steps", Kind::kInt, "Single-site moves");
  flags.add(*ising_cmd, "--every", "ising.every", Kind::kInt, "Sampling interval");

  auto* synth_cmd = app.add_subcommand("synth", "Write the synthetic prototype benchmark to disk");
  flags.add(*synth_cmd, "--classes", "synth.classes", Kind::kInt, "Number of prototypes");
  flags.add(*synth_cmd, "--train-per-class", "synth.train_per_class", Kind::kInt, "Training items per class");
  flags.add(*synth_cmd, "--test-per-class", "synth.test_per_class", Kind::kInt, "Test items per class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  auto flag_layer = flags.collect();
  if (flag_layer.contains("seed")) {
    // An explicit --seed outranks a purifier.seed from the config file.
    flag_layer.set("purifier.seed", *flag_layer.get_int("seed"));
  }
  auto kv = merge_layers(config_path, flag_layer);

  const auto jobs = kv.get_int("jobs", 0);
  if (jobs < 0) throw ConfigError("jobs must be >= 0");
  if (jobs > 0) omp_set_num_threads(static_cast<int>(jobs));

  if (*train) return cmd_train(kv, print_config);
  if (*purify_cmd) return cmd_purify(kv, print_config);
  if (*eval_cmd) return cmd_eval(kv, print_config);
  if (*sweep_cmd) return cmd_sweep(kv, print_config);
  if (*export_cmd) return cmd_export(kv, print_config);
  if (*capacity_cmd) return cmd_capacity(kv, print_config);
  if (*ising_cmd) return cmd_ising(kv, print_config);
  return cmd_synth(kv, print_config);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const PartialFailure& e) {
    std::cerr << "error[partial]: " << e.what() << "\n";
    return kPartialFailure;
  } catch (const ConfigError& e) {
    std::cerr << "error[config]: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "error[data]: " << e.what() << "\n";
    return kDataError;
  } catch (const DimensionError& e) {
    std::cerr << "error[data]: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
