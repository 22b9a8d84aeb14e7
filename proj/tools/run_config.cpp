#include "run_config.hpp"

#include <charconv>
#include <sstream>

#include "sifter/error.hpp"
#include "sifter/imageio.hpp"

namespace sifter::cli {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

KeyValueConfig builtin_defaults() {
  KeyValueConfig c;
  c.set("seed", std::int64_t{0});
  c.set("out", std::string("out"));
  c.set("jobs", std::int64_t{0});

  c.set("trigger.kind", std::string("patch"));
  c.set("trigger.width", std::int64_t{3});
  c.set("trigger.height", std::int64_t{3});
  c.set("trigger.value", std::int64_t{255});
  c.set("trigger.anchor", std::string("bottom-right"));
  c.set("trigger.alpha", 0.065);
  c.set("trigger.target", std::int64_t{0});

  c.set("eval.ratio", 0.1);
  c.set("eval.remove_times", std::string("0,50,200,500"));

  c.set("capacity.n", std::string("500"));
  c.set("capacity.p", std::string("1,25,50,70,100,150"));
  c.set("capacity.trials", std::int64_t{10});

  c.set("ising.width", std::int64_t{32});
  c.set("ising.height", std::int64_t{32});
  c.set("ising.coupling", 1.0);
  c.set("ising.field", 1.0);
  c.set("ising.temperature", 0.0);
  c.set("ising.steps", std::int64_t{1000000});
  c.set("ising.every", std::int64_t{10000});
  c.set("ising.periodic", false);

  c.set("synth.classes", std::int64_t{10});
  c.set("synth.width", std::int64_t{28});
  c.set("synth.height", std::int64_t{28});
  c.set("synth.train_per_class", std::int64_t{20});
  c.set("synth.test_per_class", std::int64_t{20});
  c.set("synth.noise", 0.05);
  return c;
}

KeyValueConfig merge_layers(const std::optional<std::string>& config_path,
                            const KeyValueConfig& flags) {
  auto kv = builtin_defaults();
  if (config_path) kv.merge(KeyValueConfig::load(*config_path));
  kv.merge(flags);
  return kv;
}

PurifierConfig resolve_purifier(const KeyValueConfig& kv, int width, int height, int channels) {
  auto base = PurifierConfig::defaults_for(width, height, channels);
  base.seed = global_seed(kv);
  auto config = PurifierConfig::from_config(kv, base);
  config.validate();
  return config;
}

void fill_purifier_keys(KeyValueConfig& kv, const PurifierConfig& config) {
  const auto resolved = config.to_config();
  for (const auto& [key, value] : resolved.values()) {
    if (!kv.contains(key)) kv.set(key, value);
  }
}

TriggerSpec resolve_trigger(const KeyValueConfig& kv) {
  TriggerSpec spec;
  spec.target_label = static_cast<int>(kv.get_int("trigger.target", 0));
  if (spec.target_label < 0) throw ConfigError("trigger.target must be >= 0");
  const auto kind = kv.get_string("trigger.kind", "patch");
  if (kind == "patch") {
    PatchTrigger patch;
    patch.width = static_cast<int>(kv.get_int("trigger.width", 3));
    patch.height = static_cast<int>(kv.get_int("trigger.height", 3));
    const auto value = kv.get_int("trigger.value", 255);
    if (value < 0 || value > 255) throw ConfigError("trigger.value must be in [0, 255]");
    patch.value = static_cast<std::uint8_t>(value);
    patch.anchor = parse_corner(kv.get_string("trigger.anchor", "bottom-right"));
    spec.kind = patch;
  } else if (kind == "blend") {
    BlendTrigger blend;
    blend.alpha = kv.get_double("trigger.alpha", 0.065);
    if (!(blend.alpha >= 0.0 && blend.alpha <= 1.0)) {
      throw ConfigError("trigger.alpha must be in [0, 1]");
    }
    const auto overlay = kv.get_string("trigger.overlay");
    if (!overlay) throw ConfigError("blend trigger needs trigger.overlay (an image path)");
    blend.overlay = read_image(*overlay);
    spec.kind = std::move(blend);
  } else {
    throw ConfigError("unknown trigger kind '" + kind + "' (expected patch or blend)");
  }
  return spec;
}

std::uint64_t global_seed(const KeyValueConfig& kv) {
  const auto seed = kv.get_int("seed", 0);
  if (seed < 0) throw ConfigError("seed must be >= 0");
  return static_cast<std::uint64_t>(seed);
}

std::filesystem::path out_dir(const KeyValueConfig& kv) { return kv.get_string("out", "out"); }

std::string require_string(const KeyValueConfig& kv, const std::string& key) {
  auto v = kv.get_string(key);
  if (!v || v->empty()) throw ConfigError("missing required setting '" + key + "'");
  return *v;
}

std::vector<std::uint64_t> get_uint_list(const KeyValueConfig& kv, const std::string& key) {
  if (auto single = kv.values().find(key);
      single != kv.values().end() && std::holds_alternative<std::int64_t>(single->second)) {
    const auto v = std::get<std::int64_t>(single->second);
    if (v < 0) throw ConfigError(key + " must be >= 0");
    return {static_cast<std::uint64_t>(v)};
  }
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(require_string(kv, key))) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError(key + ": '" + item + "' is not a non-negative integer");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(key + " is empty");
  return out;
}

std::vector<double> get_double_list(const KeyValueConfig& kv, const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(require_string(kv, key))) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(key + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(key + " is empty");
  return out;
}

}  // namespace sifter::cli
