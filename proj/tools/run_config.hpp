#pragma once

// Resolution of the command-line tool's settings: built-in defaults, then the
// --config file, then flags. Everything downstream reads the merged store.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sifter/attacks.hpp"
#include "sifter/config.hpp"
#include "sifter/error.hpp"
#include "sifter/purifier.hpp"

namespace sifter::cli {

/// Raised when some inputs of a batch command were skipped.
class PartialFailure : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfigError = 2,
  kDataError = 3,
  kPartialFailure = 4,
};

KeyValueConfig builtin_defaults();

/// defaults, then file (if any), then flags.
KeyValueConfig merge_layers(const std::optional<std::string>& config_path,
                            const KeyValueConfig& flags);

/// Purifier settings for images of the given shape: shape-dependent
/// defaults, then any purifier.* keys, with the global seed used when
/// purifier.seed is absent.
PurifierConfig resolve_purifier(const KeyValueConfig& kv, int width, int height, int channels);

/// Writes the resolved purifier.* keys into `kv` so the printed config is
/// complete.
void fill_purifier_keys(KeyValueConfig& kv, const PurifierConfig& config);

TriggerSpec resolve_trigger(const KeyValueConfig& kv);

std::uint64_t global_seed(const KeyValueConfig& kv);
std::filesystem::path out_dir(const KeyValueConfig& kv);
std::string require_string(const KeyValueConfig& kv, const std::string& key);

/// Comma-separated list, or a single integer value.
std::vector<std::uint64_t> get_uint_list(const KeyValueConfig& kv, const std::string& key);
std::vector<double> get_double_list(const KeyValueConfig& kv, const std::string& key);

}  // namespace sifter::cli
