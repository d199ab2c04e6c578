#pragma once

// Pipeline configuration and the key = value file format it is read from.
//
// Files are TOML-flavoured: `key = value` lines, `#` comments, optional
// `[section]` headers. Built-in defaults reproduce the reference labeling
// rules; files override defaults and command-line flags override files.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gridpop/geodata.hpp"

namespace gridpop {

struct KeyValueSection {
  std::string name;  // empty for the leading, unnamed section
  std::vector<std::pair<std::string, std::string>> entries;
};

/// Throws Error(config) with the offending line number.
std::vector<KeyValueSection> parse_key_values(std::string_view text);

enum class Split { train, val };

std::string_view to_string(Split split) noexcept;
Split parse_split(std::string_view text);

struct PipelineConfig {
  double tile_size_m = 36.0;
  int target_px = 224;
  /// A pixel is "white" when every channel is at least this level.
  int cloud_white_level = 240;
  double cloud_max_ratio = 0.05;
  double residential_threshold = 0.30;
  int supersample = 4;
  std::uint64_t seed = 2020;

  std::map<std::string, Split, std::less<>> split_map;
  /// Sites whose tiles skip the cloud filter.
  std::set<std::string, std::less<>> cloud_filter_exempt;
  TagMap tag_map = TagMap::defaults();

  int train_epochs = 400;
  double train_learning_rate = 0.5;

  static PipelineConfig defaults();

  /// Applies one `key = value` setting. Throws Error(config) for unknown
  /// keys or malformed values. Recognized keys: tile_size_m, target_px,
  /// cloud_white_level, cloud_max_ratio, residential_threshold, supersample,
  /// seed, train.epochs, train.learning_rate, split.<site>,
  /// cloud_filter.<site> (on|off), tag.key, tag.residential,
  /// tag.non_residential (comma-separated values).
  void set(std::string_view key, std::string_view value);

  /// Throws Error(config) when a field is out of range.
  void validate() const;

  bool cloud_filter_applies(std::string_view site_id) const {
    return !cloud_filter_exempt.contains(site_id);
  }

  /// Canonical single-line JSON snapshot (sorted keys).
  std::string to_json() const;
};

/// Defaults overlaid with a config file's unnamed section.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace gridpop
