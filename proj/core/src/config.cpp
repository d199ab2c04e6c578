#include "gridpop/config.hpp"

#include "gridpop/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace gridpop {

std::vector<KeyValueSection> parse_key_values(std::string_view content) {
  std::vector<KeyValueSection> sections(1);
  std::size_t line_no = 0;
  for (std::string_view raw : text::split(content, '\n')) {
    ++line_no;
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::config, "config line " + std::to_string(line_no) + ": " + why);
    };
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      std::string name(text::trim(line.substr(1, line.size() - 2)));
      if (name.empty()) fail("empty section name");
      for (const auto& s : sections) {
        if (s.name == name) fail("duplicate section [" + name + "]");
      }
      sections.push_back({std::move(name), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key = value");
    std::string key(text::trim(line.substr(0, eq)));
    std::string_view value = text::trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key");
    if (!value.empty() && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string_view::npos) fail("unterminated quoted value");
      const std::string_view rest = text::trim(value.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') fail("unexpected text after quoted value");
      value = value.substr(1, close - 1);
    } else if (auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = text::trim(value.substr(0, hash));
    }
    auto& entries = sections.back().entries;
    for (const auto& [k, v] : entries) {
      if (k == key) fail("duplicate key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::string(value));
  }
  return sections;
}

std::string_view to_string(Split split) noexcept { return split == Split::train ? "train" : "val"; }

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "val") return Split::val;
  throw Error(ErrorKind::config, "split must be train or val, got '" + std::string(text) + "'");
}

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  c.split_map = {{"ibadan-sasa", Split::train}, {"ibadan-idikan", Split::train}, {"lagos-bariga", Split::val}};
  return c;
}

namespace {

double number(std::string_view key, std::string_view value) {
  auto v = text::parse_double(value);
  if (!v) throw Error(ErrorKind::config, std::string(key) + " expects a number, got '" + std::string(value) + "'");
  return *v;
}

template <typename Int>
Int integer(std::string_view key, std::string_view value) {
  auto v = text::parse_int<Int>(value);
  if (!v) throw Error(ErrorKind::config, std::string(key) + " expects an integer, got '" + std::string(value) + "'");
  return *v;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  if (key == "tile_size_m") {
    tile_size_m = number(key, value);
  } else if (key == "target_px") {
    target_px = integer<int>(key, value);
  } else if (key == "cloud_white_level") {
    cloud_white_level = integer<int>(key, value);
  } else if (key == "cloud_max_ratio") {
    cloud_max_ratio = number(key, value);
  } else if (key == "residential_threshold") {
    residential_threshold = number(key, value);
  } else if (key == "supersample") {
    supersample = integer<int>(key, value);
  } else if (key == "seed") {
    seed = integer<std::uint64_t>(key, value);
  } else if (key == "train.epochs") {
    train_epochs = integer<int>(key, value);
  } else if (key == "train.learning_rate") {
    train_learning_rate = number(key, value);
  } else if (key.starts_with("split.")) {
    split_map[std::string(key.substr(6))] = parse_split(value);
  } else if (key.starts_with("cloud_filter.")) {
    std::string site(key.substr(13));
    if (value == "off") {
      cloud_filter_exempt.insert(site);
    } else if (value == "on") {
      cloud_filter_exempt.erase(site);
    } else {
      throw Error(ErrorKind::config, std::string(key) + " expects on or off");
    }
  } else if (key == "tag.key") {
    tag_map.key = std::string(value);
  } else if (key == "tag.residential" || key == "tag.non_residential") {
    const ClassTag tag = key == "tag.residential" ? ClassTag::residential : ClassTag::non_residential;
    std::erase_if(tag_map.values, [&](const auto& kv) { return kv.second == tag; });
    for (std::string_view item : text::split(value, ',')) {
      item = text::trim(item);
      if (!item.empty()) tag_map.values[std::string(item)] = tag;
    }
  } else {
    throw Error(ErrorKind::config, "unknown config key '" + std::string(key) + "'");
  }
}

void PipelineConfig::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::config, std::string(name) + " must lie in [0, 1]");
  };
  if (!(tile_size_m > 0.0)) throw Error(ErrorKind::config, "tile_size_m must be positive");
  if (target_px < 1) throw Error(ErrorKind::config, "target_px must be at least 1");
  if (cloud_white_level < 0 || cloud_white_level > 255) {
    throw Error(ErrorKind::config, "cloud_white_level must lie in [0, 255]");
  }
  fraction(cloud_max_ratio, "cloud_max_ratio");
  fraction(residential_threshold, "residential_threshold");
  if (supersample < 1 || supersample > 255) throw Error(ErrorKind::config, "supersample must lie in [1, 255]");
  if (train_epochs < 0) throw Error(ErrorKind::config, "train.epochs must be non-negative");
  if (!(train_learning_rate > 0.0)) throw Error(ErrorKind::config, "train.learning_rate must be positive");
}

std::string PipelineConfig::to_json() const {
  using json = nlohmann::json;
  json splits = json::object();
  for (const auto& [site, split] : split_map) splits[site] = std::string(to_string(split));
  json residential = json::array(), non_residential = json::array();
  for (const auto& [value, tag] : tag_map.values) {
    if (tag == ClassTag::residential) residential.push_back(value);
    if (tag == ClassTag::non_residential) non_residential.push_back(value);
  }
  json doc = {
      {"tile_size_m", tile_size_m},
      {"target_px", target_px},
      {"cloud_white_level", cloud_white_level},
      {"cloud_max_ratio", cloud_max_ratio},
      {"residential_threshold", residential_threshold},
      {"supersample", supersample},
      {"seed", seed},
      {"split_map", splits},
      {"cloud_filter_exempt", cloud_filter_exempt},
      {"tag_map", {{"key", tag_map.key}, {"residential", residential}, {"non_residential", non_residential}}},
      {"train", {{"epochs", train_epochs}, {"learning_rate", train_learning_rate}}},
  };
  return doc.dump();
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  PipelineConfig config = PipelineConfig::defaults();
  const auto sections = parse_key_values(read_text_file(path));
  if (sections.size() > 1) {
    throw Error(ErrorKind::config, "pipeline config does not use sections: [" + sections[1].name + "]");
  }
  for (const auto& [key, value] : sections.front().entries) config.set(key, value);
  config.validate();
  return config;
}

}  // namespace gridpop
