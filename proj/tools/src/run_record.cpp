#include "run_record.hpp"

#include "json.hpp"
#include "workspace.hpp"

namespace gridpop::cli {

const char* tool_version() { return GRIDPOP_VERSION; }

void RunRecord::add_input(const std::filesystem::path& path) {
  for (const auto& [p, digest] : inputs) {
    if (p == path.string()) return;
  }
  inputs.emplace_back(path.string(), sha256_file(path));
}

std::string RunRecord::to_json() const {
  using json = nlohmann::ordered_json;
  json doc;
  doc["command"] = command;
  doc["version"] = version;
  doc["config"] = config_json.empty() ? json(nullptr) : json::parse(config_json);
  doc["seed_source"] = seed_source;
  json in = json::array();
  for (const auto& [path, digest] : inputs) in.push_back({{"path", path}, {"sha256", digest}});
  doc["inputs"] = std::move(in);
  doc["counts"] = counts;
  doc["stage_seconds"] = stage_seconds;
  doc["diagnostics"] = diagnostics;
  return doc.dump(2) + "\n";
}

}  // namespace gridpop::cli
