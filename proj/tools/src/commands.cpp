#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "gridpop/classifier.hpp"
#include "gridpop/error.hpp"
#include "gridpop/features.hpp"
#include "gridpop/labeler.hpp"
#include "gridpop/popgrid.hpp"
#include "gridpop/rasterizer.hpp"
#include "gridpop/synth.hpp"
#include "json.hpp"
#include "run_record.hpp"
#include "workspace.hpp"

namespace gridpop::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kChunk = 64;

struct Common {
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  int jobs = default_jobs();
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Pipeline config file (key = value)")->check(CLI::ExistingFile);
  sub->add_option("--set", c.settings, "Override one config key, KEY=VALUE (repeatable)");
  sub->add_option("--seed", c.seed, "Override the config seed");
  sub->add_option("--jobs", c.jobs, "Worker threads for per-tile stages")->check(CLI::PositiveNumber);
}

// defaults < config file < GRIDPOP_SEED < --set < --seed
PipelineConfig resolve_config(const Common& c, RunRecord& record) {
  PipelineConfig config = PipelineConfig::defaults();
  record.seed_source = "default";
  if (!c.config_path.empty()) {
    config = load_pipeline_config(c.config_path);
    record.add_input(c.config_path);
    if (config.seed != PipelineConfig::defaults().seed) record.seed_source = "config";
  }
  if (const char* env = std::getenv("GRIDPOP_SEED"); env && *env) {
    config.set("seed", env);
    record.seed_source = "env";
  }
  for (const std::string& kv : c.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::config, "--set expects KEY=VALUE, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    config.set(key, kv.substr(eq + 1));
    if (key == "seed") record.seed_source = "flag";
  }
  if (c.seed) {
    config.seed = *c.seed;
    record.seed_source = "flag";
  }
  config.validate();
  record.config_json = config.to_json();
  return config;
}

RunRecord new_record(std::string command) {
  RunRecord r;
  r.command = std::move(command);
  r.version = tool_version();
  return r;
}

void add_raster_inputs(RunRecord& record, const fs::path& png) {
  fs::path pgw = png;
  pgw.replace_extension(".pgw");
  record.add_input(png);
  record.add_input(pgw);
  record.add_input(crs_sidecar_path(png));
}

std::vector<Example> load_examples(const Manifest& manifest, const fs::path& base, int jobs,
                                   std::vector<FeatureVector>* features_out = nullptr) {
  std::vector<FeatureVector> features(manifest.tiles.size());
  parallel_for(jobs, manifest.tiles.size(), [&](std::size_t i) {
    features[i] = extract_features(read_png(base / manifest.tiles[i].image_path));
  });
  std::vector<Example> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    out.push_back({std::vector<double>(features[i].begin(), features[i].end()), manifest.tiles[i].label});
  }
  if (features_out) *features_out = std::move(features);
  return out;
}

Model load_model(const fs::path& path) {
  Model m = parse_model(read_text_file(path));
  if (m.feature_spec_id != kFeatureSpecId) {
    throw Error(ErrorKind::input, "model was trained on features '" + m.feature_spec_id + "', this build extracts '" +
                                      std::string(kFeatureSpecId) + "'");
  }
  return m;
}

json metrics_json(const Metrics& m) { return json::parse(metrics_to_json(m)); }

// ---------------------------------------------------------------- tile

struct TileOptions {
  Common common;
  std::vector<std::string> sites, rasters, footprints;
  std::string workdir;
};

int cmd_tile(const TileOptions& o) {
  if (o.sites.size() != o.rasters.size() || o.sites.size() != o.footprints.size()) {
    throw Error(ErrorKind::input, "--site, --raster and --footprints must be given the same number of times");
  }
  RunRecord record = new_record("tile");
  const PipelineConfig config = resolve_config(o.common, record);
  const fs::path work = o.workdir;
  OutputTransaction tx;
  long long built = 0;

  for (std::size_t s = 0; s < o.sites.size(); ++s) {
    const std::string& site = o.sites[s];
    const fs::path raster_path = fs::absolute(o.rasters[s]);
    const fs::path fp_path = fs::absolute(o.footprints[s]);
    Raster raster;
    FootprintIngest ingest;
    {
      StageTimer t(record, "ingest");
      add_raster_inputs(record, raster_path);
      record.add_input(fp_path);
      record.add_input(crs_sidecar_path(fp_path));
      raster = load_raster(raster_path);
      ingest = load_footprints(fp_path, config.tag_map);
    }
    if (ingest.set.crs_id != raster.transform.crs_id) {
      throw Error(ErrorKind::crs_mismatch, "site " + site + ": raster CRS '" + raster.transform.crs_id +
                                               "' differs from footprint CRS '" + ingest.set.crs_id + "'");
    }
    tx.write_text(work / (site + ".ingest.log"), format_ingest_log(fp_path.filename().string(), ingest));
    for (const Diagnostic& d : ingest.rejected) {
      record.diagnostics.push_back(site + ": rejected index=" + std::to_string(d.feature_index) + " id=" +
                                   d.feature_id + " reason=" + d.reason);
    }
    record.counts["footprints_accepted"] += static_cast<long long>(ingest.set.footprints.size());
    record.counts["footprints_rejected"] += static_cast<long long>(ingest.rejected.size());
    for (ClassTag tag : {ClassTag::residential, ClassTag::non_residential, ClassTag::unknown}) {
      record.counts["footprints_" + std::string(to_string(tag))] += static_cast<long long>(ingest.set.count(tag));
    }

    StageTimer t(record, "tile");
    const TileGrid grid = build_grid(raster, config.tile_size_m);
    std::vector<Cell> cells;
    for (int r = 0; r < grid.n_rows; ++r) {
      for (int c = 0; c < grid.n_cols; ++c) cells.push_back({r, c});
    }
    for (std::size_t begin = 0; begin < cells.size(); begin += kChunk) {
      const std::size_t n = std::min(kChunk, cells.size() - begin);
      std::vector<TileImage> images(n);
      parallel_for(o.common.jobs, n, [&](std::size_t i) {
        images[i] = make_tile_image(raster, grid, cells[begin + i], config.target_px);
      });
      for (const TileImage& img : images) {
        write_png(tx.stage(work / "tiles" / tile_file_name(site, img.cell)), img.pixels);
      }
    }
    built += static_cast<long long>(cells.size());

    GridDescription desc;
    desc.site_id = site;
    desc.grid = grid;
    desc.crs_id = raster.transform.crs_id;
    desc.raster_width = raster.width();
    desc.raster_height = raster.height();
    desc.pixel_w = raster.transform.pixel_w;
    desc.pixel_h = raster.transform.pixel_h;
    desc.source_px = cell_window(raster, grid, {0, 0}).side_x;
    desc.target_px = config.target_px;
    desc.raster_path = raster_path.string();
    desc.footprints_path = fp_path.string();
    desc.tiles_dir = "tiles";
    tx.write_text(work / (site + ".grid.json"), grid_to_json(desc));
  }
  record.counts["tiles_built"] = built;
  tx.write_text(work / "tile.run.json", record.to_json());
  tx.commit();
  std::cout << "tiles_built=" << built << "\n";
  return 0;
}

// --------------------------------------------------------------- label

struct LabelOptions {
  Common common;
  std::string workdir;
  bool masks = false;
};

std::vector<fs::path> grid_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::input, "not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.ends_with(".grid.json")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorKind::input, "no *.grid.json in " + dir.string() + "; run `gridpop tile` first");
  return out;
}

int cmd_label(const LabelOptions& o) {
  RunRecord record = new_record("label");
  const PipelineConfig config = resolve_config(o.common, record);
  const fs::path work = o.workdir;
  OutputTransaction tx;
  std::vector<LabeledTile> all;

  for (const fs::path& grid_path : grid_files(work)) {
    record.add_input(grid_path);
    const GridDescription desc = grid_from_json(read_text_file(grid_path));
    if (desc.target_px != config.target_px) {
      throw Error(ErrorKind::config, "site " + desc.site_id + " was tiled at " + std::to_string(desc.target_px) +
                                         " px but target_px is " + std::to_string(config.target_px));
    }
    if (std::abs(desc.grid.tile_size_m - config.tile_size_m) > 1e-9) {
      throw Error(ErrorKind::config, "site " + desc.site_id + " was tiled with a different tile_size_m");
    }
    FootprintIngest ingest;
    {
      StageTimer t(record, "ingest");
      record.add_input(desc.footprints_path);
      ingest = load_footprints(desc.footprints_path, config.tag_map);
    }
    if (ingest.set.crs_id != desc.crs_id) {
      throw Error(ErrorKind::crs_mismatch, "site " + desc.site_id + ": footprint CRS '" + ingest.set.crs_id +
                                               "' differs from grid CRS '" + desc.crs_id + "'");
    }

    StageTimer t(record, "label");
    std::vector<Cell> cells;
    for (int r = 0; r < desc.grid.n_rows; ++r) {
      for (int c = 0; c < desc.grid.n_cols; ++c) cells.push_back({r, c});
    }
    for (std::size_t begin = 0; begin < cells.size(); begin += kChunk) {
      const std::size_t n = std::min(kChunk, cells.size() - begin);
      std::vector<LabeledTile> tiles(n);
      std::vector<Image> masks(o.masks ? n : 0);
      parallel_for(o.common.jobs, n, [&](std::size_t i) {
        const Cell cell = cells[begin + i];
        const std::string rel = (fs::path(desc.tiles_dir) / tile_file_name(desc.site_id, cell)).generic_string();
        const Image img = read_png(work / rel);
        tiles[i] = label_cell(desc.site_id, desc.grid, cell, ingest.set, img, config, rel);
        if (o.masks) {
          masks[i] = mask_image(rasterize_coverage(ingest.set, desc.grid.cell_box(cell), config.target_px,
                                                   config.supersample));
        }
      });
      for (std::size_t i = 0; i < n; ++i) {
        record.add_input(work / tiles[i].image_path);
        if (o.masks) write_png(tx.stage(work / "masks" / tile_file_name(desc.site_id, cells[begin + i])), masks[i]);
        all.push_back(std::move(tiles[i]));
      }
    }
  }

  const std::size_t built = all.size();
  std::vector<LabeledTile> kept = apply_cloud_filter(std::move(all), config);
  const ClassBalance balance = class_balance(kept);

  json report;
  report["residential"] = balance.residential;
  report["non_residential"] = balance.non_residential;
  report["fraction_residential"] = balance.fraction_residential;
  report["fraction_non_residential"] = balance.fraction_non_residential;
  std::map<std::string, std::vector<LabeledTile>> by_site;
  for (const LabeledTile& t : kept) by_site[t.site_id].push_back(t);
  json sites = json::object();
  for (const auto& [site, tiles] : by_site) {
    const ClassBalance b = class_balance(tiles);
    sites[site] = {{"split", std::string(to_string(tiles.front().split))},
                   {"residential", b.residential},
                   {"non_residential", b.non_residential},
                   {"fraction_residential", b.fraction_residential}};
  }
  report["sites"] = std::move(sites);

  record.counts["tiles_built"] = static_cast<long long>(built);
  record.counts["cloud_filtered"] = static_cast<long long>(built - kept.size());
  record.counts["labeled"] = static_cast<long long>(kept.size());
  record.counts["labeled_residential"] = static_cast<long long>(balance.residential);
  record.counts["labeled_non_residential"] = static_cast<long long>(balance.non_residential);

  tx.write_text(work / "manifest.jsonl", format_manifest(config, std::move(kept)));
  tx.write_text(work / "class_balance.json", report.dump(2) + "\n");
  tx.write_text(work / "label.run.json", record.to_json());
  tx.commit();
  std::cout << report.dump() << "\n";
  return 0;
}

// --------------------------------------------------------------- train

struct TrainOptions {
  Common common;
  std::string manifest;
  std::string model;
  std::string metrics;
};

int cmd_train(const TrainOptions& o) {
  RunRecord record = new_record("train");
  const PipelineConfig config = resolve_config(o.common, record);
  const fs::path manifest_path = o.manifest;
  record.add_input(manifest_path);
  const Manifest manifest = parse_manifest(read_text_file(manifest_path));
  const fs::path base = manifest_path.parent_path();
  for (const LabeledTile& t : manifest.tiles) record.add_input(base / t.image_path);

  std::vector<Example> examples;
  {
    StageTimer t(record, "features");
    examples = load_examples(manifest, base, o.common.jobs);
  }
  std::vector<Example> train, val;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    (manifest.tiles[i].split == Split::train ? train : val).push_back(std::move(examples[i]));
  }
  if (train.empty()) throw Error(ErrorKind::domain, "manifest has no train-split tiles");

  Model model;
  {
    StageTimer t(record, "train");
    model = train_logistic(train, config.train_learning_rate, config.train_epochs, config.seed, kFeatureSpecId);
  }
  json metrics;
  metrics["train"] = metrics_json(evaluate(model, train));
  metrics["val"] = val.empty() ? json(nullptr) : metrics_json(evaluate(model, val));
  metrics["epochs"] = model.meta.epochs;
  metrics["final_loss"] = model.meta.final_loss;

  record.counts["train_examples"] = static_cast<long long>(train.size());
  record.counts["val_examples"] = static_cast<long long>(val.size());
  record.counts["epochs"] = model.meta.epochs;

  const fs::path model_path = o.model;
  const fs::path metrics_path = o.metrics.empty() ? fs::path(o.model + ".metrics.json") : fs::path(o.metrics);
  OutputTransaction tx;
  tx.write_text(model_path, format_model(model));
  tx.write_text(metrics_path, metrics.dump(2) + "\n");
  tx.write_text(model_path.parent_path() / "train.run.json", record.to_json());
  tx.commit();
  std::cout << metrics.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  Common common;
  std::string model;
  std::string manifest;
  std::string split = "val";
  std::string out;
};

int cmd_eval(const EvalOptions& o) {
  RunRecord record = new_record("eval");
  record.seed_source = "default";
  const fs::path manifest_path = o.manifest;
  record.add_input(o.model);
  record.add_input(manifest_path);
  const Model model = load_model(o.model);
  Manifest manifest = parse_manifest(read_text_file(manifest_path));
  if (o.split != "all") {
    const Split wanted = parse_split(o.split);
    std::erase_if(manifest.tiles, [&](const LabeledTile& t) { return t.split != wanted; });
  }
  if (manifest.tiles.empty()) throw Error(ErrorKind::domain, "no tiles in split '" + o.split + "'");
  const fs::path base = manifest_path.parent_path();
  for (const LabeledTile& t : manifest.tiles) record.add_input(base / t.image_path);

  std::vector<Example> examples;
  {
    StageTimer t(record, "features");
    examples = load_examples(manifest, base, o.common.jobs);
  }
  json metrics = metrics_json(evaluate(model, examples));
  metrics["split"] = o.split;
  record.counts["examples"] = static_cast<long long>(examples.size());

  const fs::path out = o.out.empty() ? base / ("eval." + o.split + ".json") : fs::path(o.out);
  OutputTransaction tx;
  tx.write_text(out, metrics.dump(2) + "\n");
  tx.write_text(out.parent_path() / "eval.run.json", record.to_json());
  tx.commit();
  std::cout << metrics.dump() << "\n";
  return 0;
}

// -------------------------------------------------------------- popmap

struct PopmapOptions {
  Common common;
  std::string manifest;
  std::vector<std::string> totals;
  int factor = 1;
  std::string mode = "occupancy";
  std::string model;
  std::string fallback = "none";
  std::string out;
};

int cmd_popmap(const PopmapOptions& o) {
  RunRecord record = new_record("popmap");
  resolve_config(o.common, record);
  const WeightMode mode = parse_weight_mode(o.mode);
  if (o.fallback != "none" && o.fallback != "uniform") {
    throw Error(ErrorKind::config, "--fallback must be none or uniform");
  }
  const fs::path manifest_path = o.manifest;
  const fs::path base = manifest_path.parent_path();
  record.add_input(manifest_path);
  const Manifest manifest = parse_manifest(read_text_file(manifest_path));

  std::optional<Model> model;
  if (mode == WeightMode::probability) {
    if (o.model.empty()) throw Error(ErrorKind::input, "--mode probability needs --model");
    record.add_input(o.model);
    model = load_model(o.model);
  }

  std::map<std::string, double> totals;
  for (const std::string& spec : o.totals) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::input, "--total expects SITE=COUNT, got '" + spec + "'");
    const std::string site = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw Error(ErrorKind::input, "--total " + site + ": not a number");
    if (!totals.emplace(site, v).second) throw Error(ErrorKind::input, "--total given twice for " + site);
  }

  OutputTransaction tx;
  const fs::path out = o.out;
  for (const auto& [site, total] : totals) {
    const fs::path grid_path = base / (site + ".grid.json");
    if (!fs::exists(grid_path)) throw Error(ErrorKind::input, "no grid for site '" + site + "' at " + grid_path.string());
    record.add_input(grid_path);
    const GridDescription desc = grid_from_json(read_text_file(grid_path));
    std::vector<LabeledTile> tiles;
    for (const LabeledTile& t : manifest.tiles) {
      if (t.site_id == site) tiles.push_back(t);
    }

    StageTimer timer(record, "popmap");
    CellWeights weights;
    if (tiles.empty()) {
      if (o.fallback != "uniform") {
        throw Error(ErrorKind::domain, "site '" + site + "' has no manifest tiles; use --fallback uniform");
      }
      weights = uniform_weights(desc.grid);
      weights.mode = mode;
    } else {
      ProbabilityFn prob;
      std::map<Cell, double> probs;
      if (model) {
        std::vector<double> p(tiles.size());
        parallel_for(o.common.jobs, tiles.size(), [&](std::size_t i) {
          const FeatureVector f = extract_features(read_png(base / tiles[i].image_path));
          p[i] = predict_proba(*model, f);
        });
        for (std::size_t i = 0; i < tiles.size(); ++i) {
          record.add_input(base / tiles[i].image_path);
          probs[tiles[i].cell] = p[i];
        }
        prob = [&probs](const LabeledTile& t) { return probs.at(t.cell); };
      }
      weights = weights_from_tiles(desc.grid, tiles, mode, prob);
      const bool all_zero = std::all_of(weights.weights.begin(), weights.weights.end(), [](double w) { return w == 0.0; });
      if (all_zero && total > 0.0 && o.fallback == "uniform") {
        std::fill(weights.weights.begin(), weights.weights.end(), 1.0);
        record.diagnostics.push_back(site + ": all weights zero, uniform fallback applied");
      }
    }
    const PopulationGrid fine = disaggregate(total, weights);
    const PopulationGrid grid = aggregate(fine, o.factor);
    tx.write_text(out / (site + ".population.csv"), population_csv(grid));
    tx.write_text(out / (site + ".population.geojson"), population_geojson(grid));
    record.counts["cells_" + site] = static_cast<long long>(grid.quanta.size());
    record.counts["flagged_" + site] =
        static_cast<long long>(std::count(grid.flagged.begin(), grid.flagged.end(), true));
  }
  if (totals.empty()) throw Error(ErrorKind::input, "no --total given");
  tx.write_text(out / "popmap.run.json", record.to_json());
  tx.commit();
  return 0;
}

// --------------------------------------------------------------- synth

struct SynthOptions {
  Common common;
  std::string params;
  std::string out;
};

int cmd_synth(const SynthOptions& o) {
  RunRecord record = new_record("synth");
  const PipelineConfig config = resolve_config(o.common, record);
  record.add_input(o.params);
  const std::vector<SynthParams> scenes = parse_synth_params(read_text_file(o.params));
  const fs::path out = o.out;
  OutputTransaction tx;
  for (const SynthParams& p : scenes) {
    Scene scene;
    {
      StageTimer t(record, "generate");
      scene = generate_settlement(p);
    }
    const fs::path png = out / (p.site_id + ".png");
    fs::path pgw = png;
    pgw.replace_extension(".pgw");
    write_png(tx.stage(png), scene.raster.image);
    tx.write_text(pgw, format_world_file(scene.raster.transform));
    write_crs_sidecar(tx.stage(crs_sidecar_path(png)), p.crs_id);
    tx.write_text(out / (p.site_id + ".geojson"),
                  serialize_footprints(scene.footprints, config.tag_map.key, scene.persons));

    StageTimer t(record, "truth");
    const TileGrid grid = build_grid(scene.raster, config.tile_size_m);
    const std::vector<TileTruth> truth = oracle_tile_truth(scene, grid);
    tx.write_text(out / (p.site_id + ".truth.jsonl"), format_truth_jsonl(p.site_id, truth));
    record.counts["buildings_" + p.site_id] = static_cast<long long>(scene.footprints.footprints.size());
    record.counts["residential_" + p.site_id] =
        static_cast<long long>(scene.footprints.count(ClassTag::residential));
    record.counts["tiles_" + p.site_id] = static_cast<long long>(truth.size());
  }
  tx.write_text(out / "synth.run.json", record.to_json());
  tx.commit();
  return 0;
}

// -------------------------------------------------------------- report

int cmd_report(const std::string& workdir) {
  const fs::path work = workdir;
  if (!fs::is_directory(work)) throw Error(ErrorKind::input, "not a directory: " + workdir);
  std::vector<fs::path> records;
  for (const auto& entry : fs::directory_iterator(work)) {
    const std::string name = entry.path().filename().string();
    if (name.ends_with(".run.json")) records.push_back(entry.path());
  }
  std::sort(records.begin(), records.end());
  for (const fs::path& p : records) {
    const json doc = json::parse(read_text_file(p));
    std::cout << "[" << doc.value("command", "?") << "] version=" << doc.value("version", "?")
              << " inputs=" << doc["inputs"].size() << "\n";
    for (const auto& [k, v] : doc["counts"].items()) std::cout << "  " << k << " = " << v.dump() << "\n";
    for (const auto& [k, v] : doc["stage_seconds"].items()) std::cout << "  time." << k << " = " << v.dump() << " s\n";
    if (!doc["diagnostics"].empty()) std::cout << "  diagnostics = " << doc["diagnostics"].size() << "\n";
  }
  const fs::path manifest_path = work / "manifest.jsonl";
  if (fs::exists(manifest_path)) {
    const Manifest m = parse_manifest(read_text_file(manifest_path));
    std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> by_site;
    for (const LabeledTile& t : m.tiles) {
      auto& [res, total] = by_site[{t.site_id, std::string(to_string(t.split))}];
      res += static_cast<std::size_t>(t.label);
      ++total;
    }
    std::cout << "[manifest] tiles=" << m.tiles.size() << "\n";
    for (const auto& [key, v] : by_site) {
      std::cout << "  " << key.first << " (" << key.second << "): " << v.second << " tiles, " << v.first
                << " residential\n";
    }
  }
  if (records.empty() && !fs::exists(manifest_path)) {
    throw Error(ErrorKind::input, "nothing to report in " + workdir);
  }
  return 0;
}

}  // namespace

std::string error_line(std::string_view kind, std::string_view message) {
  std::string msg;
  for (char ch : message) {
    if (ch == '"' || ch == '\\') msg += '\\';
    msg += (ch == '\n' || ch == '\r') ? ' ' : ch;
  }
  return "gridpop error kind=" + std::string(kind) + " msg=\"" + msg + "\"";
}

int run(int argc, char** argv) {
  CLI::App app{"gridpop: residential tile labeling and gridded population maps"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  TileOptions tile;
  auto* tile_cmd = app.add_subcommand("tile", "Cut rasters into metric tiles and record each site's grid");
  add_common(tile_cmd, tile.common);
  tile_cmd->add_option("--site", tile.sites, "Site id (repeat once per site)")->required();
  tile_cmd->add_option("--raster", tile.rasters, "PNG raster with .pgw and .crs.json beside it")->required();
  tile_cmd->add_option("--footprints", tile.footprints, "GeoJSON footprints with .crs.json beside it")->required();
  tile_cmd->add_option("--workdir", tile.workdir, "Output directory")->required();

  LabelOptions label;
  auto* label_cmd = app.add_subcommand("label", "Label tiles, filter clouds, write manifest.jsonl");
  add_common(label_cmd, label.common);
  label_cmd->add_option("--workdir", label.workdir, "Directory written by `gridpop tile`")->required();
  label_cmd->add_flag("--masks", label.masks, "Also write per-tile coverage masks");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train the tile classifier on the manifest's train split");
  add_common(train_cmd, train.common);
  train_cmd->add_option("--manifest", train.manifest, "manifest.jsonl")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--model", train.model, "Model file to write")->required();
  train_cmd->add_option("--metrics", train.metrics, "Metrics JSON (default <model>.metrics.json)");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on one manifest split");
  eval_cmd->add_option("--model", eval.model, "Model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--manifest", eval.manifest, "manifest.jsonl")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", eval.split, "train, val or all")->check(CLI::IsMember({"train", "val", "all"}));
  eval_cmd->add_option("--out", eval.out, "Metrics JSON (default eval.<split>.json beside the manifest)");
  eval_cmd->add_option("--jobs", eval.common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  PopmapOptions popmap;
  auto* popmap_cmd = app.add_subcommand("popmap", "Distribute site population totals over the tile grid");
  add_common(popmap_cmd, popmap.common);
  popmap_cmd->add_option("--manifest", popmap.manifest, "manifest.jsonl")->required()->check(CLI::ExistingFile);
  popmap_cmd->add_option("--total", popmap.totals, "SITE=COUNT (repeatable)")->required();
  popmap_cmd->add_option("--factor", popmap.factor, "Aggregate factor x factor tiles per output cell")
      ->check(CLI::PositiveNumber);
  popmap_cmd->add_option("--mode", popmap.mode, "occupancy, probability or binary")
      ->check(CLI::IsMember({"occupancy", "probability", "binary"}));
  popmap_cmd->add_option("--model", popmap.model, "Model file for --mode probability");
  popmap_cmd->add_option("--fallback", popmap.fallback, "none or uniform, used when all weights are zero");
  popmap_cmd->add_option("--out", popmap.out, "Output directory")->required();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate seeded synthetic scenes with exact truth");
  add_common(synth_cmd, synth.common);
  synth_cmd->add_option("--params", synth.params, "Scene parameter file")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "Summarize run records and the manifest of a workdir");
  report_cmd->add_option("--workdir", report_dir, "Work directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("usage", e.what()) << "\n";
    return 2;
  }

  try {
    if (*tile_cmd) return cmd_tile(tile);
    if (*label_cmd) return cmd_label(label);
    if (*train_cmd) return cmd_train(train);
    if (*eval_cmd) return cmd_eval(eval);
    if (*popmap_cmd) return cmd_popmap(popmap);
    if (*synth_cmd) return cmd_synth(synth);
    if (*report_cmd) return cmd_report(report_dir);
  } catch (const Error& e) {
    std::cerr << error_line(to_string(e.kind()), e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_line("io", e.what()) << "\n";
    return 1;
  }
  return 2;
}

}  // namespace gridpop::cli
