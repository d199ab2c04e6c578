#include "gridpop/geodata.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gridpop/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace gridpop {

using json = nlohmann::json;

Raster make_raster(Image image, GeoTransform transform) {
  if (image.width < 1 || image.height < 1) throw Error(ErrorKind::geometry, "raster must be at least 1x1");
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorKind::geometry, "raster must have 1 or 3 channels");
  }
  if (image.samples.size() != static_cast<std::size_t>(image.width) * image.height * image.channels) {
    throw Error(ErrorKind::geometry, "raster sample count does not match its dimensions");
  }
  if (!(transform.pixel_w > 0.0) || !(transform.pixel_h > 0.0)) {
    throw Error(ErrorKind::geometry, "non-positive pixel size");
  }
  return Raster{std::move(image), std::move(transform)};
}

GeoTransform parse_world_file(std::string_view text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(text, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    if (values.size() == 6) break;
    auto v = text::parse_double(line);
    if (!v) {
      throw Error(ErrorKind::parse, "world file line " + std::to_string(line_no) + " is not numeric");
    }
    values.push_back(*v);
  }
  if (values.size() < 6) throw Error(ErrorKind::parse, "world file needs 6 numeric lines");

  const double a = values[0], d = values[1], b = values[2], e = values[3];
  const double c = values[4], f = values[5];
  if (d != 0.0 || b != 0.0) throw Error(ErrorKind::geometry, "rotated transforms unsupported");
  if (!(a > 0.0) || !(e < 0.0)) throw Error(ErrorKind::geometry, "non-positive pixel size");

  GeoTransform t;
  t.pixel_w = a;
  t.pixel_h = -e;
  t.origin_x = c - a / 2.0;
  t.origin_y = f + t.pixel_h / 2.0;
  return t;
}

std::string format_world_file(const GeoTransform& t) {
  std::string out;
  for (double v : {t.pixel_w, 0.0, 0.0, -t.pixel_h, t.origin_x + t.pixel_w / 2.0,
                   t.origin_y - t.pixel_h / 2.0}) {
    out += text::shortest(v);
    out += '\n';
  }
  return out;
}

std::string_view to_string(ClassTag tag) noexcept {
  switch (tag) {
    case ClassTag::residential: return "residential";
    case ClassTag::non_residential: return "non_residential";
    case ClassTag::unknown: return "unknown";
  }
  return "unknown";
}

ClassTag parse_class_tag(std::string_view text) {
  if (text == "residential") return ClassTag::residential;
  if (text == "non_residential") return ClassTag::non_residential;
  if (text == "unknown") return ClassTag::unknown;
  throw Error(ErrorKind::config, "unknown class tag '" + std::string(text) + "'");
}

TagMap TagMap::defaults() {
  TagMap m;
  for (const char* v : {"residential", "house", "hut", "apartments", "detached"}) {
    m.values.emplace(v, ClassTag::residential);
  }
  for (const char* v : {"church", "mosque", "school", "commercial", "retail", "industrial", "shed"}) {
    m.values.emplace(v, ClassTag::non_residential);
  }
  return m;
}

ClassTag TagMap::classify(std::string_view value) const {
  auto it = values.find(value);
  return it == values.end() ? ClassTag::unknown : it->second;
}

std::size_t FootprintSet::count(ClassTag tag) const {
  std::size_t n = 0;
  for (const Footprint& f : footprints) n += f.class_tag == tag;
  return n;
}

namespace {

// Raised for a single bad feature; caught per feature and turned into a
// diagnostic.
struct FeatureRejected {
  std::string reason;
};

std::string crs_name(const json& crs) {
  if (crs.is_string()) return crs.get<std::string>();
  if (crs.is_object()) {
    auto props = crs.find("properties");
    if (props != crs.end() && props->is_object()) {
      auto name = props->find("name");
      if (name != props->end() && name->is_string()) return name->get<std::string>();
    }
  }
  throw Error(ErrorKind::parse, "unreadable crs member");
}

Ring parse_ring(const json& coords) {
  if (!coords.is_array()) throw FeatureRejected{"ring is not an array"};
  std::vector<Point> pts;
  pts.reserve(coords.size());
  for (const json& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw FeatureRejected{"invalid position"};
    }
    pts.push_back({pos[0].get<double>(), pos[1].get<double>()});
  }
  if (pts.size() < 4) throw FeatureRejected{"ring needs at least 4 positions"};
  if (!(pts.front() == pts.back())) throw FeatureRejected{"ring not closed"};
  return canonical_ring(pts);
}

Polygon parse_polygon(const json& rings) {
  if (!rings.is_array() || rings.empty()) throw FeatureRejected{"polygon has no rings"};
  Ring exterior = parse_ring(rings[0]);
  std::vector<Ring> holes;
  for (std::size_t i = 1; i < rings.size(); ++i) holes.push_back(parse_ring(rings[i]));
  try {
    return make_polygon(std::move(exterior), std::move(holes));
  } catch (const Error& e) {
    throw FeatureRejected{e.what()};
  }
}

std::string feature_id(const json& feature, std::size_t index) {
  auto pick = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return text::shortest(v.get<double>());
    return {};
  };
  if (auto it = feature.find("id"); it != feature.end()) {
    if (auto s = pick(*it); !s.empty()) return s;
  }
  if (auto props = feature.find("properties"); props != feature.end() && props->is_object()) {
    if (auto it = props->find("id"); it != props->end()) {
      if (auto s = pick(*it); !s.empty()) return s;
    }
  }
  return "feature-" + std::to_string(index);
}

json ring_json(const Ring& ring) {
  json out = json::array();
  for (const Point& p : ring) out.push_back(json::array({p.x, p.y}));
  if (!ring.empty()) out.push_back(json::array({ring.front().x, ring.front().y}));
  return out;
}

}  // namespace

FootprintIngest parse_footprints(std::string_view document, const TagMap& tags,
                                 std::string_view crs_id) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("footprint document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    throw Error(ErrorKind::parse, "footprint document is not a FeatureCollection");
  }
  auto check_crs = [&](const json& holder, const std::string& where) {
    auto it = holder.find("crs");
    if (it == holder.end() || it->is_null()) return;
    const std::string name = crs_name(*it);
    if (name != crs_id) {
      throw Error(ErrorKind::crs_mismatch, "mixed CRS: " + where + " declares '" + name +
                                               "' but the dataset is '" + std::string(crs_id) + "'");
    }
  };
  check_crs(doc, "collection");

  FootprintIngest out;
  out.set.crs_id = std::string(crs_id);
  auto features = doc.find("features");
  if (features == doc.end() || !features->is_array()) {
    throw Error(ErrorKind::parse, "FeatureCollection has no features array");
  }
  std::set<std::string, std::less<>> seen;

  for (std::size_t i = 0; i < features->size(); ++i) {
    const json& feature = (*features)[i];
    if (!feature.is_object()) {
      out.rejected.push_back({i, "feature-" + std::to_string(i), "feature is not an object"});
      continue;
    }
    check_crs(feature, "feature " + std::to_string(i));
    const std::string id = feature_id(feature, i);
    try {
      auto geom = feature.find("geometry");
      if (geom == feature.end() || !geom->is_object()) throw FeatureRejected{"missing geometry"};
      const std::string type = geom->value("type", "");
      auto coords = geom->find("coordinates");
      if (coords == geom->end()) throw FeatureRejected{"geometry has no coordinates"};

      std::vector<Polygon> parts;
      if (type == "Polygon") {
        parts.push_back(parse_polygon(*coords));
      } else if (type == "MultiPolygon") {
        if (!coords->is_array() || coords->empty()) throw FeatureRejected{"empty MultiPolygon"};
        for (const json& part : *coords) parts.push_back(parse_polygon(part));
      } else {
        throw FeatureRejected{"unsupported geometry type '" + type + "'"};
      }

      std::string source_tag;
      if (auto props = feature.find("properties"); props != feature.end() && props->is_object()) {
        if (auto v = props->find(tags.key); v != props->end() && v->is_string()) {
          source_tag = v->get<std::string>();
        }
      }
      const ClassTag tag = tags.classify(source_tag);

      std::vector<std::string> ids;
      if (type == "Polygon") {
        ids.push_back(id);
      } else {
        for (std::size_t k = 0; k < parts.size(); ++k) ids.push_back(id + "#" + std::to_string(k + 1));
      }
      for (const std::string& part_id : ids) {
        if (seen.contains(part_id)) throw FeatureRejected{"duplicate id '" + part_id + "'"};
      }
      for (std::size_t k = 0; k < parts.size(); ++k) {
        seen.insert(ids[k]);
        out.set.footprints.push_back({ids[k], std::move(parts[k]), tag, source_tag});
      }
    } catch (const FeatureRejected& r) {
      out.rejected.push_back({i, id, r.reason});
    } catch (const json::exception& e) {
      out.rejected.push_back({i, id, std::string("malformed feature: ") + e.what()});
    }
  }
  return out;
}

std::string serialize_footprints(const FootprintSet& set, std::string_view tag_key,
                                 std::span<const double> persons) {
  if (!persons.empty() && persons.size() != set.footprints.size()) {
    throw Error(ErrorKind::domain, "persons list does not match footprint count");
  }
  json features = json::array();
  for (std::size_t i = 0; i < set.footprints.size(); ++i) {
    const Footprint& f = set.footprints[i];
    json rings = json::array();
    rings.push_back(ring_json(f.polygon.exterior));
    for (const Ring& h : f.polygon.holes) rings.push_back(ring_json(h));
    json props = json::object();
    if (!f.source_tag.empty()) props[std::string(tag_key)] = f.source_tag;
    if (!persons.empty()) props["persons"] = persons[i];
    features.push_back({{"type", "Feature"},
                        {"id", f.id},
                        {"properties", std::move(props)},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", std::move(rings)}}}});
  }
  json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump() + "\n";
}

std::string format_ingest_log(std::string_view source_name, const FootprintIngest& ingest) {
  std::ostringstream os;
  os << "# source=" << source_name << " accepted=" << ingest.set.footprints.size()
     << " rejected=" << ingest.rejected.size() << "\n";
  for (const Diagnostic& d : ingest.rejected) {
    os << "rejected index=" << d.feature_index << " id=" << d.feature_id << " reason=" << d.reason
       << "\n";
  }
  return os.str();
}

std::filesystem::path crs_sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p.replace_extension(".crs.json");
  return p;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::input, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::input, "write failed for " + path.string());
}

std::string read_crs_sidecar(const std::filesystem::path& sidecar) {
  json doc;
  try {
    doc = json::parse(read_text_file(sidecar));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, "invalid CRS sidecar " + sidecar.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("crs_id") || !doc["crs_id"].is_string()) {
    throw Error(ErrorKind::parse, "CRS sidecar " + sidecar.string() + " lacks crs_id");
  }
  if (doc.value("units", "") != "m") {
    throw Error(ErrorKind::crs_mismatch, "CRS sidecar " + sidecar.string() + " is not meter-based");
  }
  return doc["crs_id"].get<std::string>();
}

void write_crs_sidecar(const std::filesystem::path& sidecar, std::string_view crs_id) {
  json doc = {{"crs_id", std::string(crs_id)}, {"units", "m"}};
  write_text_file(sidecar, doc.dump() + "\n");
}

Raster load_raster(const std::filesystem::path& png_path) {
  std::filesystem::path world = png_path;
  world.replace_extension(".pgw");
  GeoTransform t = parse_world_file(read_text_file(world));
  t.crs_id = read_crs_sidecar(crs_sidecar_path(png_path));
  return make_raster(read_png(png_path), std::move(t));
}

void save_raster(const std::filesystem::path& png_path, const Raster& raster) {
  write_png(png_path, raster.image);
  std::filesystem::path world = png_path;
  world.replace_extension(".pgw");
  write_text_file(world, format_world_file(raster.transform));
  write_crs_sidecar(crs_sidecar_path(png_path), raster.transform.crs_id);
}

FootprintIngest load_footprints(const std::filesystem::path& geojson_path, const TagMap& tags) {
  const std::string crs = read_crs_sidecar(crs_sidecar_path(geojson_path));
  return parse_footprints(read_text_file(geojson_path), tags, crs);
}

}  // namespace gridpop
