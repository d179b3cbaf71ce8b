#include "lakeice/data/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "lakeice/io/lif.hpp"

namespace lakeice {

using nlohmann::json;

AcquisitionCalendar LakeWinter::calendar() const {
  AcquisitionCalendar cal;
  cal.season_start = season_start;
  cal.season_end = season_end;
  for (const auto& obs : observations) {
    auto& list = cal.dates[obs.sensor];
    if (list.empty() || list.back() < obs.date) list.push_back(obs.date);
  }
  return cal;
}

const DayLabel* LakeWinter::label_at(Date d) const {
  auto it = labels.find(d);
  return it == labels.end() ? nullptr : &it->second;
}

LabelGrid LakeWinter::rasterize_label(Date d, bool sar_resolution) const {
  const DayLabel* label = label_at(d);
  if (!label) throw DataError("no label for " + d.to_iso());
  if (label->is_transition)
    throw DataError("per-pixel labels exist only for non-transition days");
  if (!sar_resolution && label->per_pixel) return *label->per_pixel;

  const Mask& clean = sar_resolution ? geometry.clean_sar : geometry.clean_optical;
  const PixelClass lake_class = label->water_fraction >= 0.5
                                    ? PixelClass::NonFrozen
                                    : PixelClass::Frozen;
  LabelGrid g(clean.height, clean.width, PixelClass::Background);
  for (int y = 0; y < clean.height; ++y)
    for (int x = 0; x < clean.width; ++x)
      if (clean.at(y, x)) g.set(y, x, lake_class);
  return g;
}

std::vector<std::string> Dataset::lake_ids() const {
  std::set<std::string> s;
  for (const auto& lw : items) s.insert(lw.lake_id);
  return {s.begin(), s.end()};
}

std::vector<std::string> Dataset::winter_ids() const {
  std::set<std::string> s;
  for (const auto& lw : items) s.insert(lw.winter_id);
  return {s.begin(), s.end()};
}

const LakeWinter* Dataset::find(const std::string& lake,
                                const std::string& winter) const {
  for (const auto& lw : items)
    if (lw.lake_id == lake && lw.winter_id == winter) return &lw;
  return nullptr;
}

namespace {

json grid_spec_to_json(const GridSpec& g) {
  return json{{"height", g.height},
              {"width", g.width},
              {"origin_x", g.origin_x},
              {"origin_y", g.origin_y},
              {"cell", g.cell}};
}

GridSpec grid_spec_from_json(const json& j) {
  GridSpec g;
  g.height = j.at("height").get<int>();
  g.width = j.at("width").get<int>();
  g.origin_x = j.at("origin_x").get<double>();
  g.origin_y = j.at("origin_y").get<double>();
  g.cell = j.at("cell").get<double>();
  return g;
}

std::string obs_stem(const SensorObservation& obs) {
  return to_string(obs.sensor) + "_" + obs.date.to_iso();
}

}  // namespace

void save_dataset(const Dataset& ds, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  fs::create_directories(root);
  for (const auto& lw : ds.items) {
    const fs::path dir = root / (lw.lake_id + "__" + lw.winter_id);
    fs::create_directories(dir / "obs");
    fs::create_directories(dir / "labels");

    json manifest;
    manifest["lake"] = lw.lake_id;
    manifest["winter"] = lw.winter_id;
    manifest["season"] = {{"start", lw.season_start.to_iso()},
                          {"end", lw.season_end.to_iso()}};
    json outline = json::array();
    for (const auto& p : lw.geometry.outline)
      outline.push_back(json::array({p.x, p.y}));
    manifest["geometry"] = {{"outline", outline},
                            {"optical_grid", grid_spec_to_json(lw.geometry.optical_grid)},
                            {"sar_grid", grid_spec_to_json(lw.geometry.sar_grid)}};

    json observations = json::array();
    for (const auto& obs : lw.observations) {
      const std::string stem = obs_stem(obs);
      const std::string file = "obs/" + stem + ".lif";
      const std::string mask_file = "obs/" + stem + "_mask.lif";
      write_lif(dir / file, obs.values);
      write_mask_lif(dir / mask_file, obs.valid);
      observations.push_back({{"sensor", to_string(obs.sensor)},
                              {"date", obs.date.to_iso()},
                              {"file", file},
                              {"mask_file", mask_file},
                              {"cloud_free_fraction", obs.cloud_free_fraction}});
    }
    manifest["observations"] = observations;

    json labels = json::array();
    for (const auto& [date, label] : lw.labels) {
      json entry{{"date", date.to_iso()},
                 {"water_fraction", label.water_fraction},
                 {"is_transition", label.is_transition}};
      if (label.per_pixel) {
        const std::string file = "labels/" + date.to_iso() + ".lif";
        write_label_lif(dir / file, *label.per_pixel);
        entry["label_file"] = file;
      }
      labels.push_back(entry);
    }
    manifest["labels"] = labels;

    std::ofstream os(dir / "manifest.json");
    if (!os) throw DataError("cannot write manifest in " + dir.string());
    os << manifest.dump(2) << "\n";
  }
}

Dataset load_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw DataError("dataset directory not found: " + root.string());

  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json"))
      dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty())
    throw DataError("no lake-winter manifests under " + root.string());

  Dataset ds;
  for (const auto& dir : dirs) {
    std::ifstream is(dir / "manifest.json");
    json manifest = json::parse(is);

    LakeWinter lw;
    lw.lake_id = manifest.at("lake").get<std::string>();
    lw.winter_id = manifest.at("winter").get<std::string>();
    lw.season_start = Date::parse_iso(manifest.at("season").at("start"));
    lw.season_end = Date::parse_iso(manifest.at("season").at("end"));

    Polygon outline;
    for (const auto& p : manifest.at("geometry").at("outline"))
      outline.push_back({p[0].get<double>(), p[1].get<double>()});
    lw.geometry = make_lake_geometry(
        lw.lake_id, outline,
        grid_spec_from_json(manifest.at("geometry").at("optical_grid")),
        grid_spec_from_json(manifest.at("geometry").at("sar_grid")));

    for (const auto& o : manifest.at("observations")) {
      SensorObservation obs;
      obs.sensor = sensor_from_string(o.at("sensor").get<std::string>());
      obs.date = Date::parse_iso(o.at("date").get<std::string>());
      obs.lake_id = lw.lake_id;
      obs.values = read_lif(dir / o.at("file").get<std::string>());
      obs.valid = read_mask_lif(dir / o.at("mask_file").get<std::string>());
      obs.cloud_free_fraction = o.at("cloud_free_fraction").get<double>();
      lw.observations.push_back(std::move(obs));
    }

    for (const auto& l : manifest.at("labels")) {
      DayLabel label;
      label.date = Date::parse_iso(l.at("date").get<std::string>());
      label.water_fraction = l.at("water_fraction").get<double>();
      label.is_transition = l.at("is_transition").get<bool>();
      if (l.contains("label_file"))
        label.per_pixel = read_label_lif(dir / l.at("label_file").get<std::string>());
      lw.labels[label.date] = std::move(label);
    }
    ds.items.push_back(std::move(lw));
  }
  return ds;
}

}  // namespace lakeice
