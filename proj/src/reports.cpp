#include "lakeice/report/reports.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lakeice/core/error.hpp"

#ifndef LAKEICE_VERSION
#define LAKEICE_VERSION "v0.0.0"
#endif

namespace lakeice {
namespace {

std::string fixed(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string range_text(const std::optional<DateRange>& r) {
  if (!r) return "-";
  if (r->first == r->last) return r->first.to_iso();
  return r->first.to_iso() + ".." + r->last.to_iso();
}

std::string cmp_text(bool detected, const EventComparison& c) {
  if (!detected) return "not detected";
  if (!c.reference_known) return "no reference";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%+ld %s", c.offset_days,
                c.gcos_pass ? "pass" : "fail");
  return buf;
}

}  // namespace

std::string metrics_report(const std::map<SensorKind, MetricStat>& macc,
                           const std::map<SensorKind, MetricStat>& miou,
                           const std::string& title) {
  std::ostringstream os;
  os << title << "\n";
  os << pad("Data", 10) << pad("mAcc mu", 10) << pad("sigma", 9)
     << pad("mIoU mu", 10) << pad("sigma", 9) << "\n";
  for (SensorKind k : kAllSensors) {
    auto a = macc.find(k);
    auto i = miou.find(k);
    if (a == macc.end() || i == miou.end()) continue;
    os << pad(to_string(k), 10) << pad(fixed(a->second.mean(), 1), 10)
       << pad(fixed(a->second.stddev(), 2), 9)
       << pad(fixed(i->second.mean(), 1), 10)
       << pad(fixed(i->second.stddev(), 2), 9) << "\n";
  }
  return os.str();
}

std::string temporal_resolution_report(
    const std::vector<std::pair<std::string, AcquisitionCalendar>>& rows) {
  std::ostringstream os;
  os << "Effective temporal resolution (days); a day imaged by several "
        "satellites is counted once\n";
  os << pad("Lake/Winter", 26) << pad("S", 7) << pad("M", 7) << pad("V", 7)
     << pad("S+M+V", 8) << "\n";
  for (const auto& [name, cal] : rows) {
    auto cell = [&](const std::vector<SensorKind>& sel) -> std::string {
      try {
        return fixed(effective_temporal_resolution(cal, sel), 1);
      } catch (const DataError&) {
        return "-";
      }
    };
    os << pad(name, 26) << pad(cell({SensorKind::SAR}), 7)
       << pad(cell({SensorKind::MODIS}), 7) << pad(cell({SensorKind::VIIRS}), 7)
       << pad(cell({SensorKind::SAR, SensorKind::MODIS, SensorKind::VIIRS}), 8)
       << "\n";
  }
  return os.str();
}

std::string phenology_report(const std::vector<PhenologyReportRow>& rows) {
  std::ostringstream os;
  os << "Ice-on/off dates against reference (GCOS pass = |offset| <= 2 days); "
        "candidates listed chronologically\n";
  os << pad("Lake", 12) << pad("Winter", 10) << pad("Event", 9)
     << pad("Reference", 24) << pad("Pred(10%)", 12) << pad("Offset", 14)
     << pad("Pred(30%)", 12) << pad("Offset", 14) << "\n";
  for (const auto& r : rows) {
    auto pred_text = [](const std::optional<Date>& d,
                        const std::vector<Date>& cands) {
      if (!d) return std::string("-");
      std::string s = d->to_iso();
      if (cands.size() > 1) s += "*";
      return s;
    };
    os << pad(r.lake_id, 12) << pad(r.winter_id, 10) << pad(r.event, 9)
       << pad(range_text(r.reference), 24)
       << pad(pred_text(r.predicted_low, r.candidates_low), 12)
       << pad(cmp_text(r.predicted_low.has_value(), r.cmp_low), 14)
       << pad(pred_text(r.predicted_high, r.candidates_high), 12)
       << pad(cmp_text(r.predicted_high.has_value(), r.cmp_high), 14) << "\n";
  }
  return os.str();
}

void write_prediction_csv(const std::filesystem::path& file,
                          const std::vector<DailyPrediction>& daily) {
  std::ofstream os(file);
  if (!os) throw DataError("cannot write " + file.string());
  os << "date,pred_sar,pred_viirs,pred_modis,fused,ensemble_mean,ensemble_std\n";
  for (const auto& d : daily) {
    auto sensor_cell = [&](SensorKind k) -> std::string {
      double sum = 0;
      int n = 0;
      for (const auto& p : d.per_observation)
        if (p.sensor == k) {
          sum += p.value;
          ++n;
        }
      return n == 0 ? "" : fixed(sum / n, 6);
    };
    os << d.date.to_iso() << "," << sensor_cell(SensorKind::SAR) << ","
       << sensor_cell(SensorKind::VIIRS) << "," << sensor_cell(SensorKind::MODIS)
       << "," << fixed(d.fused, 6) << ",";
    if (d.has_ensemble)
      os << fixed(d.ensemble_mean, 6) << "," << fixed(d.ensemble_std, 6);
    else
      os << ",";
    os << "\n";
  }
}

void write_run_manifest(const std::filesystem::path& dir,
                        const std::string& command,
                        const std::string& config_hash, std::uint64_t seed) {
  nlohmann::json j{{"command", command},
                   {"config_hash", config_hash},
                   {"seed", seed},
                   {"version", LAKEICE_VERSION}};
  std::ofstream os(dir / "run_manifest.json");
  if (!os) throw DataError("cannot write run manifest in " + dir.string());
  os << j.dump(2) << "\n";
}

}  // namespace lakeice
