#include "lakeice/report/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "lakeice/core/error.hpp"

namespace lakeice {
namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kMonthColors[12] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};

const char* kMonthNames[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                               "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

std::string fraction_color(double f) {
  // blue (frozen) -> teal -> yellow (open water)
  const double t = std::clamp(f, 0.0, 1.0);
  auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
  double r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = lerp(0.15, 0.10, u);
    g = lerp(0.15, 0.60, u);
    b = lerp(0.55, 0.55, u);
  } else {
    const double u = (t - 0.5) / 0.5;
    r = lerp(0.10, 0.95, u);
    g = lerp(0.60, 0.90, u);
    b = lerp(0.55, 0.25, u);
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r * 255),
                static_cast<int>(g * 255), static_cast<int>(b * 255));
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct SvgFile {
  std::ofstream os;

  SvgFile(const std::filesystem::path& file, int w, int h) : os(file) {
    if (!os) throw DataError("cannot write plot " + file.string());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  ~SvgFile() { os << "</svg>\n"; }

  void text(double x, double y, const std::string& s, int size = 12,
            const std::string& anchor = "start") {
    os << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
       << size << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
       << "\">" << s << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2,
            const std::string& color, double width = 1.0) {
    os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
       << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << color
       << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }
  void circle(double x, double y, double r, const std::string& color) {
    os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\""
       << num(r) << "\" fill=\"" << color << "\"/>\n";
  }
  void square(double x, double y, double r, const std::string& color) {
    os << "<rect x=\"" << num(x - r) << "\" y=\"" << num(y - r) << "\" width=\""
       << num(2 * r) << "\" height=\"" << num(2 * r) << "\" fill=\"" << color
       << "\"/>\n";
  }
  void triangle(double x, double y, double r, const std::string& color) {
    os << "<polygon points=\"" << num(x) << "," << num(y - r) << " "
       << num(x - r) << "," << num(y + r) << " " << num(x + r) << ","
       << num(y + r) << "\" fill=\"" << color << "\"/>\n";
  }
  void marker(SensorKind k, double x, double y, double r,
              const std::string& color) {
    switch (k) {
      case SensorKind::MODIS: return circle(x, y, r, color);
      case SensorKind::VIIRS: return square(x, y, r, color);
      case SensorKind::SAR: return triangle(x, y, r + 1, color);
    }
  }
};

}  // namespace

void write_timeseries_svg(const std::filesystem::path& file,
                          const TimeseriesPlot& plot) {
  if (plot.reference.points.empty() && plot.predictions.empty())
    throw DataError("timeseries plot: no input data");
  const double span =
      std::max<std::int64_t>(1, plot.axis_end - plot.axis_start);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](Date d) {
    return kMarginLeft + plot_w * static_cast<double>(d - plot.axis_start) / span;
  };
  auto sy = [&](double f) { return kMarginTop + plot_h * (1.0 - f); };

  SvgFile svg(file, kWidth, kHeight);
  svg.text(kWidth / 2.0, 22, plot.title, 15, "middle");

  // frame + y ticks
  svg.line(kMarginLeft, kMarginTop, kMarginLeft, kMarginTop + plot_h, "#000");
  svg.line(kMarginLeft, kMarginTop + plot_h, kMarginLeft + plot_w,
           kMarginTop + plot_h, "#000");
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    svg.line(kMarginLeft - 4, sy(f), kMarginLeft, sy(f), "#000");
    svg.text(kMarginLeft - 8, sy(f) + 4, num(f), 11, "end");
  }
  svg.text(16, kMarginTop + plot_h / 2, "water fraction", 12, "middle");

  // month ticks on the first day of each month inside the window
  for (Date d = plot.axis_start; !(plot.axis_end < d); d = d + 1) {
    if (d.day() != 1) continue;
    svg.line(sx(d), kMarginTop + plot_h, sx(d), kMarginTop + plot_h + 5, "#000");
    svg.text(sx(d), kMarginTop + plot_h + 18, kMonthNames[d.month() - 1], 11,
             "middle");
  }

  // reference polyline
  if (!plot.reference.points.empty()) {
    svg.os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (const auto& [d, f] : plot.reference.points)
      svg.os << num(sx(d)) << "," << num(sy(f)) << " ";
    svg.os << "\"/>\n";
  }

  for (const auto& p : plot.predictions) {
    const double v = plot.use_ensemble_mean && p.has_ensemble ? p.ensemble_mean
                                                              : p.fused;
    svg.circle(sx(p.date), sy(std::clamp(v, 0.0, 1.0)), 3.0,
               kMonthColors[p.date.month() - 1]);
  }
}

void write_timeseries_csv(const std::filesystem::path& file,
                          const TimeseriesPlot& plot) {
  std::ofstream os(file);
  if (!os) throw DataError("cannot write table " + file.string());
  os << "date,reference,prediction\n";
  std::map<std::int64_t, double> ref;
  for (const auto& [d, f] : plot.reference.points) ref[d.serial()] = f;
  std::map<std::int64_t, double> pred;
  for (const auto& p : plot.predictions)
    pred[p.date.serial()] =
        plot.use_ensemble_mean && p.has_ensemble ? p.ensemble_mean : p.fused;
  std::set<std::int64_t> days;
  for (const auto& [d, f] : ref) days.insert(d);
  for (const auto& [d, f] : pred) days.insert(d);
  char buf[64];
  for (auto d : days) {
    os << Date(d).to_iso() << ",";
    if (auto it = ref.find(d); it != ref.end()) {
      std::snprintf(buf, sizeof(buf), "%.6f", it->second);
      os << buf;
    }
    os << ",";
    if (auto it = pred.find(d); it != pred.end()) {
      std::snprintf(buf, sizeof(buf), "%.6f", it->second);
      os << buf;
    }
    os << "\n";
  }
}

void write_embedding_svg(const std::filesystem::path& file,
                         const EmbeddingPlot& plot) {
  if (plot.points.empty()) throw DataError("embedding plot: no input data");
  const int size = 560;
  const double margin = 45;

  // orthographic projection for 3-D input
  auto project = [&](const EmbeddingPoint& p, double& px, double& py) {
    if (plot.dims == 2) {
      px = p.x;
      py = p.y;
    } else {
      const double c = 0.5 * std::sqrt(2.0);
      px = p.x + c * 0.45 * p.z;
      py = p.y + c * 0.30 * p.z;
    }
  };

  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const auto& p : plot.points) {
    double px, py;
    project(p, px, py);
    min_x = std::min(min_x, px);
    max_x = std::max(max_x, px);
    min_y = std::min(min_y, py);
    max_y = std::max(max_y, py);
  }
  const double sx = (size - 2 * margin) / std::max(1e-12, max_x - min_x);
  const double sy = (size - 2 * margin) / std::max(1e-12, max_y - min_y);

  SvgFile svg(file, size, size);
  svg.text(size / 2.0, 24, plot.title, 14, "middle");
  svg.text(size / 2.0, size - 8.0,
           "perplexity " + num(plot.perplexity) + ", " +
               std::to_string(plot.iterations) + " iterations, dim " +
               std::to_string(plot.dims),
           10, "middle");
  for (const auto& p : plot.points) {
    double px, py;
    project(p, px, py);
    svg.marker(p.sensor, margin + (px - min_x) * sx,
               size - margin - (py - min_y) * sy, 3.0,
               fraction_color(p.water_fraction));
  }
}

void write_embedding_csv(const std::filesystem::path& file,
                         const EmbeddingPlot& plot) {
  std::ofstream os(file);
  if (!os) throw DataError("cannot write table " + file.string());
  os << "date,sensor,water_fraction,x,y" << (plot.dims == 3 ? ",z" : "")
     << "\n";
  char buf[160];
  for (const auto& p : plot.points) {
    if (plot.dims == 3)
      std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f",
                    p.date.to_iso().c_str(), to_string(p.sensor).c_str(),
                    p.water_fraction, p.x, p.y, p.z);
    else
      std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f",
                    p.date.to_iso().c_str(), to_string(p.sensor).c_str(),
                    p.water_fraction, p.x, p.y);
    os << buf << "\n";
  }
}

}  // namespace lakeice
