#include "lakeice/data/geometry.hpp"

#include <cmath>

namespace lakeice {
namespace {

constexpr double kTol = 1e-12;

bool on_segment(const Point2& a, const Point2& b, double x, double y) {
  const double cross = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
  const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
  if (cross * cross > kTol * (len2 > 1.0 ? len2 : 1.0)) return false;
  const double dot = (x - a.x) * (b.x - a.x) + (y - a.y) * (b.y - a.y);
  return dot >= -kTol && dot <= len2 + kTol;
}

}  // namespace

double polygon_area(const Polygon& poly) {
  double twice = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

bool point_in_polygon(const Polygon& poly, double x, double y) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(poly[i], poly[(i + 1) % n], x, y)) return true;

  // Even-odd ray crossing, ray towards +x.
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > y) != (b.y > y)) {
      const double xint = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (x < xint) inside = !inside;
    }
  }
  return inside;
}

Mask build_clean_pixel_mask(const Polygon& poly, const GridSpec& grid) {
  if (poly.size() < 3 || polygon_area(poly) <= kTol)
    throw DataError("empty lake geometry");
  if (grid.height <= 0 || grid.width <= 0)
    throw DataError("build_clean_pixel_mask: empty grid");

  Mask mask(grid.height, grid.width);
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      const double x0 = grid.origin_x + x * grid.cell;
      const double y0 = grid.origin_y + y * grid.cell;
      const double x1 = x0 + grid.cell;
      const double y1 = y0 + grid.cell;
      const bool clean = point_in_polygon(poly, x0, y0) &&
                         point_in_polygon(poly, x1, y0) &&
                         point_in_polygon(poly, x0, y1) &&
                         point_in_polygon(poly, x1, y1) &&
                         point_in_polygon(poly, (x0 + x1) / 2, (y0 + y1) / 2);
      mask.set(y, x, clean);
    }
  }
  return mask;
}

LakeGeometry make_lake_geometry(std::string lake_id, Polygon outline,
                                GridSpec optical_grid, GridSpec sar_grid) {
  LakeGeometry g;
  g.lake_id = std::move(lake_id);
  g.outline = std::move(outline);
  g.optical_grid = optical_grid;
  g.sar_grid = sar_grid;
  g.clean_optical = build_clean_pixel_mask(g.outline, optical_grid);
  g.clean_sar = build_clean_pixel_mask(g.outline, sar_grid);
  return g;
}

}  // namespace lakeice
