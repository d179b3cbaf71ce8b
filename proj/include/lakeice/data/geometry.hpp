#pragma once

#include <string>
#include <vector>

#include "lakeice/core/grid.hpp"

namespace lakeice {

struct Point2 {
  double x = 0;
  double y = 0;
};

// Simple (non-self-intersecting) polygon, vertices in lake-grid units.
using Polygon = std::vector<Point2>;

double polygon_area(const Polygon& poly);

// Boundary points count as inside; the clean-pixel test below relies on it.
bool point_in_polygon(const Polygon& poly, double x, double y);

// Uniform pixel grid. Pixel (row,col) covers the square
// [origin_x + col*cell, +cell] x [origin_y + row*cell, +cell].
struct GridSpec {
  int height = 0;
  int width = 0;
  double origin_x = 0;
  double origin_y = 0;
  double cell = 1.0;
};

// A pixel is clean iff its four corners and its center lie inside the
// polygon (pixels that fall completely inside the lake boundary).
Mask build_clean_pixel_mask(const Polygon& poly, const GridSpec& grid);

struct LakeGeometry {
  std::string lake_id;
  Polygon outline;        // in optical-grid units
  GridSpec optical_grid;  // canonical lake grid (12x12 for real sensors)
  GridSpec sar_grid;      // same extent at SAR resolution
  Mask clean_optical;
  Mask clean_sar;
};

// Derives both per-sensor clean masks from the outline.
LakeGeometry make_lake_geometry(std::string lake_id, Polygon outline,
                                GridSpec optical_grid, GridSpec sar_grid);

}  // namespace lakeice
