#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "lakeice/core/date.hpp"
#include "lakeice/data/calendar.hpp"
#include "lakeice/data/geometry.hpp"
#include "lakeice/data/observation.hpp"
#include "lakeice/data/synthetic.hpp"

using namespace lakeice;

TEST_CASE("date round trips and arithmetic") {
  const Date d(2016, 9, 7);
  CHECK(d.to_iso() == "2016-09-07");
  CHECK(Date::parse_iso("2016-09-07") == d);
  CHECK((Date(2017, 1, 1) - Date(2016, 12, 31)) == 1);
  CHECK((d + 30).to_iso() == "2016-10-07");
  CHECK(Date(2016, 2, 29).to_iso() == "2016-02-29");  // leap year
  CHECK_THROWS_AS(Date::parse_iso("not a date"), std::invalid_argument);
}

// Exhaustive corner-containment oracle for the clean-pixel mask.
static bool oracle_clean(const Polygon& poly, const GridSpec& g, int y, int x) {
  const double x0 = g.origin_x + x * g.cell, y0 = g.origin_y + y * g.cell;
  const double x1 = x0 + g.cell, y1 = y0 + g.cell;
  for (auto [px, py] : {std::pair{x0, y0}, {x1, y0}, {x0, y1}, {x1, y1},
                        {(x0 + x1) / 2, (y0 + y1) / 2}})
    if (!point_in_polygon(poly, px, py)) return false;
  return true;
}

TEST_CASE("clean pixel mask") {
  GridSpec grid{4, 5, 0, 0, 1.0};

  SUBCASE("axis-aligned rectangle (0,0)-(3.5,2.5) has exactly 3x2 clean pixels") {
    Polygon rect{{0, 0}, {3.5, 0}, {3.5, 2.5}, {0, 2.5}};
    Mask m = build_clean_pixel_mask(rect, grid);
    CHECK(m.count() == 6);
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 3; ++x) CHECK(m.at(y, x));
    CHECK_FALSE(m.at(2, 0));
    CHECK_FALSE(m.at(0, 3));
  }

  SUBCASE("polygon covering the grid with margin marks all pixels clean") {
    Polygon big{{-2, -2}, {12, -2}, {12, 12}, {-2, 12}};
    Mask m = build_clean_pixel_mask(big, grid);
    CHECK(m.count() == grid.height * grid.width);
  }

  SUBCASE("pixel straddling the boundary is not clean") {
    Polygon tri{{0.5, 0.2}, {3.2, 0.4}, {1.8, 3.4}};
    Mask m = build_clean_pixel_mask(tri, grid);
    // pixel (0,0) has its corner (0,0) outside the triangle
    CHECK_FALSE(m.at(0, 0));
  }

  SUBCASE("degenerate polygon is rejected") {
    Polygon line{{0, 0}, {3, 0}, {6, 0}};
    CHECK_THROWS_AS(build_clean_pixel_mask(line, grid), DataError);
  }

  SUBCASE("matches the exhaustive containment oracle on random polygons") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
      // random triangle/quad, retried until non-degenerate
      Polygon poly;
      do {
        poly.clear();
        const int nv = 3 + static_cast<int>(u(rng)) % 2;
        for (int v = 0; v < nv; ++v) poly.push_back({u(rng), u(rng)});
      } while (polygon_area(poly) < 0.5);
      Mask m;
      try {
        m = build_clean_pixel_mask(poly, grid);
      } catch (const DataError&) {
        continue;
      }
      for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x)
          CHECK(m.at(y, x) == oracle_clean(poly, grid, y, x));
    }
  }

  SUBCASE("count invariant under vertex rotation and integer translation") {
    Polygon poly{{0.7, 0.3}, {3.4, 0.9}, {4.2, 2.8}, {1.1, 3.1}};
    const int base = build_clean_pixel_mask(poly, grid).count();
    for (std::size_t shift = 1; shift < poly.size(); ++shift) {
      Polygon rotated(poly.begin() + shift, poly.end());
      rotated.insert(rotated.end(), poly.begin(), poly.begin() + shift);
      CHECK(build_clean_pixel_mask(rotated, grid).count() == base);
    }
    GridSpec wide{8, 9, 0, 0, 1.0};
    Polygon shifted;
    for (auto p : poly) shifted.push_back({p.x + 2, p.y + 3});
    const int in_wide = build_clean_pixel_mask(poly, wide).count();
    CHECK(build_clean_pixel_mask(shifted, wide).count() == in_wide);
  }
}

TEST_CASE("pad_to_patch") {
  Mask clean(12, 12);
  const SensorTraits t = traits(SensorKind::VIIRS);

  SUBCASE("no clean pixels is an error") {
    CleanPixelValues input;
    input.clean = &clean;
    input.values.resize(0, t.channels);
    CHECK_THROWS_WITH_AS(
        pad_to_patch(input, SensorKind::VIIRS, Date(2017, 1, 1), "x"),
        "no clean pixels", DataError);
  }

  SUBCASE("four clean pixels give a patch with four valid cells") {
    clean.set(5, 5, true);
    clean.set(5, 6, true);
    clean.set(6, 5, true);
    clean.set(6, 6, true);
    CleanPixelValues input;
    input.clean = &clean;
    input.values = MatX<float>::Constant(4, t.channels, 0.5f);
    auto obs = pad_to_patch(input, SensorKind::VIIRS, Date(2017, 1, 1), "x");
    CHECK(obs.valid.count() == 4);
    CHECK(obs.cloud_free_fraction == 1.0);
    CHECK(obs.values.at(5, 5, 0) == 0.5f);
    CHECK(obs.values.at(0, 0, 0) == 0.0f);  // background fill
  }

  SUBCASE("full clean grid round-trips values and marks everything valid") {
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x) clean.set(y, x, true);
    CleanPixelValues input;
    input.clean = &clean;
    input.values = MatX<float>::Ones(144, t.channels);
    auto obs = pad_to_patch(input, SensorKind::VIIRS, Date(2017, 1, 1), "x");
    CHECK(obs.valid.count() == 144);
    CHECK(obs.values.values.isApproxToConstant(1.0f));
  }

  SUBCASE("valid-cell readback is the identity on input values") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> u(0, 1);
    clean.set(2, 3, true);
    clean.set(2, 4, true);
    clean.set(7, 1, true);
    CleanPixelValues input;
    input.clean = &clean;
    input.values.resize(3, t.channels);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < t.channels; ++c) input.values(r, c) = u(rng);
    auto obs = pad_to_patch(input, SensorKind::VIIRS, Date(2017, 1, 1), "x");
    int row = 0;
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x) {
        if (!clean.at(y, x)) continue;
        for (int c = 0; c < t.channels; ++c)
          CHECK(obs.values.at(y, x, c) == input.values(row, c));
        ++row;
      }
  }
}

TEST_CASE("cloud fraction filter") {
  SensorObservation obs;
  obs.sensor = SensorKind::MODIS;
  obs.cloud_free_fraction = 0.31;
  CHECK(filter_by_cloud_fraction(obs));
  obs.cloud_free_fraction = 0.30;  // strict inequality
  CHECK_FALSE(filter_by_cloud_fraction(obs));
  obs.sensor = SensorKind::SAR;
  obs.cloud_free_fraction = 0.0;
  CHECK(filter_by_cloud_fraction(obs));
}

// Brute-force oracle: mean of consecutive gaps over the deduplicated union.
static double oracle_etr(std::vector<Date> dates) {
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  REQUIRE(dates.size() >= 2);
  double sum = 0;
  for (std::size_t i = 1; i < dates.size(); ++i) sum += dates[i] - dates[i - 1];
  return sum / static_cast<double>(dates.size() - 1);
}

TEST_CASE("effective temporal resolution") {
  AcquisitionCalendar cal;
  cal.season_start = Date(2017, 1, 1);
  cal.season_end = Date(2017, 1, 31);

  SUBCASE("worked example: union beats each sensor alone") {
    cal.add(SensorKind::MODIS, Date(2017, 1, 1));
    cal.add(SensorKind::MODIS, Date(2017, 1, 7));
    cal.add(SensorKind::VIIRS, Date(2017, 1, 4));
    cal.add(SensorKind::VIIRS, Date(2017, 1, 7));
    CHECK(effective_temporal_resolution(cal, {SensorKind::MODIS}) == 6.0);
    CHECK(effective_temporal_resolution(
              cal, {SensorKind::MODIS, SensorKind::VIIRS}) == 3.0);
  }

  SUBCASE("daily acquisitions give 1.0") {
    for (int d = 0; d < 10; ++d) cal.add(SensorKind::SAR, Date(2017, 1, 1) + d);
    CHECK(effective_temporal_resolution(cal, {SensorKind::SAR}) == 1.0);
  }

  SUBCASE("same-day acquisitions by two sensors count once") {
    cal.add(SensorKind::MODIS, Date(2017, 1, 1));
    cal.add(SensorKind::MODIS, Date(2017, 1, 5));
    cal.add(SensorKind::VIIRS, Date(2017, 1, 1));
    cal.add(SensorKind::VIIRS, Date(2017, 1, 5));
    CHECK(effective_temporal_resolution(
              cal, {SensorKind::MODIS, SensorKind::VIIRS}) == 4.0);
  }

  SUBCASE("fewer than two distinct dates is an error") {
    cal.add(SensorKind::MODIS, Date(2017, 1, 1));
    CHECK_THROWS_AS(effective_temporal_resolution(cal, {SensorKind::MODIS}),
                    DataError);
  }

  SUBCASE("matches brute-force oracle; union never worse than any sensor") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> day(0, 60);
    for (int trial = 0; trial < 300; ++trial) {
      AcquisitionCalendar c;
      c.season_start = Date(2017, 1, 1);
      c.season_end = Date(2017, 3, 2);
      std::vector<Date> all;
      std::vector<double> singles;
      for (SensorKind k : kAllSensors) {
        std::set<int> days;
        const int n = 2 + day(rng) % 10;
        while (static_cast<int>(days.size()) < n) days.insert(day(rng));
        for (int d : days) c.add(k, c.season_start + d);
        std::vector<Date> mine;
        for (int d : days) mine.push_back(c.season_start + d);
        singles.push_back(oracle_etr(mine));
        CHECK(effective_temporal_resolution(c, {k}) ==
              doctest::Approx(singles.back()).epsilon(1e-12));
        all.insert(all.end(), mine.begin(), mine.end());
      }
      const double merged = effective_temporal_resolution(
          c, {SensorKind::MODIS, SensorKind::VIIRS, SensorKind::SAR});
      CHECK(merged == doctest::Approx(oracle_etr(all)).epsilon(1e-12));
      for (double s : singles) CHECK(merged <= s + 1e-12);
    }
  }
}

TEST_CASE("synthetic season generator") {
  SyntheticSeasonConfig cfg;
  cfg.seed = 99;
  cfg.lake_id = "sils";
  cfg.season_start = Date(2016, 12, 1);
  cfg.season_end = Date(2017, 3, 10);
  cfg.freeze_center = Date(2017, 1, 10);
  cfg.breakup_center = Date(2017, 2, 20);
  cfg.modis_cloud_prob = 0.0;
  cfg.viirs_cloud_prob = 0.0;
  cfg.sar_revisit = 1;

  SUBCASE("no clouds and daily revisit give one observation per sensor per day") {
    auto lw = generate_synthetic_season(cfg);
    const int days = static_cast<int>(cfg.season_end - cfg.season_start) + 1;
    CHECK(static_cast<int>(lw.observations.size()) == 3 * days);
  }

  SUBCASE("deterministic given the seed") {
    auto a = generate_synthetic_season(cfg);
    auto b = generate_synthetic_season(cfg);
    REQUIRE(a.observations.size() == b.observations.size());
    for (std::size_t i = 0; i < a.observations.size(); ++i) {
      CHECK(a.observations[i].date == b.observations[i].date);
      CHECK(a.observations[i].values.values == b.observations[i].values.values);
    }
    for (const auto& [d, l] : a.labels)
      CHECK(l.water_fraction == b.labels.at(d).water_fraction);
  }

  SUBCASE("water fraction stays in [0,1]; mid-winter is fully frozen") {
    auto lw = generate_synthetic_season(cfg);
    for (const auto& [d, l] : lw.labels) {
      CHECK(l.water_fraction >= 0.0);
      CHECK(l.water_fraction <= 1.0);
    }
    const auto& midwinter = lw.labels.at(Date(2017, 2, 1));
    CHECK(midwinter.water_fraction == 0.0);
    CHECK_FALSE(midwinter.is_transition);
    REQUIRE(midwinter.per_pixel.has_value());
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x)
        if (lw.geometry.clean_optical.at(y, x))
          CHECK(midwinter.per_pixel->at(y, x) == PixelClass::Frozen);
  }

  SUBCASE("per-pixel labels exist only on non-transition days") {
    auto lw = generate_synthetic_season(cfg);
    for (const auto& [d, l] : lw.labels) {
      if (l.is_transition) {
        CHECK_FALSE(l.per_pixel.has_value());
        CHECK(l.water_fraction > 0.0);
        CHECK(l.water_fraction < 1.0);
      } else {
        CHECK((l.water_fraction == 0.0 || l.water_fraction == 1.0));
      }
    }
  }

  SUBCASE("steep sigmoid puts the true ice-on next to the freeze-up center") {
    cfg.freeze_steepness = 0.5;
    cfg.breakup_steepness = 0.5;
    // oracle: evaluate the generating curve directly
    Date cross = cfg.season_start;
    for (Date d = cfg.season_start; !(cfg.season_end < d); d = d + 1)
      if (synthetic_true_fraction(cfg, d) < 0.3) {
        cross = d;
        break;
      }
    CHECK(std::llabs(cross - cfg.freeze_center) <= 1);
  }

  SUBCASE("invalid configs are rejected") {
    auto bad = cfg;
    bad.freeze_center = Date(2017, 3, 1);
    bad.breakup_center = Date(2017, 1, 1);
    CHECK_THROWS_AS(generate_synthetic_season(bad), ConfigError);
    bad = cfg;
    bad.modis_cloud_prob = 1.5;
    CHECK_THROWS_AS(generate_synthetic_season(bad), ConfigError);
  }
}
