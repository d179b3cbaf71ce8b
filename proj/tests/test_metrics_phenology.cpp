#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lakeice/eval/metrics.hpp"
#include "lakeice/eval/phenology.hpp"

using namespace lakeice;

TEST_CASE("mean pixel accuracy") {
  ConfusionMatrix cm;

  SUBCASE("diagonal-only is 100%") {
    cm.add(PixelClass::Frozen, PixelClass::Frozen, 10);
    cm.add(PixelClass::NonFrozen, PixelClass::NonFrozen, 5);
    CHECK(mean_pixel_accuracy(cm) == 100.0);
  }

  SUBCASE("toy matrix matches the direct count") {
    // 3 classes, 2 errors of each kind off the diagonal of 10s
    for (int c = 0; c < 3; ++c)
      cm.add(static_cast<PixelClass>(c), static_cast<PixelClass>(c), 10);
    cm.add(PixelClass::Frozen, PixelClass::NonFrozen, 2);
    cm.add(PixelClass::NonFrozen, PixelClass::Background, 2);
    cm.add(PixelClass::Background, PixelClass::Frozen, 2);
    CHECK(mean_pixel_accuracy(cm) == doctest::Approx(100.0 * 30.0 / 36.0));
  }

  SUBCASE("empty matrix is an error") {
    CHECK_THROWS_AS(mean_pixel_accuracy(cm), DataError);
  }
}

TEST_CASE("mean IoU") {
  SUBCASE("perfect prediction is 100%") {
    ConfusionMatrix cm;
    cm.add(PixelClass::Frozen, PixelClass::Frozen, 7);
    cm.add(PixelClass::Background, PixelClass::Background, 3);
    CHECK(mean_iou(cm) == 100.0);
  }

  SUBCASE("labels [A,A,B,B] preds [A,B,B,A] gives 33.3%") {
    ConfusionMatrix cm;
    cm.add(PixelClass::Frozen, PixelClass::Frozen);
    cm.add(PixelClass::Frozen, PixelClass::NonFrozen);
    cm.add(PixelClass::NonFrozen, PixelClass::NonFrozen);
    cm.add(PixelClass::NonFrozen, PixelClass::Frozen);
    CHECK(mean_iou(cm) == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  }

  SUBCASE("absent classes are excluded from the average") {
    ConfusionMatrix cm;
    cm.add(PixelClass::Frozen, PixelClass::Frozen, 8);
    cm.add(PixelClass::Frozen, PixelClass::Background, 2);
    // NonFrozen and Background never appear in the labels
    CHECK(mean_iou(cm) == doctest::Approx(80.0));
  }

  SUBCASE("random 12x12 maps match a brute-force per-class oracle") {
    std::mt19937 rng(51);
    std::uniform_int_distribution<int> cls(0, 2);
    for (int trial = 0; trial < 100; ++trial) {
      LabelGrid truth(12, 12), pred(12, 12);
      std::vector<std::uint8_t> sup(144);
      for (int p = 0; p < 144; ++p) {
        truth.classes[p] = static_cast<std::uint8_t>(cls(rng));
        pred.classes[p] = static_cast<std::uint8_t>(cls(rng));
        sup[p] = cls(rng) > 0 ? 1 : 0;
      }
      ConfusionMatrix cm;
      cm.accumulate(truth, pred, sup);

      double iou_sum = 0;
      int present = 0;
      for (int c = 0; c < 3; ++c) {
        long tp = 0, fp = 0, fn = 0, in_labels = 0;
        for (int p = 0; p < 144; ++p) {
          if (!sup[p]) continue;
          const bool t = truth.classes[p] == c;
          const bool q = pred.classes[p] == c;
          in_labels += t;
          tp += t && q;
          fp += !t && q;
          fn += t && !q;
        }
        if (in_labels == 0) continue;
        iou_sum += static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
        ++present;
      }
      if (present == 0) continue;
      CHECK(std::abs(mean_iou(cm) - 100.0 * iou_sum / present) < 1e-12);
      // both metrics stay inside [0, 100]
      CHECK(mean_pixel_accuracy(cm) >= 0.0);
      CHECK(mean_pixel_accuracy(cm) <= 100.0);
      CHECK(mean_iou(cm) >= 0.0);
      CHECK(mean_iou(cm) <= 100.0);
    }
  }
}

namespace {

WaterFractionSeries series_of(std::vector<double> fractions,
                              Date start = Date(2017, 1, 1), int step = 1) {
  WaterFractionSeries s;
  s.lake_id = "sihl";
  Date d = start;
  for (double f : fractions) {
    s.add(d, f);
    d = d + step;
  }
  return s;
}

// Independent oracle: direct scan per the persistence definitions.
std::pair<std::optional<Date>, std::optional<Date>> oracle_events(
    const WaterFractionSeries& s, double tau) {
  std::optional<Date> on, off;
  const auto& p = s.points;
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (p[i].second < tau && p[i + 1].second < tau) {
      on = p[i].first;
      break;
    }
  if (on)
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (!(*on < p[i].first)) continue;
      if (p[i].second > tau && p[i + 1].second > tau) {
        off = p[i].first;
        break;
      }
    }
  return {on, off};
}

}  // namespace

TEST_CASE("extract_ice_dates") {
  SUBCASE("worked example at thresholds 0.3 and 0.1") {
    auto s = series_of({1, 0.8, 0.25, 0.05, 0.0, 0.0, 0.4, 0.7});
    auto ev3 = extract_ice_dates(s, 0.3);
    REQUIRE(ev3.ice_on.has_value());
    REQUIRE(ev3.ice_off.has_value());
    CHECK(*ev3.ice_on == Date(2017, 1, 3));
    CHECK(*ev3.ice_off == Date(2017, 1, 7));

    auto ev1 = extract_ice_dates(s, 0.1);
    CHECK(*ev1.ice_on == Date(2017, 1, 4));
    CHECK(*ev1.ice_off == Date(2017, 1, 7));
  }

  SUBCASE("all-open-water series has no events") {
    auto ev = extract_ice_dates(series_of({1, 0.9, 0.95, 1, 0.85}), 0.3);
    CHECK_FALSE(ev.ice_on.has_value());
    CHECK_FALSE(ev.ice_off.has_value());
  }

  SUBCASE("single dip without persistence is ignored") {
    auto ev = extract_ice_dates(series_of({1, 0.2, 0.9, 1, 1}), 0.3);
    CHECK_FALSE(ev.ice_on.has_value());
  }

  SUBCASE("re-freeze produces candidates in chronological order") {
    auto s = series_of({1, 0.1, 0.05, 0.6, 0.7, 0.1, 0.08, 0.9, 0.9});
    auto ev = extract_ice_dates(s, 0.3);
    REQUIRE(ev.ice_on_candidates.size() == 2);
    CHECK(ev.ice_on_candidates[0] == Date(2017, 1, 2));
    CHECK(ev.ice_on_candidates[1] == Date(2017, 1, 6));
    CHECK(*ev.ice_on == Date(2017, 1, 2));
    REQUIRE(ev.ice_off_candidates.size() == 2);
    CHECK(ev.ice_off_candidates[0] == Date(2017, 1, 4));
  }

  SUBCASE("duplicate observations with identical date/fraction are ignored") {
    auto s = series_of({1, 0.8, 0.25, 0.05, 0.0, 0.0, 0.4, 0.7});
    WaterFractionSeries dup = s;
    dup.add(s.points[3].first, s.points[3].second);  // same date, same value
    auto a = extract_ice_dates(s, 0.3);
    auto b = extract_ice_dates(dup, 0.3);
    CHECK(a.ice_on == b.ice_on);
    CHECK(a.ice_off == b.ice_off);
    // a conflicting fraction on an existing date stays an error
    CHECK_THROWS_AS(dup.add(s.points[3].first, 0.9), DataError);
  }

  SUBCASE("fewer than two observations is an error") {
    CHECK_THROWS_AS(extract_ice_dates(series_of({0.5}), 0.3), DataError);
  }

  SUBCASE("matches the scan oracle on randomized persistence scenarios") {
    std::mt19937 rng(52);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> len(2, 30);
    std::uniform_int_distribution<int> gap(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
      WaterFractionSeries s;
      s.lake_id = "x";
      Date d(2017, 1, 1);
      const int n = len(rng);
      for (int i = 0; i < n; ++i) {
        s.add(d, u(rng));
        d = d + gap(rng);  // gappy series, "next available observation"
      }
      const double tau = 0.1 + 0.5 * u(rng);
      auto ev = extract_ice_dates(s, tau);
      auto [on, off] = oracle_events(s, tau);
      CHECK(ev.ice_on == on);
      CHECK(ev.ice_off == off);
    }
  }

  SUBCASE("threshold monotonicity on monotone-then-monotone series") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
      // decreasing to near 0, then increasing back up
      std::vector<double> f;
      double v = 0.9 + 0.1 * u(rng);
      while (v > 0.02) {
        f.push_back(v);
        v -= 0.05 + 0.2 * u(rng);
      }
      f.push_back(0.0);
      v = 0.0;
      while (v < 0.95) {
        v += 0.05 + 0.2 * u(rng);
        f.push_back(std::min(v, 1.0));
      }
      auto s = series_of(f);
      const double t1 = 0.1 + 0.3 * u(rng);
      const double t2 = t1 + 0.1 + 0.3 * u(rng);
      auto e1 = extract_ice_dates(s, t1);
      auto e2 = extract_ice_dates(s, t2);
      if (e1.ice_on && e2.ice_on) CHECK(!(*e1.ice_on < *e2.ice_on));
      if (e1.ice_off && e2.ice_off) CHECK(!(*e2.ice_off < *e1.ice_off));
    }
  }
}

TEST_CASE("compare_event") {
  SUBCASE("prediction Jan 3 vs reference Jan 1 is +2, GCOS pass") {
    auto c = compare_event(Date(2017, 1, 3),
                           DateRange{Date(2017, 1, 1), Date(2017, 1, 1)});
    CHECK(c.offset_days == 2);
    CHECK(c.gcos_pass);
  }

  SUBCASE("prediction inside a reference range is offset 0") {
    auto c = compare_event(Date(2016, 12, 16),
                           DateRange{Date(2016, 12, 15), Date(2016, 12, 17)});
    CHECK(c.offset_days == 0);
    CHECK(c.gcos_pass);
  }

  SUBCASE("prediction Jan 17 vs reference 15-17 Dec is +31, fail") {
    auto c = compare_event(Date(2017, 1, 17),
                           DateRange{Date(2016, 12, 15), Date(2016, 12, 17)});
    CHECK(c.offset_days == 31);
    CHECK_FALSE(c.gcos_pass);
  }

  SUBCASE("early predictions carry a negative offset") {
    auto c = compare_event(Date(2017, 1, 1),
                           DateRange{Date(2017, 1, 4), Date(2017, 1, 5)});
    CHECK(c.offset_days == -3);
    CHECK_FALSE(c.gcos_pass);
  }

  SUBCASE("missing events are reported as not detected") {
    auto c = compare_event(std::nullopt,
                           DateRange{Date(2017, 1, 1), Date(2017, 1, 1)});
    CHECK_FALSE(c.detected);
    CHECK_FALSE(c.gcos_pass);
  }
}
