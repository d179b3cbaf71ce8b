#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "lakeice/nn/regression_net.hpp"
#include "lakeice/pipeline/window.hpp"

using namespace lakeice;

namespace {

Embedding make_emb(Date d, SensorKind k, float fill, int size = 4, int ch = 4) {
  Embedding e;
  e.date = d;
  e.sensor = k;
  e.values = GridTensor<float>(size, size, ch);
  e.values.values.setConstant(fill);
  return e;
}

// scan oracle: nearest date, ties to the earlier one
Date nearest_date_oracle(const std::vector<Date>& dates, Date nominal) {
  Date best = dates.front();
  for (Date d : dates) {
    const auto dist = std::llabs(d - nominal);
    const auto best_dist = std::llabs(best - nominal);
    if (dist < best_dist || (dist == best_dist && d < best)) best = d;
  }
  return best;
}

}  // namespace

TEST_CASE("build_window") {
  const Date base(2017, 1, 10);
  EmbeddingSeries series;

  SUBCASE("empty series is an error") {
    CHECK_THROWS_AS(build_window(series, base), DataError);
  }

  SUBCASE("dense daily series fills every slot exactly, no gap flags") {
    for (int d = -5; d <= 5; ++d)
      series.add(make_emb(base + d, SensorKind::MODIS, static_cast<float>(d)));
    EmbeddingWindow w = build_window(series, base, 7);
    REQUIRE(w.slots.size() == 7);
    for (int i = 0; i < 7; ++i) {
      CHECK(w.slots[i].nominal_offset == i - 3);
      CHECK(series.items[w.slots[i].series_index].date == base + (i - 3));
      CHECK_FALSE(w.slots[i].gap_filled);
    }
  }

  SUBCASE("center at series start borrows later days, flagged") {
    for (int d = 0; d <= 5; ++d)
      series.add(make_emb(base + d, SensorKind::MODIS, static_cast<float>(d)));
    EmbeddingWindow w = build_window(series, base, 7);
    for (int i = 0; i < 3; ++i) {
      CHECK(series.items[w.slots[i].series_index].date == base);
      CHECK(w.slots[i].gap_filled);
    }
    CHECK_FALSE(w.slots[3].gap_filled);
  }

  SUBCASE("cloud gaps borrow the nearest neighbour (scan oracle)") {
    std::vector<Date> dates;
    for (int d : {-6, -4, -1, 0, 2, 5, 6}) {
      dates.push_back(base + d);
      series.add(make_emb(base + d, SensorKind::MODIS, static_cast<float>(d)));
    }
    EmbeddingWindow w = build_window(series, base, 7);
    REQUIRE(w.slots.size() == 7);
    for (const auto& slot : w.slots) {
      const Date nominal = base + slot.nominal_offset;
      const Date got = series.items[slot.series_index].date;
      CHECK(got == nearest_date_oracle(dates, nominal));
      CHECK(slot.gap_filled == (got != nominal));
    }
  }

  SUBCASE("same-day duplicates resolve by SAR > VIIRS > MODIS") {
    series.add(make_emb(base, SensorKind::MODIS, 1));
    series.add(make_emb(base, SensorKind::SAR, 2));
    series.add(make_emb(base, SensorKind::VIIRS, 3));
    series.add(make_emb(base + 1, SensorKind::MODIS, 4));
    EmbeddingWindow w = build_window(series, base, 3);
    CHECK(series.items[w.slots[1].series_index].sensor == SensorKind::SAR);

    SUBCASE("pinning overrides the center slot only") {
      int modis_idx = -1;
      for (int i = 0; i < 4; ++i)
        if (series.items[i].sensor == SensorKind::MODIS &&
            series.items[i].date == base)
          modis_idx = i;
      EmbeddingWindow pinned = build_window_pinned(series, modis_idx, 3);
      CHECK(series.items[pinned.slots[1].series_index].sensor == SensorKind::MODIS);
      CHECK(series.items[pinned.slots[0].series_index].sensor == SensorKind::SAR);
    }
  }

  SUBCASE("window construction is total on gappy series") {
    series.add(make_emb(base, SensorKind::MODIS, 0));
    EmbeddingWindow w = build_window(series, base + 40, 7);
    REQUIRE(w.slots.size() == 7);
    for (const auto& slot : w.slots) CHECK(slot.series_index == 0);
  }
}

TEST_CASE("fuse_daily") {
  const Date d(2017, 2, 1);

  SUBCASE("single prediction is the identity") {
    auto fused = fuse_daily({{SensorKind::SAR, d, 0.7}});
    CHECK(fused.fused == 0.7);
  }

  SUBCASE("two predictions average") {
    auto fused = fuse_daily({{SensorKind::SAR, d, 0.2}, {SensorKind::MODIS, d, 0.4}});
    CHECK(fused.fused == doctest::Approx(0.3));
  }

  SUBCASE("permutation invariance on random multisets") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<ObservationPrediction> preds;
      const int n = 1 + trial % 6;
      for (int i = 0; i < n; ++i) preds.push_back({SensorKind::MODIS, d, u(rng)});
      const double base = fuse_daily(preds).fused;
      std::shuffle(preds.begin(), preds.end(), rng);
      CHECK(fuse_daily(preds).fused == doctest::Approx(base).epsilon(1e-12));
    }
  }

  SUBCASE("repeated value is a fixed point") {
    std::vector<ObservationPrediction> preds(5, {SensorKind::VIIRS, d, 0.42});
    CHECK(fuse_daily(preds).fused == 0.42);
  }

  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(fuse_daily({}), DataError);
  }
}

TEST_CASE("regression net contracts") {
  RegressionConfig cfg;
  cfg.window = 3;
  cfg.embed_channels = 4;
  cfg.spatial = 4;
  cfg.pre1 = 4;
  cfg.pre2 = 3;
  cfg.pre3 = 2;
  cfg.post1 = 4;
  cfg.post2 = 3;
  cfg.post3 = 2;
  std::mt19937 rng(42);

  SUBCASE("output bounded in [0,1] for random weights and inputs") {
    for (int trial = 0; trial < 20; ++trial) {
      RegressionNet<float> net(cfg);
      net.init(rng);
      std::vector<GridTensor<float>> window;
      std::normal_distribution<float> g(0.f, 3.f);
      for (int s = 0; s < 3; ++s) {
        GridTensor<float> t(4, 4, 4);
        for (int p = 0; p < 16; ++p)
          for (int c = 0; c < 4; ++c) t.values(p, c) = g(rng);
        window.push_back(std::move(t));
      }
      const float y = net.forward(window, nullptr);
      CHECK(y >= 0.0f);
      CHECK(y <= 1.0f);
    }
  }

  SUBCASE("prediction depends only on slot contents, not provenance") {
    RegressionNet<float> net(cfg);
    net.init(rng);
    EmbeddingSeries series;
    std::normal_distribution<float> g(0.f, 1.f);
    for (int d = 0; d < 5; ++d) {
      Embedding e = make_emb(Date(2017, 1, 1) + d, SensorKind::MODIS, 0.f);
      for (int p = 0; p < 16; ++p)
        for (int c = 0; c < 4; ++c) e.values.values(p, c) = g(rng);
      series.add(std::move(e));
    }
    EmbeddingWindow w = build_window(series, Date(2017, 1, 3), 3);
    const float base = net.forward(window_tensors(series, w), nullptr);

    // scrub the metadata, keep the tensors
    EmbeddingSeries scrubbed = series;
    for (auto& e : scrubbed.items) e.sensor = SensorKind::SAR;
    const float scrub = net.forward(window_tensors(scrubbed, w), nullptr);
    CHECK(base == scrub);
  }

  SUBCASE("window size mismatch is an error") {
    RegressionNet<float> net(cfg);
    net.init(rng);
    std::vector<GridTensor<float>> too_short(2, GridTensor<float>(4, 4, 4));
    CHECK_THROWS_AS(net.forward(too_short, nullptr), ContractError);
    std::vector<GridTensor<float>> bad_shape(3, GridTensor<float>(4, 4, 7));
    CHECK_THROWS_AS(net.forward(bad_shape, nullptr), ContractError);
  }
}
