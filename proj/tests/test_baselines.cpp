#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "comet/baselines.hpp"

using namespace comet;

constexpr uint32_t kRows = 1u << 17;

TEST_CASE("per-row oracle refreshes exactly at the threshold") {
  PerRowOracleTracker t(kRows, 250, 1);
  for (int i = 0; i < 249; ++i) CHECK(t.on_activation(7).kind == DecisionKind::kNone);
  CHECK(*t.audit_estimate(7) == 249);
  const TrackerDecision d = t.on_activation(7);
  REQUIRE(d.kind == DecisionKind::kPreventiveRefresh);
  CHECK(d.victims == std::vector<RowId>{6, 8});
  CHECK(*t.audit_estimate(7) == 0);  // counter cleared by the refresh
  t.periodic_reset();
  CHECK(*t.audit_estimate(7) == 0);
}

TEST_CASE("frequent-item summary counts tracked rows exactly") {
  MisraGriesTracker t(kRows, 2, 250, 1);
  for (int i = 0; i < 3; ++i) t.on_activation(10);
  for (int i = 0; i < 2; ++i) t.on_activation(20);
  CHECK(*t.entry(10) == 3);
  CHECK(*t.entry(20) == 2);
  CHECK(t.spillover() == 0);
}

TEST_CASE("untracked rows raise the spillover until they displace an entry") {
  MisraGriesTracker t(kRows, 2, 250, 1);
  for (int i = 0; i < 3; ++i) t.on_activation(10);
  for (int i = 0; i < 2; ++i) t.on_activation(20);
  // Table is full and both entries sit above the spillover: the new row
  // only bumps the spillover.
  t.on_activation(30);
  CHECK(t.spillover() == 1);
  CHECK(t.entry(30) == std::nullopt);
  CHECK(*t.audit_estimate(30) == 1);
  t.on_activation(30);
  CHECK(t.spillover() == 2);
  // Row 20 now sits at the spillover level and gets displaced.
  t.on_activation(30);
  CHECK(t.entry(20) == std::nullopt);
  CHECK(*t.entry(30) == 3);
  CHECK(t.spillover() == 2);
  CHECK(*t.audit_estimate(20) == 2);
}

TEST_CASE("summary entries refresh at the threshold and fall back to the spillover") {
  MisraGriesTracker t(kRows, 4, 5, 1);
  for (int i = 0; i < 4; ++i) CHECK(t.on_activation(9).kind == DecisionKind::kNone);
  const TrackerDecision d = t.on_activation(9);
  REQUIRE(d.kind == DecisionKind::kPreventiveRefresh);
  CHECK(d.victims == std::vector<RowId>{8, 10});
  CHECK(*t.entry(9) == t.spillover());
}

TEST_CASE("summary estimates never trail true counts") {
  MisraGriesTracker t(kRows, 8, 1u << 30, 1);
  std::vector<uint64_t> truth(64, 0);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50'000; ++i) {
    const RowId row = static_cast<RowId>(rng() % 64);
    CHECK(*t.audit_estimate(row) >= truth[row]);
    ++truth[row];
    t.on_activation(row);
  }
}

TEST_CASE("probabilistic refresh rate solves the failure-probability bound") {
  const double p = ParaTracker::probability_for(1000);
  CHECK(p == doctest::Approx(0.033949).epsilon(1e-3));
  // (1-p)^n_rh == failure target
  CHECK(std::pow(1.0 - p, 1000) == doctest::Approx(1e-15).epsilon(1e-6));
  CHECK(ParaTracker::probability_for(125) > p);
}

TEST_CASE("probabilistic tracker is seed-deterministic with the expected rate") {
  ParaTracker a(kRows, 0.0339, 1, 12), b(kRows, 0.0339, 1, 12);
  uint64_t refreshes = 0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const TrackerDecision da = a.on_activation(5);
    CHECK(da.kind == b.on_activation(5).kind);
    if (da.kind == DecisionKind::kPreventiveRefresh) ++refreshes;
  }
  const double rate = static_cast<double>(refreshes) / n;
  CHECK(rate == doctest::Approx(0.0339).epsilon(0.1));
  CHECK(a.audit_estimate(5) == std::nullopt);
}

TEST_CASE("shared-array filter tracks an isolated row exactly") {
  CbfTracker t(kRows, 4, 512, 250, 1);
  for (int i = 0; i < 249; ++i) {
    CHECK(t.on_activation(1000).kind == DecisionKind::kNone);
  }
  CHECK(t.estimate(1000) == 249);
  CHECK(t.on_activation(1000).kind == DecisionKind::kPreventiveRefresh);
  // Saturated group: every later ACT re-triggers until the reset.
  CHECK(t.on_activation(1000).kind == DecisionKind::kPreventiveRefresh);
  t.periodic_reset();
  CHECK(t.estimate(1000) == 0);
  CHECK(t.on_activation(1000).kind == DecisionKind::kNone);
}

TEST_CASE("shared-array filter never underestimates") {
  CbfTracker t(kRows, 4, 64, 1u << 30, 1, 9);
  std::vector<uint64_t> truth(4096, 0);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50'000; ++i) {
    const RowId row = static_cast<RowId>(rng() % 4096);
    ++truth[row];
    t.on_activation(row);
    CHECK(*t.audit_estimate(row) >= truth[row]);
  }
}

TEST_CASE("null tracker never reacts") {
  NullTracker t;
  for (int i = 0; i < 100; ++i) CHECK(t.on_activation(i).kind == DecisionKind::kNone);
  CHECK(t.audit_estimate(0) == std::nullopt);
}
