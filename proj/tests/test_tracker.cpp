#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "comet/comet_tracker.hpp"

using namespace comet;

namespace {

// Hammers a row until the tracker reacts; returns the decision.
TrackerDecision act_until_decision(CometBankTracker& t, RowId row, int limit = 1000) {
  for (int i = 0; i < limit; ++i) {
    TrackerDecision d = t.on_activation(row);
    if (d.kind != DecisionKind::kNone) return d;
  }
  FAIL("tracker never reacted");
  return TrackerDecision::none();
}

}  // namespace

TEST_CASE("preventive-refresh threshold derivation") {
  CHECK(derive_npr(1000, 3) == 250);
  CHECK(derive_npr(500, 3) == 125);
  CHECK(derive_npr(250, 3) == 62);
  CHECK(derive_npr(125, 3) == 31);
  CHECK(derive_npr(4, 3) == 1);
  CHECK_THROWS(derive_npr(3, 3));
}

TEST_CASE("victims within the blast radius, clipped to the bank") {
  CHECK(victims_of(7, 1u << 17, 1) == std::vector<RowId>{6, 8});
  CHECK(victims_of(0, 1u << 17, 1) == std::vector<RowId>{1});
  CHECK(victims_of((1u << 17) - 1, 1u << 17, 1) == std::vector<RowId>{(1u << 17) - 2});
  CHECK(victims_of(7, 1u << 17, 2) == std::vector<RowId>{5, 6, 8, 9});
  CHECK(victims_of(1, 1u << 17, 2) == std::vector<RowId>{0, 2, 3});
}

TEST_CASE("config validation") {
  CometConfig c;
  CHECK_NOTHROW(c.validate());
  c.n_counters = 500;
  CHECK_THROWS(c.validate());
  c = CometConfig{};
  c.n_rh = 3;  // below k_reset + 1
  CHECK_THROWS(c.validate());
  c = CometConfig{};
  c.eprt_fraction = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("early-refresh trigger threshold rounds the fraction") {
  CometConfig c;
  CHECK(c.eprt_threshold() == 64);  // 0.25 * 256
  c.history_len = 4;
  CHECK(c.eprt_threshold() == 1);
  c.eprt_fraction = 0.5;
  CHECK(c.eprt_threshold() == 2);
}

TEST_CASE("row reaching the threshold refreshes and enters the aggressor table") {
  CometConfig cfg;  // n_rh 1000, k 3 -> threshold 250
  CometBankTracker t(cfg);
  REQUIRE(t.npr() == 250);
  for (int i = 0; i < 249; ++i) {
    CHECK(t.on_activation(7).kind == DecisionKind::kNone);
  }
  CHECK(t.estimate(7) == 249);
  const TrackerDecision d = t.on_activation(7);
  REQUIRE(d.kind == DecisionKind::kPreventiveRefresh);
  CHECK(d.victims == std::vector<RowId>{6, 8});
  CHECK(t.stats().rat_compulsory_misses == 1);
  CHECK(t.stats().rat_capacity_misses == 0);
  CHECK(t.history().ones() == 0);  // compulsory misses record a zero bit
  REQUIRE(t.rat().lookup(7) != nullptr);
  CHECK(*t.rat().lookup(7) == 0);
  CHECK(t.estimate(7) == 250);  // counters pinned at the cap
}

TEST_CASE("aggressor-table hits drive subsequent refreshes") {
  CometConfig cfg;
  CometBankTracker t(cfg);
  act_until_decision(t, 7);  // first refresh, row allocated
  // The next 249 ACTs count in the RAT; the 250th refreshes again.
  for (int i = 0; i < 249; ++i) {
    CHECK(t.on_activation(7).kind == DecisionKind::kNone);
  }
  CHECK(*t.rat().lookup(7) == 249);
  CHECK(t.audit_estimate(7) == 250 + 249);
  const TrackerDecision d = t.on_activation(7);
  CHECK(d.kind == DecisionKind::kPreventiveRefresh);
  CHECK(*t.rat().lookup(7) == 0);
  CHECK(t.stats().rat_hits == 250);
  CHECK(t.stats().rat_compulsory_misses == 1);  // no new miss on the hit path
}

TEST_CASE("evicted aggressors come back as capacity misses") {
  CometConfig cfg;
  cfg.n_rat_entries = 1;
  CometBankTracker t(cfg);
  act_until_decision(t, 1000);  // allocated
  act_until_decision(t, 2000);  // evicts row 1000
  CHECK(t.rat().lookup(1000) == nullptr);
  CHECK(t.stats().rat_compulsory_misses == 2);
  // Row 1000's counters are still saturated, so one ACT re-trips it.
  const TrackerDecision d = t.on_activation(1000);
  CHECK(d.kind == DecisionKind::kPreventiveRefresh);
  CHECK(t.stats().rat_capacity_misses == 1);
  CHECK(t.history().ones() == 1);
  CHECK(t.rat().lookup(1000) != nullptr);
  CHECK(t.rat().lookup(2000) == nullptr);
}

TEST_CASE("capacity-miss pressure escalates to an early refresh request") {
  CometConfig cfg;
  cfg.n_rat_entries = 2;
  cfg.history_len = 4;   // trigger threshold: more than 1 capacity miss
  CometBankTracker t(cfg);
  const std::vector<RowId> rows = {1000, 2000, 3000};
  for (RowId r : rows) act_until_decision(t, r);
  CHECK(t.rat().size() == 2);

  auto absent_row = [&] {
    for (RowId r : rows)
      if (!t.rat().lookup(r)) return r;
    FAIL("no evicted row");
    return RowId{0};
  };

  // First capacity miss: history holds one set bit, still a plain refresh.
  TrackerDecision d = t.on_activation(absent_row());
  CHECK(d.kind == DecisionKind::kPreventiveRefresh);
  CHECK(t.history().ones() == 1);
  // Second capacity miss crosses the trigger.
  d = t.on_activation(absent_row());
  CHECK(d.kind == DecisionKind::kEarlyRefreshRequest);
  CHECK(d.victims.empty());
  CHECK(t.history().ones() == 2);
}

TEST_CASE("reset clears counters, aggressor table, and history") {
  CometConfig cfg;
  cfg.n_rat_entries = 1;
  CometBankTracker t(cfg);
  act_until_decision(t, 1000);
  act_until_decision(t, 2000);
  t.on_activation(1000);  // capacity miss
  CHECK(t.history().ones() == 1);
  t.periodic_reset();
  CHECK(t.estimate(1000) == 0);
  CHECK(t.rat().size() == 0);
  CHECK(t.history().ones() == 0);
  CHECK(t.audit_estimate(1000) == 0);
  // A rank-wide refresh clears the same state.
  act_until_decision(t, 1000);
  t.on_rank_refresh();
  CHECK(t.estimate(1000) == 0);
  CHECK(t.rat().size() == 0);
}

TEST_CASE("miss history is a circular window") {
  RatMissHistory h(4);
  for (int i = 0; i < 4; ++i) h.push(true);
  CHECK(h.ones() == 4);
  h.push(false);  // overwrites the oldest set bit
  CHECK(h.ones() == 3);
  h.push(false);
  CHECK(h.ones() == 2);
  h.clear();
  CHECK(h.ones() == 0);
}

TEST_CASE("aggressor table eviction keeps tags and counters consistent") {
  RecentAggressorTable rat(4, 42);
  for (RowId r = 0; r < 200; ++r) {
    rat.allocate(r);
    CHECK(rat.size() <= 4);
    CHECK(rat.lookup(r) != nullptr);
    if (rat.lookup(r)) rat.increment(r);
  }
  // Exactly four survivors, each with a live counter.
  size_t live = 0;
  for (RowId r = 0; r < 200; ++r) {
    if (const uint64_t* c = rat.lookup(r)) {
      ++live;
      CHECK(*c == 1);
    }
  }
  CHECK(live == 4);
}

TEST_CASE("same seed, same decisions") {
  CometConfig cfg;
  cfg.n_rat_entries = 4;
  CometBankTracker a(cfg), b(cfg);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20'000; ++i) {
    const RowId row = static_cast<RowId>(rng() % 32);
    const TrackerDecision da = a.on_activation(row);
    const TrackerDecision db = b.on_activation(row);
    CHECK(da.kind == db.kind);
    CHECK(da.victims == db.victims);
  }
}

TEST_CASE("audit estimate never trails the true count") {
  CometConfig cfg;
  cfg.n_rat_entries = 8;
  CometBankTracker t(cfg);
  std::vector<uint64_t> truth(256, 0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100'000; ++i) {
    const RowId row = static_cast<RowId>(rng() % 256);
    CHECK(*t.audit_estimate(row) >= truth[row]);
    ++truth[row];
    const TrackerDecision d = t.on_activation(row);
    if (d.kind != DecisionKind::kNone) truth[row] = 0;
    if (d.kind == DecisionKind::kEarlyRefreshRequest) {
      t.on_rank_refresh();
      std::fill(truth.begin(), truth.end(), 0);
    }
  }
}
