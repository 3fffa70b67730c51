#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "comet/sketch.hpp"

using namespace comet;

namespace {

// Small worked example: m = 5, H0(x) = x mod 5, H1(x) = (x >> 2) mod 5.
HashFamily tiny_family() {
  return HashFamily({{0, 1}, {2, 1}}, 5);
}

}  // namespace

TEST_CASE("counter group of the small worked example") {
  SketchTable t(2, 5, 1000, tiny_family());
  CHECK(t.counter_group(12) == std::vector<CounterRef>{{0, 2}, {1, 3}});
  CHECK(t.counter_group(14) == std::vector<CounterRef>{{0, 4}, {1, 3}});
}

TEST_CASE("conservative update on colliding rows") {
  SketchTable t(2, 5, 1000, tiny_family());
  // Rows 12 and 14 share counter (1,3). One ACT each: the shared counter
  // only rises to 1 because updates are conservative.
  CHECK(t.increment(12) == 1);
  CHECK(t.increment(14) == 1);
  CHECK(t.estimate(12) == 1);
  CHECK(t.estimate(14) == 1);
  CHECK(t.counter_at(0, 2) == 1);
  CHECK(t.counter_at(0, 4) == 1);
  CHECK(t.counter_at(1, 3) == 1);
}

TEST_CASE("conservative update bumps only the minimum counters") {
  SketchTable t(2, 5, 1000, tiny_family());
  for (int i = 0; i < 3; ++i) t.increment(12);
  CHECK(t.counter_at(0, 2) == 3);
  CHECK(t.counter_at(1, 3) == 3);
  // Row 14's group is {(0,4)=0, (1,3)=3}; only the minimum cell moves.
  CHECK(t.increment(14) == 1);
  CHECK(t.counter_at(0, 4) == 1);
  CHECK(t.counter_at(1, 3) == 3);
}

TEST_CASE("plain update bumps every counter in the group") {
  SketchTable t(2, 5, 1000, tiny_family(), SketchLayout::kPartitioned, UpdateRule::kPlain);
  t.increment(12);
  t.increment(14);
  CHECK(t.counter_at(1, 3) == 2);
  CHECK(t.estimate(12) == 1);  // min over {1, 2}
}

TEST_CASE("counters saturate at the cap") {
  SketchTable t(2, 5, 3, tiny_family());
  for (int i = 0; i < 10; ++i) t.increment(12);
  CHECK(t.estimate(12) == 3);
  CHECK(t.counter_at(0, 2) == 3);
}

TEST_CASE("pin_group raises counters and never lowers them") {
  SketchTable t(2, 5, 100, tiny_family());
  for (int i = 0; i < 7; ++i) t.increment(12);
  t.pin_group(14, 4);
  CHECK(t.counter_at(0, 4) == 4);
  CHECK(t.counter_at(1, 3) == 7);  // shared counter stays put
  t.pin_group(12, 2);
  CHECK(t.estimate(12) == 7);
  CHECK_THROWS(t.pin_group(12, 101));
}

TEST_CASE("reset clears every counter") {
  SketchTable t(2, 5, 100, tiny_family());
  for (RowId r = 0; r < 20; ++r) t.increment(r);
  t.reset_all();
  for (uint32_t p = 0; p < 2; ++p)
    for (uint32_t i = 0; i < 5; ++i) CHECK(t.counter_at(p, i) == 0);
}

TEST_CASE("shared layout indexes the whole array") {
  HashFamily fam({{0, 1}, {2, 1}}, 10);
  SketchTable t(2, 5, 1000, fam, SketchLayout::kShared);
  for (const auto& ref : t.counter_group(12)) CHECK(ref.partition == 0);
  // H0(12) = 2, H1(12) = 3, both mod 10.
  CHECK(t.counter_group(12) == std::vector<CounterRef>{{0, 2}, {0, 3}});
}

TEST_CASE("family validation") {
  CHECK_THROWS(HashFamily({{0, 2}}, 5));          // even multiplier
  CHECK_THROWS(HashFamily({{0, 1}, {0, 1}}, 5));  // duplicate descriptor
  CHECK_THROWS(SketchTable(2, 5, 10, HashFamily({{0, 1}, {2, 1}}, 7)));  // modulus mismatch
}

TEST_CASE("default and seeded families are well formed") {
  const HashFamily def = HashFamily::default_family(4, 512);
  REQUIRE(def.size() == 4);
  for (size_t i = 0; i < def.size(); ++i) {
    CHECK(def.functions()[i].shift == 3 * i);
    CHECK((def.functions()[i].multiplier & 1) == 1);
  }
  const HashFamily a = HashFamily::seeded(4, 512, 7);
  const HashFamily b = HashFamily::seeded(4, 512, 7);
  const HashFamily c = HashFamily::seeded(4, 512, 8);
  CHECK(a.functions() == b.functions());
  CHECK(a.functions() != c.functions());
}

TEST_CASE("estimates upper-bound true counts under a random stream") {
  std::mt19937_64 rng(99);
  for (auto layout : {SketchLayout::kPartitioned, SketchLayout::kShared}) {
    const uint32_t mod = layout == SketchLayout::kPartitioned ? 64 : 256;
    SketchTable t(4, 64, 1u << 20, HashFamily::seeded(4, mod, 5), layout);
    std::map<RowId, uint64_t> truth;
    for (int i = 0; i < 100'000; ++i) {
      const RowId row = static_cast<RowId>(rng() % 4096);
      ++truth[row];
      const uint64_t est = t.increment(row);
      CHECK(est >= truth[row]);
    }
    for (const auto& [row, count] : truth) CHECK(t.estimate(row) >= count);
  }
}

TEST_CASE("conservative estimates never exceed plain estimates") {
  SketchTable cu(4, 64, 1u << 20, HashFamily::seeded(4, 64, 11));
  SketchTable plain(4, 64, 1u << 20, HashFamily::seeded(4, 64, 11), SketchLayout::kPartitioned,
                    UpdateRule::kPlain);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50'000; ++i) {
    const RowId row = static_cast<RowId>(rng() % 2048);
    cu.increment(row);
    plain.increment(row);
  }
  for (RowId row = 0; row < 2048; ++row) CHECK(cu.estimate(row) <= plain.estimate(row));
}

TEST_CASE("estimate is pure and increment is monotone") {
  SketchTable t(4, 64, 1u << 20, HashFamily::seeded(4, 64, 17));
  std::mt19937_64 rng(4);
  uint64_t prev = 0;
  for (int i = 0; i < 10'000; ++i) {
    const RowId row = static_cast<RowId>(rng() % 512);
    const uint64_t before = t.estimate(row);
    CHECK(t.estimate(row) == before);
    const uint64_t after = t.increment(row);
    CHECK(after >= before);
    CHECK(after <= before + 1);
    (void)prev;
    prev = after;
  }
}
