#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace comet {

using RowId = uint32_t;

// One hash descriptor: H(r) = ((r >> shift) * multiplier) mod m.
// The multiplier must be odd so the map is a bijection on the low bits.
struct HashDescriptor {
  uint32_t shift = 0;
  uint64_t multiplier = 1;

  bool operator==(const HashDescriptor&) const = default;
};

// Ordered family of k hash functions sharing one modulus.
class HashFamily {
 public:
  HashFamily(std::vector<HashDescriptor> functions, uint32_t modulus);

  // Fixed shifts {0,3,6,9,...} with distinct odd multipliers.
  static HashFamily default_family(uint32_t k, uint32_t modulus);
  // Random odd multipliers derived from a seed; shifts as in default_family.
  static HashFamily seeded(uint32_t k, uint32_t modulus, uint64_t seed);

  uint32_t index(size_t i, RowId row) const {
    const HashDescriptor& d = functions_[i];
    return static_cast<uint32_t>(((static_cast<uint64_t>(row) >> d.shift) * d.multiplier) % modulus_);
  }

  size_t size() const { return functions_.size(); }
  uint32_t modulus() const { return modulus_; }
  const std::vector<HashDescriptor>& functions() const { return functions_; }

 private:
  std::vector<HashDescriptor> functions_;
  uint32_t modulus_;
};

// Partitioned: hash i indexes only its own m-counter partition (modulus m).
// Shared: every hash ranges over the whole k*m array (modulus k*m).
enum class SketchLayout { kPartitioned, kShared };

enum class UpdateRule { kConservative, kPlain };

struct CounterRef {
  uint32_t partition;
  uint32_t index;

  bool operator==(const CounterRef&) const = default;
};

// Count-Min Sketch with saturating counters. Counters never decrease
// between resets, so estimates upper-bound true per-row counts.
class SketchTable {
 public:
  SketchTable(uint32_t k, uint32_t m, uint64_t cap, HashFamily family,
              SketchLayout layout = SketchLayout::kPartitioned,
              UpdateRule rule = UpdateRule::kConservative);

  // The k counters a row maps to, as (partition, index) pairs.
  std::vector<CounterRef> counter_group(RowId row) const;

  // Min over the row's counter group (Min_Ctr).
  uint64_t estimate(RowId row) const;

  // Conservative update: bump only the minimum-valued counters of the
  // group (plain mode bumps all of them). Saturates at cap.
  // Returns the new estimate.
  uint64_t increment(RowId row);

  // Raise every counter in the group to at least `value`. Never lowers
  // a counter; lowering a shared counter could underestimate another row.
  void pin_group(RowId row, uint64_t value);

  void reset_all();

  uint32_t partitions() const { return k_; }
  uint32_t counters_per_partition() const { return m_; }
  uint64_t cap() const { return cap_; }
  SketchLayout layout() const { return layout_; }
  const HashFamily& hash_family() const { return family_; }

  uint64_t counter_at(uint32_t partition, uint32_t index) const;

 private:
  void group_cells(RowId row, uint32_t* out) const;

  uint32_t k_;
  uint32_t m_;
  uint64_t cap_;
  HashFamily family_;
  SketchLayout layout_;
  UpdateRule rule_;
  std::vector<uint64_t> counters_;  // k*m cells, flat
};

}  // namespace comet
