#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "comet/tracker.hpp"

namespace comet {

struct CometConfig {
  uint64_t n_rh = 1000;          // RowHammer threshold (activations)
  uint32_t k_reset = 3;          // reset period divisor; period = trefw / k_reset
  uint32_t n_hash = 4;           // CT partitions
  uint32_t n_counters = 512;     // counters per partition (power of two)
  uint32_t n_rat_entries = 128;  // RAT capacity
  uint32_t history_len = 256;    // RAT-miss history bits
  double eprt_fraction = 0.25;   // early-refresh trigger fraction
  uint32_t blast_radius = 1;     // victims per side
  uint32_t row_bits = 17;        // RAT tag width; rows_per_bank = 2^row_bits
  uint64_t trefw_ns = 64'000'000;
  uint64_t trefi_ns = 7'800;
  bool count_mitigation_acts = false;
  uint64_t rng_seed = 1;

  uint32_t rows_per_bank() const { return 1u << row_bits; }
  uint64_t reset_period_ns() const { return trefw_ns / k_reset; }
  // Capacity-miss count that must be exceeded to trigger an early refresh.
  uint32_t eprt_threshold() const {
    return static_cast<uint32_t>(eprt_fraction * history_len + 0.5);
  }

  void validate() const;  // throws std::invalid_argument
};

// N_PR = floor(n_rh / (k + 1)). Rejects n_rh < k+1 (threshold would be
// zero and every ACT would refresh).
uint64_t derive_npr(uint64_t n_rh, uint32_t k);

// Tagged per-row counters for recent aggressors, with uniform random
// eviction. Tags are unique; counters stay below N_PR (reaching N_PR
// triggers a refresh and resets the counter in the same step).
class RecentAggressorTable {
 public:
  RecentAggressorTable(uint32_t capacity, uint64_t seed);

  const uint64_t* lookup(RowId row) const;
  void increment(RowId row);
  void reset_counter(RowId row);
  // Inserts (row, 0), evicting a uniformly random entry when full.
  // Returns true if an eviction happened.
  bool allocate(RowId row);
  void clear();

  size_t size() const { return tags_.size(); }
  uint32_t capacity() const { return capacity_; }

 private:
  uint32_t capacity_;
  std::vector<RowId> tags_;                        // dense, for random eviction
  std::unordered_map<RowId, uint64_t> counters_;   // tag -> count
  std::unordered_map<RowId, uint32_t> slot_of_;    // tag -> index in tags_
  std::mt19937_64 rng_;
};

// Circular one-bit-per-RAT-miss history (1 = capacity miss).
class RatMissHistory {
 public:
  explicit RatMissHistory(uint32_t len);

  void push(bool capacity_miss);
  void clear();
  uint32_t ones() const { return ones_; }
  uint32_t length() const { return static_cast<uint32_t>(bits_.size()); }

 private:
  std::vector<uint8_t> bits_;
  uint32_t cursor_ = 0;
  uint32_t ones_ = 0;
};

// Per-bank CoMeT state machine: Counter Table + Recent Aggressor Table +
// RAT-miss history.
class CometBankTracker : public RowTracker {
 public:
  struct Stats {
    uint64_t rat_hits = 0;
    uint64_t rat_compulsory_misses = 0;
    uint64_t rat_capacity_misses = 0;
  };

  explicit CometBankTracker(const CometConfig& config, uint64_t bank_seed_offset = 0);

  TrackerDecision on_activation(RowId row) override;
  void periodic_reset() override;
  std::optional<uint64_t> audit_estimate(RowId row) const override;

  uint64_t npr() const { return n_pr_; }
  uint64_t estimate(RowId row) const { return ct_.estimate(row); }
  const SketchTable& counter_table() const { return ct_; }
  const RecentAggressorTable& rat() const { return rat_; }
  const RatMissHistory& history() const { return history_; }
  const Stats& stats() const { return stats_; }
  const CometConfig& config() const { return config_; }

 private:
  CometConfig config_;
  uint64_t n_pr_;
  uint32_t eprt_;
  SketchTable ct_;
  RecentAggressorTable rat_;
  RatMissHistory history_;
  Stats stats_;
};

// Rank-wide early preventive refresh: resets every bank tracker of the
// rank and returns the number of REF commands to charge (one full
// refresh schedule, ref_slots commands).
uint64_t apply_early_refresh(std::span<CometBankTracker* const> rank_trackers, uint64_t ref_slots);

}  // namespace comet
