#pragma once

#include <cstdint>
#include <vector>

#include "comet/sketch.hpp"

namespace comet {

struct Geometry {
  uint32_t ranks = 2;
  uint32_t banks_per_rank = 16;
  uint32_t rows_per_bank = 1u << 17;

  uint32_t total_banks() const { return ranks * banks_per_rank; }
};

// Per-rank ground-truth referee. Tracks, for every (aggressor, victim)
// pair within the blast radius, the aggressor's activation count since
// the victim was last refreshed (periodically, preventively, or via an
// early rank-wide refresh). Also tracks a per-row "tracker window"
// count used to audit tracker estimates for underestimates.
//
// Periodic refresh follows the nominal DDR4 schedule: `ref_slots` REF
// commands per tREFW window, slot s of window w firing at
// w*trefw + (s+1)*trefi and refreshing the next rows_per_slot rows
// round-robin in every bank of the rank.
class DramRankModel {
 public:
  struct Params {
    uint64_t n_rh = 1000;
    uint32_t blast_radius = 1;
    uint64_t trefw_ns = 64'000'000;
    uint64_t trefi_ns = 7'800;
    uint32_t ref_slots = 8192;
  };

  DramRankModel(const Geometry& geometry, const Params& params);

  // Fires every REF slot with deadline <= time_ns. Returns the number of
  // REF commands fired. Throws on time regression.
  uint64_t advance_to(uint64_t time_ns);

  void record_act(uint32_t bank, RowId row, uint64_t time_ns);

  // Victim rows refreshed by one ACT+PRE pair each; exposures from all
  // their neighbors reset.
  void apply_preventive_refresh(uint32_t bank, const std::vector<RowId>& victims);

  // Early preventive refresh: every row of every bank in the rank
  // refreshed; all exposures and tracker windows reset. Returns the REF
  // command count charged (ref_slots).
  uint64_t apply_rank_refresh();

  // Tracker-window bookkeeping for the underestimate audit.
  void reset_tracker_window(uint32_t bank, RowId row);
  void reset_all_tracker_windows();
  uint64_t tracker_window_count(uint32_t bank, RowId row) const;

  // Checks one row's tracker estimate against the oracle window count.
  // Returns true on underestimate (and records it).
  bool audit_row(uint32_t bank, RowId row, uint64_t estimate);

  uint64_t exposure(uint32_t bank, RowId aggressor, RowId victim) const;
  uint64_t max_exposure() const { return max_exposure_; }
  uint64_t exposure_violations() const { return exposure_violations_; }
  uint64_t underestimates() const { return underestimates_; }
  uint64_t victim_act_pairs() const { return victim_act_pairs_; }
  uint64_t now_ns() const { return now_ns_; }
  uint32_t ref_slots() const { return params_.ref_slots; }
  uint32_t rows_per_slot() const { return rows_per_slot_; }

 private:
  struct Bank {
    std::vector<uint32_t> exposure;       // rows * 2*blast, neighbor-offset major
    std::vector<uint32_t> window_count;   // true ACTs in the tracker audit window
  };

  void refresh_rows(uint32_t first_row, uint32_t count);
  void clear_victim_exposure(Bank& bank, RowId victim);

  Geometry geometry_;
  Params params_;
  uint32_t rows_per_slot_;
  uint64_t now_ns_ = 0;
  uint64_t fired_slots_ = 0;  // lifetime REF count, fixes the slot deadline
  std::vector<Bank> banks_;
  uint64_t max_exposure_ = 0;
  uint64_t exposure_violations_ = 0;
  uint64_t underestimates_ = 0;
  uint64_t victim_act_pairs_ = 0;
};

}  // namespace comet
