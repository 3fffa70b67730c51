#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "comet/baselines.hpp"
#include "comet/comet_tracker.hpp"
#include "comet/dram_model.hpp"
#include "comet/traces.hpp"

namespace comet {

enum class TrackerKind { kComet, kPerRow, kMisraGries, kPara, kCbf, kNone };

TrackerKind tracker_kind_from_string(const std::string& name);
std::string to_string(TrackerKind kind);

struct RunStats {
  uint64_t total_acts = 0;
  uint64_t preventive_refreshes = 0;
  uint64_t early_refreshes = 0;
  uint64_t ref_commands_issued = 0;        // periodic + early
  uint64_t early_ref_commands = 0;         // REF commands charged by early refreshes
  uint64_t victim_act_pairs = 0;           // ACT+PRE pairs issued by preventive refreshes
  uint64_t rat_hits = 0;
  uint64_t rat_compulsory_misses = 0;
  uint64_t rat_capacity_misses = 0;
  uint64_t unnecessary_refreshes = 0;      // oracle true count < N_PR at trigger time
  uint64_t underestimates = 0;             // must be 0 for conforming trackers
  uint64_t max_exposure = 0;
  uint64_t exposure_violations = 0;
  std::vector<uint64_t> acts_per_bank;     // indexed rank*banks_per_rank + bank

  static std::string csv_header();
  std::string csv_row(const std::string& config_id, const std::string& tracker,
                      const std::string& trace) const;
};

struct RunOptions {
  TrackerKind tracker = TrackerKind::kComet;
  bool audit = true;
  uint32_t mg_entries = 0;    // 0 -> ceil(max ACTs per bank per reset period / N_PR)
  double para_p = 0.0;        // 0 -> derived from n_rh for 1e-15 failure target
};

// Replays a time-sorted trace through per-bank trackers and the
// per-rank DRAM model, firing periodic resets and REF slots between
// events and applying tracker decisions.
RunStats run(const Trace& trace, const CometConfig& config, const Geometry& geometry,
             const RunOptions& options);

struct StorageBreakdown {
  double ct_kib = 0.0;
  double rat_kib = 0.0;
  double total_kib = 0.0;
  uint32_t counter_bits = 0;
};

// Exact storage cost of CT + RAT for a dual-rank (32-bank) channel.
StorageBreakdown storage_model(const CometConfig& config,
                               uint32_t banks = 32);

struct FpResult {
  double fp_comet = 0.0;
  double fp_cbf = 0.0;
  // (fp_cbf - fp_comet) / fp_cbf, in [0, 1]; NaN when fp_cbf == 0.
  double relative_reduction() const;
};

// Tracker-layout false-positive comparison: per trial, total_acts ACTs
// are spread uniformly at random over unique_rows distinct rows and fed
// to both layouts (partitioned vs. shared, same counter budget,
// conservative updates, no RAT, no resets). FP rate = fraction of
// touched rows whose estimate reaches the threshold while the true
// count stays below it; averaged over trials.
FpResult fp_experiment(uint32_t unique_rows, uint32_t total_acts, uint64_t threshold,
                       uint32_t trials, uint64_t seed, uint32_t n_hash = 4,
                       uint32_t n_counters = 512, uint32_t row_bits = 17);

enum class SweepAxis { kCounterTable, kRatEntries, kHistory, kResetDivisor };

SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepPoint {
  std::string config_id;
  CometConfig config;
};

// One grid point per config value per trace; returns CSV rows (plus
// header) of RunStats.
std::vector<SweepPoint> make_sweep_grid(SweepAxis axis, const CometConfig& base);
std::string sweep(const std::vector<SweepPoint>& grid,
                  const std::vector<std::pair<std::string, Trace>>& traces,
                  const Geometry& geometry, const RunOptions& options, uint32_t jobs = 1);

}  // namespace comet
