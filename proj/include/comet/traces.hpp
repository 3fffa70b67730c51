#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "comet/dram_model.hpp"
#include "comet/sketch.hpp"

namespace comet {

// One timestamped ACT command.
struct TraceEvent {
  uint64_t time_ns = 0;
  uint32_t rank = 0;
  uint32_t bank = 0;
  RowId row = 0;

  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

// Text format, one event per line: "<time_ns> <rank> <bank> <row>".
// '#' starts a comment line. Timestamps must be non-decreasing.
// Filenames ending in ".gz" are gzip-compressed.
Trace read_trace(const std::string& path);
void write_trace(const Trace& trace, const std::string& path);

// Fixed-interval ACTs; each event picks a uniform (rank, bank) and a row
// drawn uniformly from a seeded random subset of unique_rows rows of
// that bank.
Trace gen_uniform(const Geometry& geometry, uint64_t duration_ns, uint64_t act_interval_ns,
                  uint32_t unique_rows, uint64_t seed);

// Traditional attack: one ACT per interval, round-robin over every bank
// of every rank, each bank hammering n_aggressors rows spread across the
// bank in rotation.
Trace gen_hammer(const Geometry& geometry, uint32_t n_aggressors, uint64_t act_interval_ns,
                 uint64_t duration_ns);

// Targeted attack on the RAT: drives each of n_aggressors rows (bank 0,
// rank 0) to exactly n_pr ACTs in rotation to force RAT allocations and
// evictions, then re-touches the aggressors to force capacity misses.
// The phase pair repeats until the duration is exhausted.
Trace gen_rat_thrash(const Geometry& geometry, uint32_t n_aggressors, uint64_t n_pr,
                     uint64_t act_interval_ns, uint64_t duration_ns);

struct StraddleParams {
  uint64_t n_rh = 125;
  uint32_t k_reset = 3;
  uint64_t trefw_ns = 64'000'000;
  uint64_t trefi_ns = 7'800;
  uint32_t ref_slots = 8192;
  uint32_t rows_per_bank = 1u << 17;
  RowId target_row = 40;        // victims must share a refresh slot
  uint64_t acts_per_burst = 0;  // 0 -> N_PR - 1
  uint64_t act_interval_ns = 20;
};

// Worst-case reset-straddle pattern: k+1 bursts to the target row, one
// immediately before each reset-period boundary and a final one after
// the last boundary but before the victims' next periodic refresh.
Trace gen_reset_straddle(const StraddleParams& params);

// Per-bank ACT budget implied by a trace duration at the minimum ACT
// spacing; used to sanity-check generated attacks against the number of
// rows hammerable per bank in a refresh window.
uint64_t max_hammerable_rows(uint64_t per_bank_acts, uint64_t n_rh);

}  // namespace comet
