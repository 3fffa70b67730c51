#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "comet/tracker.hpp"

namespace comet {

// Exact per-row counter; refresh issued iff a row's true count reaches
// the threshold. The necessity baseline: it never issues an unnecessary
// refresh.
class PerRowOracleTracker : public RowTracker {
 public:
  PerRowOracleTracker(uint32_t rows_per_bank, uint64_t threshold, uint32_t blast_radius);

  TrackerDecision on_activation(RowId row) override;
  void periodic_reset() override;
  std::optional<uint64_t> audit_estimate(RowId row) const override;

 private:
  uint32_t rows_per_bank_;
  uint64_t threshold_;
  uint32_t blast_radius_;
  std::vector<uint64_t> counts_;
};

// Misra-Gries summary (Graphene-style): tagged counters plus a spillover
// counter. All entry counters stay >= spillover. An entry reaching the
// threshold refreshes its victims and drops back to the spillover level.
class MisraGriesTracker : public RowTracker {
 public:
  MisraGriesTracker(uint32_t rows_per_bank, uint32_t n_entries, uint64_t threshold,
                    uint32_t blast_radius);

  TrackerDecision on_activation(RowId row) override;
  void periodic_reset() override;
  std::optional<uint64_t> audit_estimate(RowId row) const override;

  uint64_t spillover() const { return spillover_; }
  size_t entry_count() const { return counts_.size(); }
  std::optional<uint64_t> entry(RowId row) const;

 private:
  void set_count(RowId row, uint64_t value);
  void erase_entry(RowId row);

  uint32_t rows_per_bank_;
  uint32_t n_entries_;
  uint64_t threshold_;
  uint32_t blast_radius_;
  uint64_t spillover_ = 0;
  std::unordered_map<RowId, uint64_t> counts_;
  std::map<uint64_t, std::unordered_set<RowId>> by_count_;
};

// PARA: refresh the neighbors of the activated row with probability p.
// Stateless apart from the RNG; gives no activation-count estimate.
class ParaTracker : public RowTracker {
 public:
  ParaTracker(uint32_t rows_per_bank, double p, uint32_t blast_radius, uint64_t seed);

  // p solving (1-p)^n_rh <= target failure probability (default 1e-15).
  static double probability_for(uint64_t n_rh, double failure_target = 1e-15);

  TrackerDecision on_activation(RowId row) override;
  void periodic_reset() override {}
  std::optional<uint64_t> audit_estimate(RowId) const override { return std::nullopt; }

  double probability() const { return p_; }

 private:
  uint32_t rows_per_bank_;
  double p_;
  uint32_t blast_radius_;
  std::mt19937_64 rng_;
};

// Counting-Bloom-filter tracker (BlockHammer-style layout): same counter
// budget as CoMeT's CT but every hash function ranges over the whole
// array. Conservative updates; no RAT.
class CbfTracker : public RowTracker {
 public:
  CbfTracker(uint32_t rows_per_bank, uint32_t k, uint32_t m, uint64_t threshold,
             uint32_t blast_radius, uint64_t hash_seed = 0);

  TrackerDecision on_activation(RowId row) override;
  void periodic_reset() override;
  std::optional<uint64_t> audit_estimate(RowId row) const override;

  uint64_t estimate(RowId row) const { return table_.estimate(row); }
  const SketchTable& table() const { return table_; }

 private:
  uint32_t rows_per_bank_;
  uint64_t threshold_;
  uint32_t blast_radius_;
  SketchTable table_;
};

// No mitigation at all (negative control).
class NullTracker : public RowTracker {
 public:
  TrackerDecision on_activation(RowId) override { return TrackerDecision::none(); }
  void periodic_reset() override {}
  std::optional<uint64_t> audit_estimate(RowId) const override { return std::nullopt; }
};

}  // namespace comet
