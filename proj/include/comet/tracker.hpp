#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "comet/sketch.hpp"

namespace comet {

enum class DecisionKind { kNone, kPreventiveRefresh, kEarlyRefreshRequest };

// Outcome of feeding one ACT to a tracker. A preventive refresh carries
// the victim rows within the blast radius, clipped to bank bounds.
struct TrackerDecision {
  DecisionKind kind = DecisionKind::kNone;
  std::vector<RowId> victims;

  static TrackerDecision none() { return {}; }
  static TrackerDecision refresh(std::vector<RowId> v) {
    return {DecisionKind::kPreventiveRefresh, std::move(v)};
  }
  static TrackerDecision early_refresh() { return {DecisionKind::kEarlyRefreshRequest, {}}; }
};

// Rows within `blast_radius` of the aggressor, clipped to [0, rows_per_bank).
std::vector<RowId> victims_of(RowId row, uint32_t rows_per_bank, uint32_t blast_radius);

// Per-bank activation tracker. Single-writer; one instance per bank.
class RowTracker {
 public:
  virtual ~RowTracker() = default;

  virtual TrackerDecision on_activation(RowId row) = 0;

  // End-of-reset-period counter clear.
  virtual void periodic_reset() = 0;

  // All rows of the rank were just refreshed (early preventive refresh).
  virtual void on_rank_refresh() { periodic_reset(); }

  // Claimed lower bound on the row's activation count since the last
  // reset or since the row last triggered a refresh. nullopt for
  // trackers with no estimate semantics (PARA, none); those are not
  // audited for underestimates.
  virtual std::optional<uint64_t> audit_estimate(RowId row) const = 0;
};

}  // namespace comet
