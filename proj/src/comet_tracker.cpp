#include "comet/comet_tracker.hpp"

#include <stdexcept>

namespace comet {

std::vector<RowId> victims_of(RowId row, uint32_t rows_per_bank, uint32_t blast_radius) {
  std::vector<RowId> v;
  v.reserve(2 * blast_radius);
  for (uint32_t d = blast_radius; d >= 1; --d) {
    if (row >= d) v.push_back(row - d);
  }
  for (uint32_t d = 1; d <= blast_radius; ++d) {
    if (row + d < rows_per_bank) v.push_back(row + d);
  }
  return v;
}

uint64_t derive_npr(uint64_t n_rh, uint32_t k) {
  if (n_rh < static_cast<uint64_t>(k) + 1)
    throw std::invalid_argument("derive_npr: n_rh < k+1 would make the threshold zero");
  return n_rh / (k + 1);
}

void CometConfig::validate() const {
  derive_npr(n_rh, k_reset);
  if (k_reset == 0) throw std::invalid_argument("CometConfig: k_reset must be positive");
  if (eprt_fraction <= 0.0 || eprt_fraction > 1.0)
    throw std::invalid_argument("CometConfig: eprt_fraction must be in (0, 1]");
  if (history_len == 0) throw std::invalid_argument("CometConfig: history_len must be positive");
  if (n_rat_entries == 0) throw std::invalid_argument("CometConfig: n_rat_entries must be positive");
  if (n_counters == 0 || (n_counters & (n_counters - 1)) != 0)
    throw std::invalid_argument("CometConfig: n_counters must be a power of two");
  if (n_hash == 0) throw std::invalid_argument("CometConfig: n_hash must be positive");
  if (row_bits == 0 || row_bits > 31) throw std::invalid_argument("CometConfig: bad row_bits");
  if (trefw_ns == 0 || trefi_ns == 0 || trefi_ns > trefw_ns)
    throw std::invalid_argument("CometConfig: bad refresh timing");
}

RecentAggressorTable::RecentAggressorTable(uint32_t capacity, uint64_t seed)
    : capacity_(capacity), rng_(seed) {
  if (capacity_ == 0) throw std::invalid_argument("RecentAggressorTable: capacity must be positive");
  tags_.reserve(capacity_);
}

const uint64_t* RecentAggressorTable::lookup(RowId row) const {
  auto it = counters_.find(row);
  return it == counters_.end() ? nullptr : &it->second;
}

void RecentAggressorTable::increment(RowId row) { ++counters_.at(row); }

void RecentAggressorTable::reset_counter(RowId row) { counters_.at(row) = 0; }

bool RecentAggressorTable::allocate(RowId row) {
  bool evicted = false;
  if (tags_.size() == capacity_) {
    const uint32_t slot = static_cast<uint32_t>(rng_() % tags_.size());
    const RowId victim = tags_[slot];
    counters_.erase(victim);
    slot_of_.erase(victim);
    if (slot + 1 != tags_.size()) {
      tags_[slot] = tags_.back();
      slot_of_[tags_[slot]] = slot;
    }
    tags_.pop_back();
    evicted = true;
  }
  slot_of_[row] = static_cast<uint32_t>(tags_.size());
  tags_.push_back(row);
  counters_[row] = 0;
  return evicted;
}

void RecentAggressorTable::clear() {
  tags_.clear();
  counters_.clear();
  slot_of_.clear();
}

RatMissHistory::RatMissHistory(uint32_t len) : bits_(len, 0) {
  if (len == 0) throw std::invalid_argument("RatMissHistory: length must be positive");
}

void RatMissHistory::push(bool capacity_miss) {
  ones_ -= bits_[cursor_];
  bits_[cursor_] = capacity_miss ? 1 : 0;
  ones_ += bits_[cursor_];
  cursor_ = (cursor_ + 1) % bits_.size();
}

void RatMissHistory::clear() {
  std::fill(bits_.begin(), bits_.end(), 0);
  cursor_ = 0;
  ones_ = 0;
}

CometBankTracker::CometBankTracker(const CometConfig& config, uint64_t bank_seed_offset)
    : config_(config),
      n_pr_(derive_npr(config.n_rh, config.k_reset)),
      eprt_(config.eprt_threshold()),
      ct_(config.n_hash, config.n_counters, n_pr_,
          HashFamily::default_family(config.n_hash, config.n_counters)),
      rat_(config.n_rat_entries, config.rng_seed + bank_seed_offset),
      history_(config.history_len) {
  config.validate();
}

TrackerDecision CometBankTracker::on_activation(RowId row) {
  if (row >= config_.rows_per_bank()) throw std::out_of_range("on_activation: row out of range");

  const uint64_t min_ctr = ct_.estimate(row);
  const uint64_t* rat_ctr = rat_.lookup(row);
  const uint64_t num_act = rat_ctr ? *rat_ctr : min_ctr;
  const uint64_t updated = num_act + 1;

  if (rat_ctr) ++stats_.rat_hits;

  if (updated < n_pr_) {
    if (rat_ctr) {
      rat_.increment(row);
    } else {
      ct_.increment(row);
    }
    return TrackerDecision::none();
  }

  if (!rat_ctr) {
    // Counters already saturated before this ACT means the row was an
    // aggressor evicted from the RAT: a capacity miss. Otherwise it is a
    // new aggressor reaching N_PR for the first time: a compulsory miss.
    const bool capacity = min_ctr == n_pr_;
    history_.push(capacity);
    if (capacity) {
      ++stats_.rat_capacity_misses;
    } else {
      ++stats_.rat_compulsory_misses;
    }
  }

  ct_.pin_group(row, n_pr_);
  if (rat_ctr) {
    rat_.reset_counter(row);
  } else {
    rat_.allocate(row);
  }

  if (history_.ones() > eprt_) return TrackerDecision::early_refresh();
  return TrackerDecision::refresh(victims_of(row, config_.rows_per_bank(), config_.blast_radius));
}

void CometBankTracker::periodic_reset() {
  ct_.reset_all();
  rat_.clear();
  history_.clear();
}

std::optional<uint64_t> CometBankTracker::audit_estimate(RowId row) const {
  const uint64_t* rat_ctr = rat_.lookup(row);
  // A RAT-resident row already accumulated N_PR activations in the CT
  // before allocation; its RAT counter counts only activations since the
  // row last triggered a refresh.
  if (rat_ctr) return n_pr_ + *rat_ctr;
  return ct_.estimate(row);
}

uint64_t apply_early_refresh(std::span<CometBankTracker* const> rank_trackers, uint64_t ref_slots) {
  for (CometBankTracker* t : rank_trackers) t->on_rank_refresh();
  return ref_slots;
}

}  // namespace comet
