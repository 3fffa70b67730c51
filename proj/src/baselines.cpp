#include "comet/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace comet {

PerRowOracleTracker::PerRowOracleTracker(uint32_t rows_per_bank, uint64_t threshold,
                                         uint32_t blast_radius)
    : rows_per_bank_(rows_per_bank), threshold_(threshold), blast_radius_(blast_radius),
      counts_(rows_per_bank, 0) {
  if (threshold_ == 0) throw std::invalid_argument("PerRowOracleTracker: zero threshold");
}

TrackerDecision PerRowOracleTracker::on_activation(RowId row) {
  if (row >= rows_per_bank_) throw std::out_of_range("on_activation: row out of range");
  if (++counts_[row] >= threshold_) {
    counts_[row] = 0;
    return TrackerDecision::refresh(victims_of(row, rows_per_bank_, blast_radius_));
  }
  return TrackerDecision::none();
}

void PerRowOracleTracker::periodic_reset() {
  std::fill(counts_.begin(), counts_.end(), 0);
}

std::optional<uint64_t> PerRowOracleTracker::audit_estimate(RowId row) const {
  return counts_[row];
}

MisraGriesTracker::MisraGriesTracker(uint32_t rows_per_bank, uint32_t n_entries,
                                     uint64_t threshold, uint32_t blast_radius)
    : rows_per_bank_(rows_per_bank), n_entries_(n_entries), threshold_(threshold),
      blast_radius_(blast_radius) {
  if (n_entries_ == 0) throw std::invalid_argument("MisraGriesTracker: zero entries");
  if (threshold_ == 0) throw std::invalid_argument("MisraGriesTracker: zero threshold");
}

void MisraGriesTracker::set_count(RowId row, uint64_t value) {
  auto it = counts_.find(row);
  if (it != counts_.end()) {
    auto bucket = by_count_.find(it->second);
    bucket->second.erase(row);
    if (bucket->second.empty()) by_count_.erase(bucket);
    it->second = value;
  } else {
    counts_[row] = value;
  }
  by_count_[value].insert(row);
}

void MisraGriesTracker::erase_entry(RowId row) {
  auto it = counts_.find(row);
  auto bucket = by_count_.find(it->second);
  bucket->second.erase(row);
  if (bucket->second.empty()) by_count_.erase(bucket);
  counts_.erase(it);
}

TrackerDecision MisraGriesTracker::on_activation(RowId row) {
  if (row >= rows_per_bank_) throw std::out_of_range("on_activation: row out of range");
  auto it = counts_.find(row);
  uint64_t count;
  if (it != counts_.end()) {
    count = it->second + 1;
    set_count(row, count);
  } else if (counts_.size() < n_entries_) {
    count = spillover_ + 1;
    set_count(row, count);
  } else {
    // Replace an entry sitting at the spillover level, if any.
    auto lowest = by_count_.begin();
    if (lowest->first == spillover_) {
      const RowId evicted = *lowest->second.begin();
      erase_entry(evicted);
      count = spillover_ + 1;
      set_count(row, count);
    } else {
      ++spillover_;
      return TrackerDecision::none();
    }
  }
  if (count >= threshold_) {
    set_count(row, spillover_);
    return TrackerDecision::refresh(victims_of(row, rows_per_bank_, blast_radius_));
  }
  return TrackerDecision::none();
}

void MisraGriesTracker::periodic_reset() {
  counts_.clear();
  by_count_.clear();
  spillover_ = 0;
}

std::optional<uint64_t> MisraGriesTracker::audit_estimate(RowId row) const {
  auto it = counts_.find(row);
  return it != counts_.end() ? it->second : spillover_;
}

std::optional<uint64_t> MisraGriesTracker::entry(RowId row) const {
  auto it = counts_.find(row);
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

ParaTracker::ParaTracker(uint32_t rows_per_bank, double p, uint32_t blast_radius, uint64_t seed)
    : rows_per_bank_(rows_per_bank), p_(p), blast_radius_(blast_radius), rng_(seed) {
  if (p_ <= 0.0 || p_ > 1.0) throw std::invalid_argument("ParaTracker: p must be in (0, 1]");
}

double ParaTracker::probability_for(uint64_t n_rh, double failure_target) {
  if (n_rh == 0) throw std::invalid_argument("probability_for: n_rh must be positive");
  return 1.0 - std::pow(failure_target, 1.0 / static_cast<double>(n_rh));
}

TrackerDecision ParaTracker::on_activation(RowId row) {
  if (row >= rows_per_bank_) throw std::out_of_range("on_activation: row out of range");
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  if (u < p_) return TrackerDecision::refresh(victims_of(row, rows_per_bank_, blast_radius_));
  return TrackerDecision::none();
}

CbfTracker::CbfTracker(uint32_t rows_per_bank, uint32_t k, uint32_t m, uint64_t threshold,
                       uint32_t blast_radius, uint64_t hash_seed)
    : rows_per_bank_(rows_per_bank), threshold_(threshold), blast_radius_(blast_radius),
      table_(k, m, threshold,
             hash_seed == 0 ? HashFamily::default_family(k, k * m)
                            : HashFamily::seeded(k, k * m, hash_seed),
             SketchLayout::kShared, UpdateRule::kConservative) {
  if (threshold_ == 0) throw std::invalid_argument("CbfTracker: zero threshold");
}

TrackerDecision CbfTracker::on_activation(RowId row) {
  if (row >= rows_per_bank_) throw std::out_of_range("on_activation: row out of range");
  const uint64_t est = table_.increment(row);
  if (est >= threshold_) {
    table_.pin_group(row, threshold_);
    return TrackerDecision::refresh(victims_of(row, rows_per_bank_, blast_radius_));
  }
  return TrackerDecision::none();
}

void CbfTracker::periodic_reset() { table_.reset_all(); }

std::optional<uint64_t> CbfTracker::audit_estimate(RowId row) const {
  return table_.estimate(row);
}

}  // namespace comet
