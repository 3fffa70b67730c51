#include "comet/dram_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace comet {

DramRankModel::DramRankModel(const Geometry& geometry, const Params& params)
    : geometry_(geometry), params_(params) {
  if (params_.ref_slots == 0 || geometry_.rows_per_bank % params_.ref_slots != 0)
    throw std::invalid_argument("DramRankModel: ref_slots must divide rows_per_bank");
  if (params_.blast_radius == 0)
    throw std::invalid_argument("DramRankModel: blast_radius must be positive");
  rows_per_slot_ = geometry_.rows_per_bank / params_.ref_slots;
  banks_.resize(geometry_.banks_per_rank);
  const size_t span = 2ull * params_.blast_radius;
  for (auto& b : banks_) {
    b.exposure.assign(geometry_.rows_per_bank * span, 0);
    b.window_count.assign(geometry_.rows_per_bank, 0);
  }
}

uint64_t DramRankModel::advance_to(uint64_t time_ns) {
  if (time_ns < now_ns_) throw std::invalid_argument("advance_to: time regression");
  uint64_t fired = 0;
  for (;;) {
    const uint64_t window = fired_slots_ / params_.ref_slots;
    const uint64_t slot = fired_slots_ % params_.ref_slots;
    const uint64_t deadline = window * params_.trefw_ns + (slot + 1) * params_.trefi_ns;
    if (deadline > time_ns) break;
    refresh_rows(static_cast<uint32_t>(slot * rows_per_slot_), rows_per_slot_);
    ++fired_slots_;
    ++fired;
  }
  now_ns_ = time_ns;
  return fired;
}

void DramRankModel::refresh_rows(uint32_t first_row, uint32_t count) {
  for (auto& bank : banks_) {
    for (uint32_t r = first_row; r < first_row + count; ++r) {
      clear_victim_exposure(bank, r);
    }
  }
}

void DramRankModel::clear_victim_exposure(Bank& bank, RowId victim) {
  const uint32_t blast = params_.blast_radius;
  const size_t span = 2ull * blast;
  for (uint32_t j = 0; j < span; ++j) {
    const int64_t offset = j < blast ? -static_cast<int64_t>(blast - j) : j - blast + 1;
    const int64_t aggressor = static_cast<int64_t>(victim) - offset;
    if (aggressor < 0 || aggressor >= static_cast<int64_t>(geometry_.rows_per_bank)) continue;
    bank.exposure[static_cast<size_t>(aggressor) * span + j] = 0;
  }
}

void DramRankModel::record_act(uint32_t bank, RowId row, uint64_t time_ns) {
  if (bank >= banks_.size() || row >= geometry_.rows_per_bank)
    throw std::out_of_range("record_act: bad coordinates");
  (void)time_ns;
  Bank& b = banks_[bank];
  const uint32_t blast = params_.blast_radius;
  const size_t span = 2ull * blast;
  for (uint32_t j = 0; j < span; ++j) {
    const int64_t offset = j < blast ? -static_cast<int64_t>(blast - j) : j - blast + 1;
    const int64_t victim = static_cast<int64_t>(row) + offset;
    if (victim < 0 || victim >= static_cast<int64_t>(geometry_.rows_per_bank)) continue;
    uint32_t& e = b.exposure[static_cast<size_t>(row) * span + j];
    ++e;
    if (e > max_exposure_) max_exposure_ = e;
    if (e >= params_.n_rh) ++exposure_violations_;
  }
  ++b.window_count[row];
}

void DramRankModel::apply_preventive_refresh(uint32_t bank, const std::vector<RowId>& victims) {
  if (bank >= banks_.size()) throw std::out_of_range("apply_preventive_refresh: bad bank");
  for (RowId v : victims) {
    if (v >= geometry_.rows_per_bank) throw std::out_of_range("apply_preventive_refresh: bad victim");
    clear_victim_exposure(banks_[bank], v);
    ++victim_act_pairs_;
  }
}

uint64_t DramRankModel::apply_rank_refresh() {
  for (auto& b : banks_) {
    std::fill(b.exposure.begin(), b.exposure.end(), 0);
    std::fill(b.window_count.begin(), b.window_count.end(), 0);
  }
  return params_.ref_slots;
}

void DramRankModel::reset_tracker_window(uint32_t bank, RowId row) {
  banks_.at(bank).window_count.at(row) = 0;
}

void DramRankModel::reset_all_tracker_windows() {
  for (auto& b : banks_) std::fill(b.window_count.begin(), b.window_count.end(), 0);
}

uint64_t DramRankModel::tracker_window_count(uint32_t bank, RowId row) const {
  return banks_.at(bank).window_count.at(row);
}

bool DramRankModel::audit_row(uint32_t bank, RowId row, uint64_t estimate) {
  if (estimate < tracker_window_count(bank, row)) {
    ++underestimates_;
    return true;
  }
  return false;
}

uint64_t DramRankModel::exposure(uint32_t bank, RowId aggressor, RowId victim) const {
  const uint32_t blast = params_.blast_radius;
  const size_t span = 2ull * blast;
  const int64_t offset = static_cast<int64_t>(victim) - static_cast<int64_t>(aggressor);
  if (offset == 0 || offset < -static_cast<int64_t>(blast) || offset > static_cast<int64_t>(blast))
    throw std::out_of_range("exposure: victim not within blast radius");
  const uint32_t j = offset < 0 ? static_cast<uint32_t>(blast + offset) : static_cast<uint32_t>(blast + offset - 1);
  return banks_.at(bank).exposure.at(static_cast<size_t>(aggressor) * span + j);
}

}  // namespace comet
