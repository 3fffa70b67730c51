#include "comet/sketch.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace comet {

namespace {

// Distinct odd constants (Knuth/xxhash style mixers) for the default family.
constexpr uint64_t kDefaultMultipliers[] = {
    0x9E3779B97F4A7C15ull | 1, 0xC2B2AE3D27D4EB4Full | 1,
    0x165667B19E3779F9ull | 1, 0x27D4EB2F165667C5ull | 1,
    0xFF51AFD7ED558CCDull | 1, 0xC4CEB9FE1A85EC53ull | 1,
    0x2545F4914F6CDD1Dull | 1, 0x5851F42D4C957F2Dull | 1,
};

std::vector<HashDescriptor> make_shifted(uint32_t k) {
  std::vector<HashDescriptor> fns(k);
  for (uint32_t i = 0; i < k; ++i) {
    fns[i].shift = 3 * i;
    fns[i].multiplier = kDefaultMultipliers[i % std::size(kDefaultMultipliers)];
  }
  return fns;
}

}  // namespace

HashFamily::HashFamily(std::vector<HashDescriptor> functions, uint32_t modulus)
    : functions_(std::move(functions)), modulus_(modulus) {
  if (functions_.empty()) throw std::invalid_argument("HashFamily: need at least one function");
  if (modulus_ == 0) throw std::invalid_argument("HashFamily: modulus must be positive");
  for (const auto& d : functions_) {
    if ((d.multiplier & 1) == 0) throw std::invalid_argument("HashFamily: multiplier must be odd");
  }
  for (size_t i = 0; i < functions_.size(); ++i) {
    for (size_t j = i + 1; j < functions_.size(); ++j) {
      if (functions_[i] == functions_[j])
        throw std::invalid_argument("HashFamily: descriptors must be pairwise distinct");
    }
  }
}

HashFamily HashFamily::default_family(uint32_t k, uint32_t modulus) {
  return HashFamily(make_shifted(k), modulus);
}

HashFamily HashFamily::seeded(uint32_t k, uint32_t modulus, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto fns = make_shifted(k);
  for (auto& d : fns) d.multiplier = rng() | 1;
  // Regenerate on the (unlikely) duplicate draw.
  for (size_t i = 0; i < fns.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      while (fns[i] == fns[j]) fns[i].multiplier = rng() | 1;
  return HashFamily(std::move(fns), modulus);
}

SketchTable::SketchTable(uint32_t k, uint32_t m, uint64_t cap, HashFamily family,
                         SketchLayout layout, UpdateRule rule)
    : k_(k), m_(m), cap_(cap), family_(std::move(family)), layout_(layout), rule_(rule),
      counters_(static_cast<size_t>(k) * m, 0) {
  if (k_ == 0 || m_ == 0) throw std::invalid_argument("SketchTable: k and m must be positive");
  const uint32_t expected = layout_ == SketchLayout::kPartitioned ? m_ : k_ * m_;
  if (family_.modulus() != expected)
    throw std::invalid_argument("SketchTable: hash family modulus does not match layout");
  if (family_.size() != k_)
    throw std::invalid_argument("SketchTable: hash family size does not match k");
}

void SketchTable::group_cells(RowId row, uint32_t* out) const {
  for (uint32_t i = 0; i < k_; ++i) {
    const uint32_t h = family_.index(i, row);
    out[i] = layout_ == SketchLayout::kPartitioned ? i * m_ + h : h;
  }
}

std::vector<CounterRef> SketchTable::counter_group(RowId row) const {
  std::vector<uint32_t> cells(k_);
  group_cells(row, cells.data());
  std::vector<CounterRef> refs(k_);
  for (uint32_t i = 0; i < k_; ++i) refs[i] = {cells[i] / m_, cells[i] % m_};
  return refs;
}

uint64_t SketchTable::estimate(RowId row) const {
  uint32_t cells[16];
  std::vector<uint32_t> heap;
  uint32_t* p = cells;
  if (k_ > 16) { heap.resize(k_); p = heap.data(); }
  group_cells(row, p);
  uint64_t mn = counters_[p[0]];
  for (uint32_t i = 1; i < k_; ++i) mn = std::min(mn, counters_[p[i]]);
  return mn;
}

uint64_t SketchTable::increment(RowId row) {
  uint32_t cells[16];
  std::vector<uint32_t> heap;
  uint32_t* p = cells;
  if (k_ > 16) { heap.resize(k_); p = heap.data(); }
  group_cells(row, p);
  uint64_t mn = counters_[p[0]];
  for (uint32_t i = 1; i < k_; ++i) mn = std::min(mn, counters_[p[i]]);
  for (uint32_t i = 0; i < k_; ++i) {
    uint64_t& c = counters_[p[i]];
    const bool bump = rule_ == UpdateRule::kPlain || c == mn;
    if (bump && c < cap_) ++c;
  }
  return std::min(mn + 1, cap_);
}

void SketchTable::pin_group(RowId row, uint64_t value) {
  if (value > cap_) throw std::invalid_argument("pin_group: value exceeds cap");
  uint32_t cells[16];
  std::vector<uint32_t> heap;
  uint32_t* p = cells;
  if (k_ > 16) { heap.resize(k_); p = heap.data(); }
  group_cells(row, p);
  for (uint32_t i = 0; i < k_; ++i) counters_[p[i]] = std::max(counters_[p[i]], value);
}

void SketchTable::reset_all() {
  std::fill(counters_.begin(), counters_.end(), 0);
}

uint64_t SketchTable::counter_at(uint32_t partition, uint32_t index) const {
  if (partition >= k_ || index >= m_) throw std::out_of_range("counter_at: bad cell");
  return counters_[static_cast<size_t>(partition) * m_ + index];
}

}  // namespace comet
