#include "comet/traces.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "comet/comet_tracker.hpp"

namespace comet {

namespace {

bool has_gz_suffix(const std::string& path) {
  return path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::string read_file(const std::string& path) {
  std::string data;
  if (has_gz_suffix(path)) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) data.append(buf, n);
    const bool bad = n < 0;
    gzclose(f);
    if (bad) throw std::runtime_error("gzip read error in " + path);
  } else {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    char buf[1 << 16];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) data.append(buf, n);
    std::fclose(f);
  }
  return data;
}

void write_file(const std::string& path, const std::string& data) {
  if (has_gz_suffix(path)) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    if (gzwrite(f, data.data(), static_cast<unsigned>(data.size())) !=
            static_cast<int>(data.size()) &&
        !data.empty()) {
      gzclose(f);
      throw std::runtime_error("gzip write error in " + path);
    }
    gzclose(f);
  } else {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const size_t n = std::fwrite(data.data(), 1, data.size(), f);
    std::fclose(f);
    if (n != data.size()) throw std::runtime_error("write error in " + path);
  }
}

template <typename T>
const char* parse_field(const char* p, const char* end, T& out, const std::string& path, size_t line) {
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  auto [next, ec] = std::from_chars(p, end, out);
  if (ec != std::errc())
    throw std::runtime_error(path + ":" + std::to_string(line) + ": malformed field");
  return next;
}

}  // namespace

Trace read_trace(const std::string& path) {
  const std::string data = read_file(path);
  Trace trace;
  size_t line_no = 0;
  const char* p = data.data();
  const char* end = p + data.size();
  while (p < end) {
    ++line_no;
    const char* eol = p;
    while (eol < end && *eol != '\n') ++eol;
    const char* q = p;
    while (q < eol && (*q == ' ' || *q == '\t')) ++q;
    if (q < eol && *q != '#') {
      TraceEvent ev;
      q = parse_field(q, eol, ev.time_ns, path, line_no);
      q = parse_field(q, eol, ev.rank, path, line_no);
      q = parse_field(q, eol, ev.bank, path, line_no);
      q = parse_field(q, eol, ev.row, path, line_no);
      while (q < eol && (*q == ' ' || *q == '\t' || *q == '\r')) ++q;
      if (q != eol)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": trailing garbage");
      if (!trace.empty() && ev.time_ns < trace.back().time_ns)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": timestamps not sorted");
      trace.push_back(ev);
    }
    p = eol < end ? eol + 1 : end;
  }
  return trace;
}

void write_trace(const Trace& trace, const std::string& path) {
  std::string out;
  out.reserve(trace.size() * 24);
  char buf[96];
  for (const auto& ev : trace) {
    const int n = std::snprintf(buf, sizeof buf, "%llu %u %u %u\n",
                                static_cast<unsigned long long>(ev.time_ns), ev.rank, ev.bank, ev.row);
    out.append(buf, n);
  }
  write_file(path, out);
}

Trace gen_uniform(const Geometry& geometry, uint64_t duration_ns, uint64_t act_interval_ns,
                  uint32_t unique_rows, uint64_t seed) {
  if (unique_rows < 1) throw std::invalid_argument("gen_uniform: unique_rows must be >= 1");
  if (unique_rows > geometry.rows_per_bank)
    throw std::invalid_argument("gen_uniform: unique_rows exceeds rows_per_bank");
  if (act_interval_ns == 0) throw std::invalid_argument("gen_uniform: zero interval");

  // Seeded per-bank row subsets.
  std::vector<std::vector<RowId>> subsets(geometry.total_banks());
  for (uint32_t g = 0; g < geometry.total_banks(); ++g) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + g + 1);
    std::unordered_set<RowId> picked;
    auto& subset = subsets[g];
    subset.reserve(unique_rows);
    if (unique_rows * 2 >= geometry.rows_per_bank) {
      subset.resize(geometry.rows_per_bank);
      for (RowId r = 0; r < geometry.rows_per_bank; ++r) subset[r] = r;
      for (uint32_t i = 0; i < unique_rows; ++i)
        std::swap(subset[i], subset[i + rng() % (geometry.rows_per_bank - i)]);
      subset.resize(unique_rows);
    } else {
      while (picked.size() < unique_rows) picked.insert(static_cast<RowId>(rng() % geometry.rows_per_bank));
      subset.assign(picked.begin(), picked.end());
    }
  }

  std::mt19937_64 rng(seed);
  Trace trace;
  trace.reserve(duration_ns / act_interval_ns);
  for (uint64_t t = 0; t < duration_ns; t += act_interval_ns) {
    const uint32_t g = static_cast<uint32_t>(rng() % geometry.total_banks());
    const auto& subset = subsets[g];
    const RowId row = subset[rng() % subset.size()];
    trace.push_back({t, g / geometry.banks_per_rank, g % geometry.banks_per_rank, row});
  }
  return trace;
}

Trace gen_hammer(const Geometry& geometry, uint32_t n_aggressors, uint64_t act_interval_ns,
                 uint64_t duration_ns) {
  if (n_aggressors < 1) throw std::invalid_argument("gen_hammer: n_aggressors must be >= 1");
  if (n_aggressors > geometry.rows_per_bank)
    throw std::invalid_argument("gen_hammer: too many aggressors");
  const uint32_t stride = geometry.rows_per_bank / n_aggressors;
  const uint32_t nbanks = geometry.total_banks();
  Trace trace;
  trace.reserve(duration_ns / act_interval_ns);
  uint64_t i = 0;
  for (uint64_t t = 0; t < duration_ns; t += act_interval_ns, ++i) {
    const uint32_t g = static_cast<uint32_t>(i % nbanks);
    const uint32_t j = static_cast<uint32_t>((i / nbanks) % n_aggressors);
    const RowId row = j * stride + stride / 2;
    trace.push_back({t, g / geometry.banks_per_rank, g % geometry.banks_per_rank, row});
  }
  return trace;
}

Trace gen_rat_thrash(const Geometry& geometry, uint32_t n_aggressors, uint64_t n_pr,
                     uint64_t act_interval_ns, uint64_t duration_ns) {
  if (n_aggressors < 1 || n_aggressors > geometry.rows_per_bank)
    throw std::invalid_argument("gen_rat_thrash: bad n_aggressors");
  if (n_pr < 1) throw std::invalid_argument("gen_rat_thrash: n_pr must be >= 1");
  const uint32_t stride = geometry.rows_per_bank / n_aggressors;
  auto row_of = [&](uint32_t j) { return j * stride + stride / 2; };

  Trace trace;
  uint64_t t = 0;
  constexpr uint32_t kRetouchRounds = 2;
  while (t < duration_ns) {
    // Phase 1: drive each aggressor to exactly n_pr ACTs.
    for (uint32_t j = 0; j < n_aggressors && t < duration_ns; ++j) {
      for (uint64_t c = 0; c < n_pr && t < duration_ns; ++c, t += act_interval_ns) {
        trace.push_back({t, 0, 0, row_of(j)});
      }
    }
    // Phase 2: re-touch every aggressor; evicted ones miss with a
    // saturated counter group.
    for (uint32_t r = 0; r < kRetouchRounds; ++r) {
      for (uint32_t j = 0; j < n_aggressors && t < duration_ns; ++j, t += act_interval_ns) {
        trace.push_back({t, 0, 0, row_of(j)});
      }
    }
  }
  return trace;
}

Trace gen_reset_straddle(const StraddleParams& p) {
  const uint64_t n_pr = derive_npr(p.n_rh, p.k_reset);
  const uint64_t acts = p.acts_per_burst > 0 ? p.acts_per_burst : n_pr - 1;
  if (acts == 0) throw std::invalid_argument("gen_reset_straddle: zero-length burst");
  const uint64_t period = p.trefw_ns / p.k_reset;
  const uint32_t rows_per_slot = p.rows_per_bank / p.ref_slots;
  if (p.target_row == 0 || p.target_row + 1 >= p.rows_per_bank)
    throw std::invalid_argument("gen_reset_straddle: target row on bank edge");
  const uint32_t slot_lo = (p.target_row - 1) / rows_per_slot;
  const uint32_t slot_hi = (p.target_row + 1) / rows_per_slot;
  if (slot_lo != slot_hi)
    throw std::invalid_argument("gen_reset_straddle: victims span refresh slots; pick another row");
  const uint64_t victim_deadline = (slot_lo + 1) * p.trefi_ns;  // in-window REF time of both victims

  constexpr uint64_t kGuard = 1'000;
  const uint64_t burst_len = (acts - 1) * p.act_interval_ns;

  Trace trace;
  auto burst_ending_at = [&](uint64_t end) {
    const uint64_t start = end - burst_len;
    for (uint64_t i = 0; i < acts; ++i)
      trace.push_back({start + i * p.act_interval_ns, 0, 0, p.target_row});
    return start;
  };

  for (uint32_t j = 1; j <= p.k_reset; ++j) {
    const uint64_t end = j * period - kGuard;
    const uint64_t start = end - burst_len;
    if (j == 1 && start <= victim_deadline)
      throw std::invalid_argument("gen_reset_straddle: burst overlaps first victim refresh");
    if (start <= (j - 1) * period)
      throw std::invalid_argument("gen_reset_straddle: burst longer than reset period");
    burst_ending_at(end);
  }
  // Final burst: after the last reset boundary, before the victims'
  // next periodic refresh.
  const uint64_t final_end = p.trefw_ns + victim_deadline - kGuard;
  if (final_end - burst_len <= p.trefw_ns)
    throw std::invalid_argument(
        "gen_reset_straddle: final burst does not fit before the victim refresh; "
        "pick a target row with a later refresh slot");
  burst_ending_at(final_end);
  return trace;
}

uint64_t max_hammerable_rows(uint64_t per_bank_acts, uint64_t n_rh) {
  if (n_rh == 0) throw std::invalid_argument("max_hammerable_rows: n_rh must be positive");
  return per_bank_acts / n_rh;
}

}  // namespace comet
