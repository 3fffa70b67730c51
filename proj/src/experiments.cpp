#include "comet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace comet {

TrackerKind tracker_kind_from_string(const std::string& name) {
  if (name == "comet") return TrackerKind::kComet;
  if (name == "perrow") return TrackerKind::kPerRow;
  if (name == "graphene" || name == "misragries") return TrackerKind::kMisraGries;
  if (name == "para") return TrackerKind::kPara;
  if (name == "cbf") return TrackerKind::kCbf;
  if (name == "none") return TrackerKind::kNone;
  throw std::invalid_argument("unknown tracker: " + name);
}

std::string to_string(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::kComet: return "comet";
    case TrackerKind::kPerRow: return "perrow";
    case TrackerKind::kMisraGries: return "graphene";
    case TrackerKind::kPara: return "para";
    case TrackerKind::kCbf: return "cbf";
    case TrackerKind::kNone: return "none";
  }
  return "?";
}

std::string RunStats::csv_header() {
  return "config_id,tracker,trace,total_acts,prev_refreshes,early_refreshes,ref_cmds,"
         "rat_hits,rat_cap_miss,rat_comp_miss,unnecessary,underestimates,max_exposure";
}

std::string RunStats::csv_row(const std::string& config_id, const std::string& tracker,
                              const std::string& trace) const {
  std::ostringstream os;
  os << config_id << ',' << tracker << ',' << trace << ',' << total_acts << ','
     << preventive_refreshes << ',' << early_refreshes << ',' << ref_commands_issued << ','
     << rat_hits << ',' << rat_capacity_misses << ',' << rat_compulsory_misses << ','
     << unnecessary_refreshes << ',' << underestimates << ',' << max_exposure;
  return os.str();
}

namespace {

std::unique_ptr<RowTracker> make_tracker(TrackerKind kind, const CometConfig& config,
                                         const RunOptions& options, uint64_t n_pr,
                                         uint32_t global_bank) {
  const uint32_t rows = config.rows_per_bank();
  switch (kind) {
    case TrackerKind::kComet:
      return std::make_unique<CometBankTracker>(config, global_bank);
    case TrackerKind::kPerRow:
      return std::make_unique<PerRowOracleTracker>(rows, n_pr, config.blast_radius);
    case TrackerKind::kMisraGries: {
      uint32_t entries = options.mg_entries;
      if (entries == 0) {
        // Misra-Gries sufficiency bound: entries >= max ACTs per bank per
        // reset period / N_PR, with a 20 ns minimum ACT spacing.
        const uint64_t max_acts = config.reset_period_ns() / 20;
        entries = static_cast<uint32_t>((max_acts + n_pr - 1) / n_pr);
      }
      return std::make_unique<MisraGriesTracker>(rows, entries, n_pr, config.blast_radius);
    }
    case TrackerKind::kPara: {
      const double p = options.para_p > 0.0 ? options.para_p
                                            : ParaTracker::probability_for(config.n_rh);
      return std::make_unique<ParaTracker>(rows, p, config.blast_radius,
                                           config.rng_seed + global_bank);
    }
    case TrackerKind::kCbf:
      return std::make_unique<CbfTracker>(rows, config.n_hash, config.n_counters, n_pr,
                                          config.blast_radius);
    case TrackerKind::kNone:
      return std::make_unique<NullTracker>();
  }
  throw std::logic_error("make_tracker: bad kind");
}

}  // namespace

RunStats run(const Trace& trace, const CometConfig& config, const Geometry& geometry,
             const RunOptions& options) {
  config.validate();
  if (geometry.rows_per_bank != config.rows_per_bank())
    throw std::invalid_argument("run: geometry rows_per_bank does not match config row_bits");

  const uint64_t n_pr = derive_npr(config.n_rh, config.k_reset);
  const uint64_t reset_period = config.reset_period_ns();

  DramRankModel::Params model_params{config.n_rh, config.blast_radius, config.trefw_ns,
                                     config.trefi_ns, 8192};

  std::vector<DramRankModel> models;
  models.reserve(geometry.ranks);
  std::vector<std::vector<std::unique_ptr<RowTracker>>> trackers(geometry.ranks);
  for (uint32_t r = 0; r < geometry.ranks; ++r) {
    models.emplace_back(geometry, model_params);
    trackers[r].reserve(geometry.banks_per_rank);
    for (uint32_t b = 0; b < geometry.banks_per_rank; ++b) {
      trackers[r].push_back(make_tracker(options.tracker, config, options, n_pr,
                                         r * geometry.banks_per_rank + b));
    }
  }
  std::vector<uint64_t> next_reset(geometry.ranks, reset_period);

  RunStats stats;
  stats.acts_per_bank.assign(geometry.total_banks(), 0);

  auto rank_periodic_reset = [&](uint32_t r) {
    for (auto& t : trackers[r]) t->periodic_reset();
    models[r].reset_all_tracker_windows();
  };

  for (const TraceEvent& ev : trace) {
    if (ev.rank >= geometry.ranks || ev.bank >= geometry.banks_per_rank ||
        ev.row >= geometry.rows_per_bank)
      throw std::invalid_argument("run: trace event outside geometry");

    for (uint32_t r = 0; r < geometry.ranks; ++r) {
      stats.ref_commands_issued += models[r].advance_to(ev.time_ns);
      while (next_reset[r] <= ev.time_ns) {
        rank_periodic_reset(r);
        next_reset[r] += reset_period;
      }
    }

    DramRankModel& model = models[ev.rank];
    RowTracker& tracker = *trackers[ev.rank][ev.bank];

    if (options.audit) {
      if (auto est = tracker.audit_estimate(ev.row)) model.audit_row(ev.bank, ev.row, *est);
    }

    model.record_act(ev.bank, ev.row, ev.time_ns);
    ++stats.total_acts;
    ++stats.acts_per_bank[ev.rank * geometry.banks_per_rank + ev.bank];

    TrackerDecision decision = tracker.on_activation(ev.row);
    switch (decision.kind) {
      case DecisionKind::kNone:
        break;
      case DecisionKind::kPreventiveRefresh: {
        ++stats.preventive_refreshes;
        if (model.tracker_window_count(ev.bank, ev.row) < n_pr) ++stats.unnecessary_refreshes;
        model.apply_preventive_refresh(ev.bank, decision.victims);
        model.reset_tracker_window(ev.bank, ev.row);
        if (config.count_mitigation_acts) {
          for (RowId v : decision.victims) {
            model.record_act(ev.bank, v, ev.time_ns);
            // Feedback decisions are applied but not cascaded further.
            TrackerDecision d2 = tracker.on_activation(v);
            if (d2.kind == DecisionKind::kPreventiveRefresh) {
              ++stats.preventive_refreshes;
              model.apply_preventive_refresh(ev.bank, d2.victims);
              model.reset_tracker_window(ev.bank, v);
            }
          }
        }
        break;
      }
      case DecisionKind::kEarlyRefreshRequest: {
        ++stats.early_refreshes;
        const uint64_t cmds = model.apply_rank_refresh();
        stats.early_ref_commands += cmds;
        stats.ref_commands_issued += cmds;
        for (auto& t : trackers[ev.rank]) t->on_rank_refresh();
        next_reset[ev.rank] = ev.time_ns + reset_period;
        break;
      }
    }
  }

  for (uint32_t r = 0; r < geometry.ranks; ++r) {
    stats.max_exposure = std::max(stats.max_exposure, models[r].max_exposure());
    stats.exposure_violations += models[r].exposure_violations();
    stats.underestimates += models[r].underestimates();
    stats.victim_act_pairs += models[r].victim_act_pairs();
    if (options.tracker == TrackerKind::kComet) {
      for (auto& t : trackers[r]) {
        const auto& s = static_cast<CometBankTracker&>(*t).stats();
        stats.rat_hits += s.rat_hits;
        stats.rat_compulsory_misses += s.rat_compulsory_misses;
        stats.rat_capacity_misses += s.rat_capacity_misses;
      }
    }
  }
  return stats;
}

StorageBreakdown storage_model(const CometConfig& config, uint32_t banks) {
  const uint64_t n_pr = derive_npr(config.n_rh, config.k_reset);
  const uint32_t w = std::bit_width(n_pr);  // ceil(log2(n_pr + 1))
  const uint64_t ct_bits = static_cast<uint64_t>(banks) * config.n_hash * config.n_counters * w;
  const uint64_t rat_bits =
      static_cast<uint64_t>(banks) * config.n_rat_entries * (config.row_bits + w);
  StorageBreakdown out;
  out.counter_bits = w;
  out.ct_kib = static_cast<double>(ct_bits) / 8.0 / 1024.0;
  out.rat_kib = static_cast<double>(rat_bits) / 8.0 / 1024.0;
  out.total_kib = out.ct_kib + out.rat_kib;
  return out;
}

double FpResult::relative_reduction() const {
  if (fp_cbf == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (fp_cbf - fp_comet) / fp_cbf;
}

FpResult fp_experiment(uint32_t unique_rows, uint32_t total_acts, uint64_t threshold,
                       uint32_t trials, uint64_t seed, uint32_t n_hash, uint32_t n_counters,
                       uint32_t row_bits) {
  if (unique_rows < 1) throw std::invalid_argument("fp_experiment: unique_rows must be >= 1");
  if (trials < 1) throw std::invalid_argument("fp_experiment: trials must be >= 1");
  const uint32_t row_space = 1u << row_bits;
  if (unique_rows > row_space) throw std::invalid_argument("fp_experiment: too many unique rows");

  std::mt19937_64 master(seed);
  double sum_comet = 0.0;
  double sum_cbf = 0.0;
  for (uint32_t trial = 0; trial < trials; ++trial) {
    const uint64_t trial_seed = master();
    std::mt19937_64 rng(trial_seed);

    std::vector<RowId> rows;
    rows.reserve(unique_rows);
    std::unordered_set<RowId> picked;
    while (picked.size() < unique_rows) {
      const RowId r = static_cast<RowId>(rng() % row_space);
      if (picked.insert(r).second) rows.push_back(r);
    }

    SketchTable part(n_hash, n_counters, threshold,
                     HashFamily::seeded(n_hash, n_counters, trial_seed ^ 0xA5A5A5A5ull),
                     SketchLayout::kPartitioned, UpdateRule::kConservative);
    SketchTable shared(n_hash, n_counters, threshold,
                       HashFamily::seeded(n_hash, n_hash * n_counters, trial_seed ^ 0xA5A5A5A5ull),
                       SketchLayout::kShared, UpdateRule::kConservative);

    std::vector<uint32_t> true_count(unique_rows, 0);
    for (uint32_t a = 0; a < total_acts; ++a) {
      const uint32_t i = static_cast<uint32_t>(rng() % unique_rows);
      ++true_count[i];
      part.increment(rows[i]);
      shared.increment(rows[i]);
    }

    uint64_t touched = 0, fp_part = 0, fp_shared = 0;
    for (uint32_t i = 0; i < unique_rows; ++i) {
      if (true_count[i] == 0) continue;
      ++touched;
      if (true_count[i] < threshold) {
        if (part.estimate(rows[i]) >= threshold) ++fp_part;
        if (shared.estimate(rows[i]) >= threshold) ++fp_shared;
      }
    }
    if (touched > 0) {
      sum_comet += static_cast<double>(fp_part) / touched;
      sum_cbf += static_cast<double>(fp_shared) / touched;
    }
  }
  return {sum_comet / trials, sum_cbf / trials};
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "ct") return SweepAxis::kCounterTable;
  if (name == "rat") return SweepAxis::kRatEntries;
  if (name == "history") return SweepAxis::kHistory;
  if (name == "k") return SweepAxis::kResetDivisor;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

std::vector<SweepPoint> make_sweep_grid(SweepAxis axis, const CometConfig& base) {
  std::vector<SweepPoint> grid;
  auto add = [&](const std::string& id, CometConfig c) { grid.push_back({id, std::move(c)}); };
  switch (axis) {
    case SweepAxis::kCounterTable:
      for (uint32_t m : {64u, 128u, 256u, 512u, 1024u}) {
        CometConfig c = base;
        c.n_counters = m;
        add("ct_h" + std::to_string(c.n_hash) + "_c" + std::to_string(m), c);
      }
      break;
    case SweepAxis::kRatEntries:
      for (uint32_t n : {16u, 32u, 64u, 128u, 256u}) {
        CometConfig c = base;
        c.n_rat_entries = n;
        add("rat_" + std::to_string(n), c);
      }
      break;
    case SweepAxis::kHistory:
      for (auto [len, frac] : std::initializer_list<std::pair<uint32_t, double>>{
               {64, 0.25}, {128, 0.25}, {256, 0.25}, {256, 0.5}, {256, 0.75}}) {
        CometConfig c = base;
        c.history_len = len;
        c.eprt_fraction = frac;
        add("hist_" + std::to_string(len) + "_eprt" + std::to_string(static_cast<int>(frac * 100)),
            c);
      }
      break;
    case SweepAxis::kResetDivisor:
      for (uint32_t k : {1u, 2u, 3u, 4u, 5u}) {
        CometConfig c = base;
        c.k_reset = k;
        add("k_" + std::to_string(k), c);
      }
      break;
  }
  return grid;
}

std::string sweep(const std::vector<SweepPoint>& grid,
                  const std::vector<std::pair<std::string, Trace>>& traces,
                  const Geometry& geometry, const RunOptions& options, uint32_t jobs) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  struct Job {
    const SweepPoint* point;
    const std::pair<std::string, Trace>* trace;
  };
  std::vector<Job> jobs_list;
  for (const auto& p : grid)
    for (const auto& t : traces) jobs_list.push_back({&p, &t});

  std::vector<std::string> rows(jobs_list.size());
  const uint32_t workers = std::max(1u, std::min<uint32_t>(jobs, jobs_list.size()));
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs_list.size()) break;
      const Job& j = jobs_list[i];
      RunStats s = run(j.trace->second, j.point->config, geometry, options);
      rows[i] = s.csv_row(j.point->config_id, to_string(options.tracker), j.trace->first);
    }
  };
  std::vector<std::future<void>> futures;
  for (uint32_t w = 1; w < workers; ++w) futures.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : futures) f.get();

  std::string csv = RunStats::csv_header() + "\n";
  for (const auto& r : rows) csv += r + "\n";
  return csv;
}

}  // namespace comet
