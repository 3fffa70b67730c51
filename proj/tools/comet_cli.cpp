// Command-line front door: trace generation, simulation, security audit,
// storage table, false-positive comparison, and parameter sweeps.
//
// Exit codes: 0 pass, 1 operational error, 2 security/audit violation.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "comet/cli_config.hpp"
#include "comet/experiments.hpp"

using namespace comet;

namespace {

struct CommonOpts {
  CometConfig config;
  Geometry geometry;
  std::string config_file;
};

void add_common_flags(CLI::App* app, CommonOpts& o, bool with_nrh = true) {
  app->add_option("--config", o.config_file, "key=value config file (flags override)");
  if (with_nrh) app->add_option("--nrh", o.config.n_rh, "RowHammer threshold");
  app->add_option("--k", o.config.k_reset, "reset period divisor");
  app->add_option("--n-hash", o.config.n_hash, "CT partitions");
  app->add_option("--n-counters", o.config.n_counters, "counters per partition");
  app->add_option("--rat-entries", o.config.n_rat_entries, "RAT capacity");
  app->add_option("--history-len", o.config.history_len, "RAT-miss history bits");
  app->add_option("--eprt", o.config.eprt_fraction, "early-refresh trigger fraction");
  app->add_option("--blast-radius", o.config.blast_radius, "victim distance");
  app->add_option("--row-bits", o.config.row_bits, "row address bits per bank");
  app->add_option("--seed", o.config.rng_seed, "RNG seed (default from COMET_SEED)");
  app->add_flag("--count-mitigation-acts", o.config.count_mitigation_acts,
                "feed preventive-refresh ACTs back into the tracker");
  app->add_option("--ranks", o.geometry.ranks, "ranks per channel");
  app->add_option("--banks-per-rank", o.geometry.banks_per_rank, "banks per rank");
}

// Config file first, then re-apply flags on top.
void finalize_common(CLI::App* app, CommonOpts& o) {
  if (!o.config_file.empty()) {
    CommonOpts from_file;
    from_file.config.rng_seed = o.config.rng_seed;
    apply_config(parse_config_file(o.config_file), from_file.config, from_file.geometry);
    CometConfig merged = from_file.config;
    Geometry merged_geo = from_file.geometry;
    auto keep = [&](const char* flag) {
      const CLI::Option* opt = app->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    if (keep("--nrh")) merged.n_rh = o.config.n_rh;
    if (keep("--k")) merged.k_reset = o.config.k_reset;
    if (keep("--n-hash")) merged.n_hash = o.config.n_hash;
    if (keep("--n-counters")) merged.n_counters = o.config.n_counters;
    if (keep("--rat-entries")) merged.n_rat_entries = o.config.n_rat_entries;
    if (keep("--history-len")) merged.history_len = o.config.history_len;
    if (keep("--eprt")) merged.eprt_fraction = o.config.eprt_fraction;
    if (keep("--blast-radius")) merged.blast_radius = o.config.blast_radius;
    if (keep("--row-bits")) merged.row_bits = o.config.row_bits;
    if (keep("--seed")) merged.rng_seed = o.config.rng_seed;
    if (keep("--count-mitigation-acts")) merged.count_mitigation_acts = o.config.count_mitigation_acts;
    if (keep("--ranks")) merged_geo.ranks = o.geometry.ranks;
    if (keep("--banks-per-rank")) merged_geo.banks_per_rank = o.geometry.banks_per_rank;
    o.config = merged;
    o.geometry = merged_geo;
  }
  o.geometry.rows_per_bank = o.config.rows_per_bank();
  o.config.validate();
}

int cmd_generate(const std::string& kind, const CommonOpts& o, const std::string& out,
                 uint64_t duration_ns, uint64_t interval_ns, uint64_t acts, uint32_t unique_rows,
                 uint32_t aggressors, uint32_t target_row, uint64_t acts_per_burst) {
  Trace trace;
  if (kind == "uniform") {
    uint64_t ivl = interval_ns;
    if (acts > 0) ivl = duration_ns / acts;
    trace = gen_uniform(o.geometry, duration_ns, ivl, unique_rows, o.config.rng_seed);
  } else if (kind == "hammer") {
    trace = gen_hammer(o.geometry, aggressors, interval_ns, duration_ns);
  } else if (kind == "thrash") {
    const uint64_t n_pr = derive_npr(o.config.n_rh, o.config.k_reset);
    trace = gen_rat_thrash(o.geometry, aggressors, n_pr, interval_ns, duration_ns);
  } else if (kind == "straddle") {
    StraddleParams p;
    p.n_rh = o.config.n_rh;
    p.k_reset = o.config.k_reset;
    p.trefw_ns = o.config.trefw_ns;
    p.trefi_ns = o.config.trefi_ns;
    p.rows_per_bank = o.config.rows_per_bank();
    p.target_row = target_row;
    p.acts_per_burst = acts_per_burst;
    trace = gen_reset_straddle(p);
  } else {
    std::cerr << "unknown generator: " << kind << "\n";
    return 1;
  }
  write_trace(trace, out);
  std::cout << "wrote " << trace.size() << " events to " << out << "\n";
  return 0;
}

void print_summary(const RunStats& s, const CometConfig& c) {
  std::cout << "total_acts            " << s.total_acts << "\n"
            << "preventive_refreshes  " << s.preventive_refreshes << "\n"
            << "early_refreshes       " << s.early_refreshes << "\n"
            << "ref_commands          " << s.ref_commands_issued << "\n"
            << "rat_hits              " << s.rat_hits << "\n"
            << "rat_capacity_misses   " << s.rat_capacity_misses << "\n"
            << "rat_compulsory_misses " << s.rat_compulsory_misses << "\n"
            << "unnecessary_refreshes " << s.unnecessary_refreshes << "\n"
            << "underestimates        " << s.underestimates << "\n"
            << "max_exposure          " << s.max_exposure << " (N_RH " << c.n_rh << ")\n"
            << "exposure_violations   " << s.exposure_violations << "\n";
}

int run_and_report(const Trace& trace, const CommonOpts& o, const RunOptions& ropts,
                   const std::string& trace_name, const std::string& csv_out) {
  RunStats stats = run(trace, o.config, o.geometry, ropts);
  print_summary(stats, o.config);
  if (!csv_out.empty()) {
    std::ofstream out(csv_out);
    if (!out) {
      std::cerr << "cannot open " << csv_out << "\n";
      return 1;
    }
    std::istringstream echo(config_echo(o.config, o.geometry));
    std::string line;
    while (std::getline(echo, line)) out << "# " << line << "\n";
    out << RunStats::csv_header() << "\n"
        << stats.csv_row("default", to_string(ropts.tracker), trace_name) << "\n";
  }
  if (ropts.audit && (stats.underestimates > 0 || stats.exposure_violations > 0)) {
    std::cerr << "AUDIT VIOLATION: " << stats.underestimates << " underestimates, "
              << stats.exposure_violations << " exposure violations (max exposure "
              << stats.max_exposure << ", N_RH " << o.config.n_rh << ")\n";
    return 2;
  }
  return 0;
}

int cmd_audit_suite(CommonOpts o) {
  int rc = 0;
  for (uint64_t nrh : {125ull, 250ull, 500ull, 1000ull}) {
    o.config.n_rh = nrh;
    const uint64_t n_pr = derive_npr(nrh, o.config.k_reset);
    RunOptions ropts;
    ropts.tracker = TrackerKind::kComet;
    ropts.audit = true;

    std::vector<std::pair<std::string, Trace>> suite;
    StraddleParams sp;
    sp.n_rh = nrh;
    sp.k_reset = o.config.k_reset;
    sp.trefw_ns = o.config.trefw_ns;
    sp.trefi_ns = o.config.trefi_ns;
    sp.rows_per_bank = o.config.rows_per_bank();
    suite.emplace_back("straddle", gen_reset_straddle(sp));
    suite.emplace_back("thrash",
                       gen_rat_thrash(o.geometry, 256, n_pr, 20, 16'000'000));
    suite.emplace_back("hammer", gen_hammer(o.geometry, 8, 20, 16'000'000));
    suite.emplace_back("uniform", gen_uniform(o.geometry, 64'000'000, 6'400, 100,
                                              o.config.rng_seed));
    for (const auto& [name, trace] : suite) {
      RunStats stats = run(trace, o.config, o.geometry, ropts);
      const bool ok = stats.underestimates == 0 && stats.max_exposure < nrh;
      std::cout << (ok ? "PASS" : "FAIL") << " nrh=" << nrh << " trace=" << name
                << " acts=" << stats.total_acts << " max_exposure=" << stats.max_exposure
                << " underestimates=" << stats.underestimates << "\n";
      if (!ok) rc = 2;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CoMeT RowHammer-mitigation simulator"};
  app.require_subcommand(1);

  CommonOpts common;
  if (const char* env = std::getenv("COMET_SEED")) common.config.rng_seed = std::strtoull(env, nullptr, 10);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a trace file");
  std::string gen_kind, gen_out = "trace.trc";
  uint64_t duration_ms = 64, duration_ns_opt = 0, interval_ns = 20, gen_acts = 0;
  uint32_t unique_rows = 100, aggressors = 8, target_row = 40;
  uint64_t acts_per_burst = 0;
  gen->add_option("kind", gen_kind, "uniform | hammer | thrash | straddle")->required();
  gen->add_option("--out", gen_out, "output trace path (.gz for gzip)");
  gen->add_option("--duration-ms", duration_ms, "trace duration in ms");
  gen->add_option("--duration-ns", duration_ns_opt, "trace duration in ns (overrides --duration-ms)");
  gen->add_option("--interval-ns", interval_ns, "ACT interval in ns");
  gen->add_option("--acts", gen_acts, "uniform: total ACT count (sets the interval)");
  gen->add_option("--unique-rows", unique_rows, "uniform: rows per bank");
  gen->add_option("--aggressors", aggressors, "hammer/thrash: aggressor rows per bank");
  gen->add_option("--target-row", target_row, "straddle: aggressor row");
  gen->add_option("--acts-per-burst", acts_per_burst, "straddle: burst length (0 = N_PR-1)");
  add_common_flags(gen, common);

  // simulate
  auto* sim = app.add_subcommand("simulate", "replay a trace through a tracker");
  std::string sim_trace, sim_tracker = "comet", sim_csv;
  bool sim_audit = false;
  sim->add_option("--trace", sim_trace, "input trace")->required();
  sim->add_option("--tracker", sim_tracker, "comet | perrow | graphene | para | cbf | none");
  sim->add_option("--out", sim_csv, "CSV output path");
  sim->add_flag("--audit", sim_audit, "run the exposure/underestimate audit");
  add_common_flags(sim, common);

  // storage
  auto* sto = app.add_subcommand("storage", "print the CT/RAT storage table");
  std::vector<uint64_t> sto_nrh = {1000, 500, 250, 125};
  std::string sto_format = "table";
  sto->add_option("--nrh", sto_nrh, "RowHammer thresholds");
  sto->add_option("--format", sto_format, "table | csv");
  add_common_flags(sto, common, /*with_nrh=*/false);

  // fpcompare
  auto* fpc = app.add_subcommand("fpcompare", "partitioned vs shared-array FP rates");
  uint32_t fp_unique = 100, fp_trials = 100, fp_acts = 10000;
  uint64_t fp_threshold = 125;
  fpc->add_option("--unique-rows", fp_unique, "unique rows per trial");
  fpc->add_option("--trials", fp_trials, "trial count");
  fpc->add_option("--acts", fp_acts, "activations per trial");
  fpc->add_option("--threshold", fp_threshold, "flagging threshold");
  add_common_flags(fpc, common);

  // sweep
  auto* swp = app.add_subcommand("sweep", "parameter sweep over a trace set");
  std::string swp_axis, swp_out, swp_tracker = "comet";
  std::vector<std::string> swp_traces;
  uint32_t swp_jobs = 1;
  swp->add_option("--axis", swp_axis, "ct | rat | history | k")->required();
  swp->add_option("--trace", swp_traces, "input trace(s)")->required();
  swp->add_option("--tracker", swp_tracker, "tracker kind");
  swp->add_option("--out", swp_out, "CSV output path (default stdout)");
  swp->add_option("--jobs", swp_jobs, "parallel workers");
  add_common_flags(swp, common);

  // audit
  auto* aud = app.add_subcommand("audit", "run the adversarial audit suite");
  std::string aud_suite = "all";
  aud->add_option("--suite", aud_suite, "suite name (all)");
  add_common_flags(aud, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      finalize_common(gen, common);
      const uint64_t dur = duration_ns_opt > 0 ? duration_ns_opt : duration_ms * 1'000'000;
      return cmd_generate(gen_kind, common, gen_out, dur, interval_ns, gen_acts, unique_rows,
                          aggressors, target_row, acts_per_burst);
    }
    if (sim->parsed()) {
      finalize_common(sim, common);
      RunOptions ropts;
      ropts.tracker = tracker_kind_from_string(sim_tracker);
      ropts.audit = sim_audit;
      return run_and_report(read_trace(sim_trace), common, ropts, sim_trace, sim_csv);
    }
    if (sto->parsed()) {
      finalize_common(sto, common);
      if (sto_format == "csv") {
        std::printf("nrh,counter_bits,ct_kib,rat_kib,total_kib\n");
      } else {
        std::printf("%8s %6s %8s %8s %9s\n", "N_RH", "bits", "CT KiB", "RAT KiB", "total KiB");
      }
      for (uint64_t nrh : sto_nrh) {
        CometConfig c = common.config;
        c.n_rh = nrh;
        const StorageBreakdown s = storage_model(c);
        if (sto_format == "csv") {
          std::printf("%llu,%u,%.1f,%.1f,%.1f\n", static_cast<unsigned long long>(nrh),
                      s.counter_bits, s.ct_kib, s.rat_kib, s.total_kib);
        } else {
          std::printf("%8llu %6u %8.1f %8.1f %9.1f\n", static_cast<unsigned long long>(nrh),
                      s.counter_bits, s.ct_kib, s.rat_kib, s.total_kib);
        }
      }
      return 0;
    }
    if (fpc->parsed()) {
      finalize_common(fpc, common);
      const FpResult r =
          fp_experiment(fp_unique, fp_acts, fp_threshold, fp_trials, common.config.rng_seed,
                        common.config.n_hash, common.config.n_counters, common.config.row_bits);
      std::printf("fp_comet=%.6f fp_cbf=%.6f relative_reduction=%.1f%%\n", r.fp_comet, r.fp_cbf,
                  100.0 * r.relative_reduction());
      return 0;
    }
    if (swp->parsed()) {
      finalize_common(swp, common);
      RunOptions ropts;
      ropts.tracker = tracker_kind_from_string(swp_tracker);
      ropts.audit = false;
      std::vector<std::pair<std::string, Trace>> traces;
      for (const auto& path : swp_traces) traces.emplace_back(path, read_trace(path));
      const auto grid = make_sweep_grid(sweep_axis_from_string(swp_axis), common.config);
      const std::string csv = sweep(grid, traces, common.geometry, ropts, swp_jobs);
      if (swp_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(swp_out);
        if (!out) throw std::runtime_error("cannot open " + swp_out);
        out << csv;
      }
      return 0;
    }
    if (aud->parsed()) {
      finalize_common(aud, common);
      if (aud_suite != "all") throw std::runtime_error("unknown suite: " + aud_suite);
      return cmd_audit_suite(common);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
