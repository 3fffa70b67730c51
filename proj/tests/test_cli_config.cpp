#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "comet/cli_config.hpp"

using namespace comet;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& text)
      : path("/tmp/comet_cfg_" + name) {
    std::ofstream out(path);
    out << text;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("key=value files parse with comments and whitespace") {
  TempFile f("ok.cfg",
             "# tracker settings\n"
             "nrh = 500\n"
             "\n"
             "  k=2\n"
             "count_mitigation_acts = true\n");
  const auto kv = parse_config_file(f.path);
  CHECK(kv.size() == 3);
  CHECK(kv.at("nrh") == "500");
  CHECK(kv.at("k") == "2");

  CometConfig c;
  Geometry g;
  apply_config(kv, c, g);
  CHECK(c.n_rh == 500);
  CHECK(c.k_reset == 2);
  CHECK(c.count_mitigation_acts);
  CHECK(c.n_counters == 512);  // untouched keys keep their defaults
}

TEST_CASE("every documented key is applied") {
  TempFile f("all.cfg",
             "nrh=250\nk=4\nn_hash=2\nn_counters=256\nrat_entries=64\nhistory_len=128\n"
             "eprt_fraction=0.5\nblast_radius=2\nrow_bits=16\ntrefw_ns=32000000\n"
             "trefi_ns=3900\ncount_mitigation_acts=false\nseed=99\nranks=1\nbanks_per_rank=8\n");
  CometConfig c;
  Geometry g;
  apply_config(parse_config_file(f.path), c, g);
  CHECK(c.n_rh == 250);
  CHECK(c.k_reset == 4);
  CHECK(c.n_hash == 2);
  CHECK(c.n_counters == 256);
  CHECK(c.n_rat_entries == 64);
  CHECK(c.history_len == 128);
  CHECK(c.eprt_fraction == 0.5);
  CHECK(c.blast_radius == 2);
  CHECK(c.row_bits == 16);
  CHECK(c.trefw_ns == 32'000'000);
  CHECK(c.trefi_ns == 3'900);
  CHECK_FALSE(c.count_mitigation_acts);
  CHECK(c.rng_seed == 99);
  CHECK(g.ranks == 1);
  CHECK(g.banks_per_rank == 8);
  CHECK(g.rows_per_bank == (1u << 16));  // follows row_bits
}

TEST_CASE("unknown keys and bad values are rejected") {
  CometConfig c;
  Geometry g;
  CHECK_THROWS_WITH_AS(apply_config({{"nope", "1"}}, c, g), doctest::Contains("unknown config key"),
                       std::runtime_error);
  CHECK_THROWS(apply_config({{"nrh", "12abc"}}, c, g));
  CHECK_THROWS(apply_config({{"count_mitigation_acts", "maybe"}}, c, g));
}

TEST_CASE("syntax errors carry the line number") {
  TempFile f("bad.cfg", "nrh=500\nthis line has no equals\n");
  CHECK_THROWS_WITH_AS(parse_config_file(f.path), doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("missing file raises an error") {
  CHECK_THROWS(parse_config_file("/tmp/comet_cfg_missing_file.cfg"));
}

TEST_CASE("config echo lists every effective setting") {
  CometConfig c;
  Geometry g;
  const std::string echo = config_echo(c, g);
  CHECK(echo.find("nrh=1000\n") != std::string::npos);
  CHECK(echo.find("n_counters=512\n") != std::string::npos);
  CHECK(echo.find("banks_per_rank=16\n") != std::string::npos);
  // Round trip: the echo is itself a valid config.
  TempFile f("echo.cfg", echo);
  CometConfig c2;
  Geometry g2;
  apply_config(parse_config_file(f.path), c2, g2);
  CHECK(c2.n_rh == c.n_rh);
  CHECK(c2.eprt_fraction == c.eprt_fraction);
}
