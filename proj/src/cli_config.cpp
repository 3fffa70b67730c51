#include "comet/cli_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace comet {

std::unordered_map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::unordered_map<std::string, std::string> kv;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const size_t eq = line.find('=', first);
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const size_t a = s.find_first_not_of(" \t\r");
      const size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(first, eq - first));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_config(const std::unordered_map<std::string, std::string>& kv, CometConfig& config,
                  Geometry& geometry) {
  for (const auto& [key, value] : kv) {
    auto as_u64 = [&] {
      size_t pos = 0;
      const uint64_t v = std::stoull(value, &pos);
      if (pos != value.size()) throw std::runtime_error("bad value for " + key + ": " + value);
      return v;
    };
    auto as_double = [&] {
      size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::runtime_error("bad value for " + key + ": " + value);
      return v;
    };
    auto as_bool = [&] {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw std::runtime_error("bad boolean for " + key + ": " + value);
    };
    if (key == "nrh") config.n_rh = as_u64();
    else if (key == "k") config.k_reset = static_cast<uint32_t>(as_u64());
    else if (key == "n_hash") config.n_hash = static_cast<uint32_t>(as_u64());
    else if (key == "n_counters") config.n_counters = static_cast<uint32_t>(as_u64());
    else if (key == "rat_entries") config.n_rat_entries = static_cast<uint32_t>(as_u64());
    else if (key == "history_len") config.history_len = static_cast<uint32_t>(as_u64());
    else if (key == "eprt_fraction") config.eprt_fraction = as_double();
    else if (key == "blast_radius") config.blast_radius = static_cast<uint32_t>(as_u64());
    else if (key == "row_bits") config.row_bits = static_cast<uint32_t>(as_u64());
    else if (key == "trefw_ns") config.trefw_ns = as_u64();
    else if (key == "trefi_ns") config.trefi_ns = as_u64();
    else if (key == "count_mitigation_acts") config.count_mitigation_acts = as_bool();
    else if (key == "seed") config.rng_seed = as_u64();
    else if (key == "ranks") geometry.ranks = static_cast<uint32_t>(as_u64());
    else if (key == "banks_per_rank") geometry.banks_per_rank = static_cast<uint32_t>(as_u64());
    else throw std::runtime_error("unknown config key: " + key);
  }
  geometry.rows_per_bank = config.rows_per_bank();
}

std::string config_echo(const CometConfig& c, const Geometry& g) {
  std::ostringstream os;
  os << "nrh=" << c.n_rh << "\nk=" << c.k_reset << "\nn_hash=" << c.n_hash
     << "\nn_counters=" << c.n_counters << "\nrat_entries=" << c.n_rat_entries
     << "\nhistory_len=" << c.history_len << "\neprt_fraction=" << c.eprt_fraction
     << "\nblast_radius=" << c.blast_radius << "\nrow_bits=" << c.row_bits
     << "\ntrefw_ns=" << c.trefw_ns << "\ntrefi_ns=" << c.trefi_ns
     << "\ncount_mitigation_acts=" << (c.count_mitigation_acts ? "true" : "false")
     << "\nseed=" << c.rng_seed << "\nranks=" << g.ranks
     << "\nbanks_per_rank=" << g.banks_per_rank << "\n";
  return os.str();
}

}  // namespace comet
