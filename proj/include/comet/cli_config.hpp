#pragma once

#include <string>
#include <unordered_map>

#include "comet/comet_tracker.hpp"
#include "comet/dram_model.hpp"

namespace comet {

// Flat key=value configuration file ('#' comments, blank lines allowed).
// Unknown keys are rejected.
std::unordered_map<std::string, std::string> parse_config_file(const std::string& path);

// Applies file keys onto a CometConfig/Geometry pair. Throws on unknown
// keys or unparsable values.
void apply_config(const std::unordered_map<std::string, std::string>& kv, CometConfig& config,
                  Geometry& geometry);

// One "key=value" line per effective setting, for echoing into outputs.
std::string config_echo(const CometConfig& config, const Geometry& geometry);

}  // namespace comet
