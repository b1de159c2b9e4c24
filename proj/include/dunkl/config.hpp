#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dunkl/kernels.hpp"
#include "dunkl/measure.hpp"

namespace dunkl {

struct GroupConfig {
  std::string preset = "z2^n";  // trivial | z2^n | dihedral-3|4|6 | explicit
  int dimension = 1;
  std::vector<double> kappa{1.0};  // per coordinate (z2^n) / class values (dihedral)
  std::vector<std::vector<double>> roots;  // explicit preset
  std::vector<int> positive;
  std::vector<double> root_kappa;
  int max_order = 1024;
};

struct GridConfig {
  double box_halfwidth = 4.0;
  int cells = 64;
};

/// Full run configuration; every artifact embeds the config it ran with.
struct RunConfig {
  GroupConfig group;
  GridConfig grid;
  KernelConfig kernel;
  double measure_tol = 1e-3;
  std::uint64_t seed = 1;
  int workers = 1;
  bool strict = false;
  std::string out_dir = ".";
  nlohmann::json raw;  // subcommand-specific sections, validated on use
};

/// Parses and validates; errors name the offending field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

RootSystemSpec build_spec(const GroupConfig& g);

/// Short label like "z2-1" / "z2^2-0.5" / "trivial-1d" used to select frozen
/// verify thresholds.
std::string preset_label(const GroupConfig& g);

nlohmann::json config_to_json(const RunConfig& c);

}  // namespace dunkl
