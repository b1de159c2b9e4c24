#include "dunkl/config.hpp"

#include <fstream>

namespace dunkl {

using nlohmann::json;

namespace {

double require_nonneg(const json& j, const std::string& field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number())
    throw InvalidArgument(field + ": must be a number");
  double v = j[field].get<double>();
  if (v < 0.0) throw InvalidArgument(field + ": must be >= 0");
  return v;
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  c.raw = j;
  if (j.contains("group")) {
    const json& g = j["group"];
    if (g.contains("preset")) c.group.preset = g["preset"].get<std::string>();
    if (g.contains("dimension")) {
      c.group.dimension = g["dimension"].get<int>();
      if (c.group.dimension < 1 || c.group.dimension > 3)
        throw InvalidArgument("group.dimension: must be in {1,2,3}");
    }
    if (g.contains("kappa")) {
      if (g["kappa"].is_number()) {
        c.group.kappa = {g["kappa"].get<double>()};
      } else if (g["kappa"].is_array()) {
        c.group.kappa = g["kappa"].get<std::vector<double>>();
      } else {
        throw InvalidArgument("group.kappa: must be a number or an array");
      }
      for (double k : c.group.kappa)
        if (!(k >= 0.0)) throw InvalidArgument("group.kappa: entries must be >= 0");
    }
    if (g.contains("roots")) {
      c.group.roots = g["roots"].get<std::vector<std::vector<double>>>();
      if (!g.contains("positive") || !g.contains("root_kappa"))
        throw InvalidArgument(
            "group.roots: explicit systems need group.positive and group.root_kappa");
      c.group.positive = g["positive"].get<std::vector<int>>();
      c.group.root_kappa = g["root_kappa"].get<std::vector<double>>();
    }
    if (g.contains("max_order")) {
      c.group.max_order = g["max_order"].get<int>();
      if (c.group.max_order < 2)
        throw InvalidArgument("group.max_order: must be >= 2");
    }
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (g.contains("box_halfwidth")) {
      c.grid.box_halfwidth = g["box_halfwidth"].get<double>();
      if (!(c.grid.box_halfwidth > 0))
        throw InvalidArgument("grid.box_halfwidth: must be > 0");
    }
    if (g.contains("cells")) {
      c.grid.cells = g["cells"].get<int>();
      if (c.grid.cells < 2 || c.grid.cells > 4096)
        throw InvalidArgument("grid.cells: must be in [2, 4096]");
    }
  }
  if (j.contains("quadrature")) {
    const json& q = j["quadrature"];
    c.measure_tol = require_nonneg(q, "measure_tol", c.measure_tol);
    if (c.measure_tol == 0.0) throw InvalidArgument("quadrature.measure_tol: must be > 0");
    c.kernel.quad_rel_tol =
        require_nonneg(q, "kernel_rel_tol", c.kernel.quad_rel_tol);
    c.kernel.sub_rel_tol =
        require_nonneg(q, "subordination_rel_tol", c.kernel.sub_rel_tol);
    if (q.contains("mu_nodes")) c.kernel.mu_nodes = q["mu_nodes"].get<int>();
    if (c.kernel.mu_nodes < 4) throw InvalidArgument("quadrature.mu_nodes: must be >= 4");
    if (q.contains("sing_abs")) c.kernel.sing_abs = q["sing_abs"].get<double>();
    if (q.contains("sing_rel")) c.kernel.sing_rel = q["sing_rel"].get<double>();
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) {
    c.workers = j["workers"].get<int>();
    if (c.workers < 1) throw InvalidArgument("workers: must be >= 1");
  }
  if (j.contains("strict")) c.strict = j["strict"].get<bool>();
  if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config: parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

RootSystemSpec build_spec(const GroupConfig& g) {
  if (g.preset == "trivial") return RootSystemSpec::trivial(g.dimension);
  if (g.preset == "z2^n") {
    std::vector<double> kappa = g.kappa;
    if (kappa.empty()) throw InvalidArgument("group.kappa: required for z2^n");
    if (static_cast<int>(kappa.size()) == 1 && g.dimension > 1)
      kappa.assign(g.dimension, kappa[0]);
    if (static_cast<int>(kappa.size()) != g.dimension)
      throw InvalidArgument("group.kappa: need one value per coordinate");
    return RootSystemSpec::z2n(kappa);
  }
  if (g.preset.rfind("dihedral-", 0) == 0) {
    int m = std::stoi(g.preset.substr(9));
    if (g.kappa.empty()) throw InvalidArgument("group.kappa: required for dihedral");
    double ke = g.kappa[0];
    double ko = g.kappa.size() > 1 ? g.kappa[1] : g.kappa[0];
    return RootSystemSpec::dihedral(m, ke, ko);
  }
  if (g.preset == "explicit") {
    if (g.roots.empty()) throw InvalidArgument("group.roots: required for explicit");
    std::vector<Vec> roots;
    for (const auto& r : g.roots) {
      if (static_cast<int>(r.size()) != g.dimension)
        throw InvalidArgument("group.roots: root dimension mismatch");
      roots.push_back(Eigen::Map<const Vec>(r.data(), r.size()));
    }
    return RootSystemSpec(g.dimension, roots, g.positive, g.root_kappa);
  }
  throw InvalidArgument("group.preset: unknown preset " + g.preset);
}

std::string preset_label(const GroupConfig& g) {
  auto kappa_tag = [&]() {
    double k = g.kappa.empty() ? 0.0 : g.kappa[0];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", k);
    return std::string(buf);
  };
  if (g.preset == "trivial") return "trivial-" + std::to_string(g.dimension) + "d";
  if (g.preset == "z2^n") {
    if (g.dimension == 1) return "z2-" + kappa_tag();
    return "z2^" + std::to_string(g.dimension) + "-" + kappa_tag();
  }
  return g.preset + "-" + kappa_tag();
}

nlohmann::json config_to_json(const RunConfig& c) {
  json j;
  j["group"]["preset"] = c.group.preset;
  j["group"]["dimension"] = c.group.dimension;
  j["group"]["kappa"] = c.group.kappa;
  j["grid"]["box_halfwidth"] = c.grid.box_halfwidth;
  j["grid"]["cells"] = c.grid.cells;
  j["quadrature"]["measure_tol"] = c.measure_tol;
  j["quadrature"]["kernel_rel_tol"] = c.kernel.quad_rel_tol;
  j["quadrature"]["subordination_rel_tol"] = c.kernel.sub_rel_tol;
  j["quadrature"]["mu_nodes"] = c.kernel.mu_nodes;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["strict"] = c.strict;
  j["out"] = c.out_dir;
  return j;
}

}  // namespace dunkl
