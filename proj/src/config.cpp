#include "ccrlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ccrlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& path,
                       const std::string& what) {
  throw ConfigError("config " + origin + ": field '" + path + "': " + what);
}

const json& require(const json& j, const char* key, const std::string& origin,
                    const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(origin, path + key, "missing");
  return *it;
}

template <class T>
T as(const json& j, const std::string& origin, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    fail(origin, path, e.what());
  }
}

LatticeVector as_lattice(const json& j, const std::string& origin, const std::string& path) {
  if (!j.is_array()) fail(origin, path, "expected an array of integers");
  LatticeVector out;
  for (const auto& v : j) out.push_back(as<std::int64_t>(v, origin, path));
  return out;
}

Eigen::MatrixXd as_row_matrix(const json& j, int dim, const std::string& origin,
                              const std::string& path) {
  if (!j.is_array() || j.empty()) fail(origin, path, "expected a nonempty array of rows");
  Eigen::MatrixXd rows(static_cast<int>(j.size()), dim);
  for (int r = 0; r < rows.rows(); ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(origin, path, "each row must have length " + std::to_string(dim));
    for (int c = 0; c < dim; ++c)
      rows(r, c) = as<double>(row[static_cast<std::size_t>(c)], origin, path);
  }
  return rows;
}

PolyhedralCone parse_cone(const json& j, const std::string& origin) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "orthant1") return PolyhedralCone::orthant(1);
    if (name == "orthant2") return PolyhedralCone::orthant(2);
    if (name == "orthant3") return PolyhedralCone::orthant(3);
    if (name == "diagonal2") return PolyhedralCone::diagonal2();
    fail(origin, "grid.cone", "unknown cone preset '" + name + "'");
  }
  const int dim = as<int>(require(j, "dimension", origin, "grid.cone."), origin,
                          "grid.cone.dimension");
  const Eigen::MatrixXd gens =
      as_row_matrix(require(j, "generators", origin, "grid.cone."), dim, origin,
                    "grid.cone.generators");
  const Eigen::MatrixXd normals =
      as_row_matrix(require(j, "normals", origin, "grid.cone."), dim, origin,
                    "grid.cone.normals");
  try {
    return PolyhedralCone(gens.transpose(), normals);
  } catch (const std::exception& e) {
    fail(origin, "grid.cone", e.what());
  }
}

LevyMeasure parse_levy(const json& j, const std::string& origin, const std::string& path) {
  const std::string family =
      as<std::string>(require(j, "family", origin, path + "."), origin, path + ".family");
  try {
    if (family == "atomic") {
      std::vector<std::pair<double, double>> atoms;
      for (const auto& atom : require(j, "atoms", origin, path + ".")) {
        if (!atom.is_array() || atom.size() != 2)
          fail(origin, path + ".atoms", "each atom is [r, weight]");
        atoms.emplace_back(atom[0].get<double>(), atom[1].get<double>());
      }
      return LevyMeasure::atomic(std::move(atoms));
    }
    if (family == "exponential") {
      return LevyMeasure::exponential(
          as<double>(require(j, "mass", origin, path + "."), origin, path + ".mass"),
          as<double>(require(j, "rate", origin, path + "."), origin, path + ".rate"));
    }
    if (family == "truncated-gamma") {
      return LevyMeasure::truncated_gamma(
          as<double>(require(j, "shape", origin, path + "."), origin, path + ".shape"),
          as<double>(require(j, "rate", origin, path + "."), origin, path + ".rate"),
          as<double>(require(j, "r_min", origin, path + "."), origin, path + ".r_min"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(origin, path, e.what());
  }
  fail(origin, path + ".family", "unknown family '" + family + "'");
}

LabelSpec parse_label(const json& j, const std::string& origin, const std::string& path) {
  LabelSpec spec;
  spec.fiber = as_lattice(require(j, "fiber", origin, path + "."), origin, path + ".fiber");
  if (j.contains("cells")) {
    spec.preset = "cells";
    for (const auto& cell : j["cells"]) {
      if (!cell.is_array() || cell.size() != 3)
        fail(origin, path + ".cells", "each entry is [cell_index, re, im]");
      spec.cells.emplace_back(cell[0].get<std::int64_t>(), cell[1].get<double>(),
                              cell[2].get<double>());
    }
    return spec;
  }
  spec.preset = as<std::string>(require(j, "preset", origin, path + "."), origin,
                                path + ".preset");
  if (spec.preset != "indicator" && spec.preset != "oscillation")
    fail(origin, path + ".preset", "unknown preset '" + spec.preset + "'");
  spec.from = as_lattice(require(j, "from", origin, path + "."), origin, path + ".from");
  spec.to = as_lattice(require(j, "to", origin, path + "."), origin, path + ".to");
  if (j.contains("value")) {
    const auto& v = j["value"];
    if (!v.is_array() || v.size() != 2) fail(origin, path + ".value", "expected [re, im]");
    spec.value = Complex(v[0].get<double>(), v[1].get<double>());
  }
  if (j.contains("frequency")) spec.frequency = j["frequency"].get<double>();
  return spec;
}

ExperimentConfig parse(const json& j, const std::string& origin) {
  ExperimentConfig cfg;
  cfg.seed = as<std::uint64_t>(require(j, "seed", origin, ""), origin, "seed");
  if (j.contains("n")) cfg.n = as<std::int64_t>(j["n"], origin, "n");
  if (j.contains("workers")) cfg.workers = as<int>(j["workers"], origin, "workers");
  if (j.contains("output_dir"))
    cfg.output_dir = as<std::string>(j["output_dir"], origin, "output_dir");

  const json& grid = require(j, "grid", origin, "");
  const PolyhedralCone cone = parse_cone(require(grid, "cone", origin, "grid."), origin);
  const LatticeVector cells =
      as_lattice(require(grid, "cells", origin, "grid."), origin, "grid.cells");
  const double step = as<double>(require(grid, "step", origin, "grid."), origin, "grid.step");
  double scale = 1.0;
  if (grid.contains("intensity_scale"))
    scale = as<double>(grid["intensity_scale"], origin, "grid.intensity_scale");
  try {
    cfg.grid = Grid::make(cone, cells, step, scale);
  } catch (const std::exception& e) {
    fail(origin, "grid", e.what());
  }

  if (j.contains("levy")) {
    const json& levy = j["levy"];
    if (!levy.is_object()) fail(origin, "levy", "expected an object of named measures");
    for (auto it = levy.begin(); it != levy.end(); ++it)
      cfg.levy.emplace_back(it.key(), parse_levy(it.value(), origin, "levy." + it.key()));
  }

  if (j.contains("suites")) {
    for (const auto& s : j["suites"])
      cfg.suites.push_back(as<std::string>(s, origin, "suites"));
  } else {
    cfg.suites = {"all"};
  }

  if (j.contains("suite_params")) {
    const json& params = j["suite_params"];
    if (!params.is_object()) fail(origin, "suite_params", "expected an object");
    for (auto it = params.begin(); it != params.end(); ++it) {
      SuiteParams p = cfg.params_for("");
      const std::string path = "suite_params." + it.key();
      if (it.value().contains("n")) p.n = as<std::int64_t>(it.value()["n"], origin, path);
      if (it.value().contains("seed"))
        p.seed = as<std::uint64_t>(it.value()["seed"], origin, path);
      if (it.value().contains("workers"))
        p.workers = as<int>(it.value()["workers"], origin, path);
      if (it.value().contains("corpus"))
        p.corpus = as<std::string>(it.value()["corpus"], origin, path);
      cfg.suite_params[it.key()] = p;
    }
  }

  if (j.contains("labels")) {
    const json& labels = j["labels"];
    if (!labels.is_object()) fail(origin, "labels", "expected an object of named labels");
    for (auto it = labels.begin(); it != labels.end(); ++it)
      cfg.labels[it.key()] = parse_label(it.value(), origin, "labels." + it.key());
  }
  return cfg;
}

}  // namespace

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("config: cannot open " + path);
  std::ostringstream text;
  text << file.rdbuf();
  return load_json_text(text.str(), path);
}

ExperimentConfig ExperimentConfig::load_json_text(const std::string& text,
                                                  const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + origin + ": " + e.what());
  }
  return parse(j, origin);
}

ExperimentConfig ExperimentConfig::builtin_default() {
  ExperimentConfig cfg;
  cfg.seed = 20260810;
  cfg.n = 100000;
  cfg.workers = 2;
  cfg.output_dir = "out";
  cfg.grid = Grid::make(PolyhedralCone::orthant(1), {16}, 0.25, 1.0);
  cfg.levy.emplace_back("atom1", LevyMeasure::atomic({{1.0, 1.0}}));
  cfg.levy.emplace_back("atom3",
                        LevyMeasure::atomic({{0.5, 0.4}, {1.0, 0.4}, {2.0, 0.2}}));
  cfg.levy.emplace_back("exp1", LevyMeasure::exponential(1.0, 1.0));
  cfg.levy.emplace_back("tgamma", LevyMeasure::truncated_gamma(1.0, 1.0, 0.05));
  cfg.suites = {"all"};
  return cfg;
}

SuiteParams ExperimentConfig::params_for(const std::string& suite) const {
  auto it = suite_params.find(suite);
  if (it != suite_params.end()) return it->second;
  SuiteParams p;
  p.n = n;
  p.seed = seed;
  p.workers = workers;
  p.corpus = "default";
  return p;
}

const LevyMeasure& ExperimentConfig::levy_by_name(const std::string& name) const {
  for (const auto& [key, nu] : levy)
    if (key == name) return nu;
  throw ConfigError("config: no Levy measure named '" + name + "'");
}

const LevyMeasure& ExperimentConfig::levy_by_family(LevyMeasure::Family family) const {
  for (const auto& [key, nu] : levy)
    if (nu.family() == family) return nu;
  throw ConfigError("config: no Levy measure of the requested family");
}

}  // namespace ccrlab
