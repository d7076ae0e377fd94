#include "wflo/run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>

#include "wflo/error.hpp"

namespace wflo {

namespace pt = boost::property_tree;

SolverKind parse_solver(const std::string& name) {
  static const std::map<std::string, SolverKind> names = {{"mp", SolverKind::mp},
                                                          {"greedy", SolverKind::greedy},
                                                          {"local", SolverKind::local},
                                                          {"brute", SolverKind::brute}};
  const auto it = names.find(name);
  if (it == names.end()) {
    throw Error("unknown solver '" + name + "' (expected mp, greedy, local or brute)");
  }
  return it->second;
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::mp: return "mp";
    case SolverKind::greedy: return "greedy";
    case SolverKind::local: return "local";
    case SolverKind::brute: return "brute";
  }
  return "mp";
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"rose", {"file", "builtin", "speed", "directions", "hours"}},
      {"grid", {"area_side", "cells_per_side"}},
      {"turbine", {"rotor_radius", "hub_height", "thrust", "thrust_file", "power", "power_file"}},
      {"wake", {"decay", "initial_radius"}},
      {"problem", {"k", "exclusions", "min_separation"}},
      {"solver",
       {"name", "max_sweeps", "tolerance", "cutoff_seconds", "tighten", "max_clusters",
        "clusters_per_round", "clusters_file", "beta", "beta_escalations", "count_slack",
        "repair_passes", "restarts", "seed", "enumeration_budget", "threads"}},
      {"output", {"dir"}}};
  return keys;
}

// get_optional<T> swallows conversion failures; get<T> reports them.
template <typename T>
void read(const pt::ptree& tree, const std::string& key, T& into) {
  if (tree.get_child_optional(key)) into = tree.get<T>(key);
}

void read_path(const pt::ptree& tree, const std::string& key, const std::filesystem::path& base,
               std::filesystem::path& into) {
  if (const auto v = tree.get_optional<std::string>(key)) {
    std::filesystem::path p(*v);
    into = p.is_relative() ? base / p : p;
  }
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error("cannot read config '" + path.string() + "': " + e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      throw Error(path.string() + ": unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) {
        throw Error(path.string() + ": unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  RunConfig cfg;
  cfg.source = path;
  const auto base = path.parent_path();
  try {
    read_path(tree, "rose.file", base, cfg.rose_file);
    read(tree, "rose.builtin", cfg.rose_builtin);
    read(tree, "rose.speed", cfg.rose_speed);
    read(tree, "rose.directions", cfg.rose_directions);
    read(tree, "rose.hours", cfg.observation_hours);

    read(tree, "grid.area_side", cfg.area_side);
    read(tree, "grid.cells_per_side", cfg.cells_per_side);

    read(tree, "turbine.rotor_radius", cfg.rotor_radius);
    read(tree, "turbine.hub_height", cfg.hub_height);
    read(tree, "turbine.thrust", cfg.thrust);
    read_path(tree, "turbine.thrust_file", base, cfg.thrust_file);
    read_path(tree, "turbine.power_file", base, cfg.power_file);
    if (const auto p = tree.get_optional<std::string>("turbine.power"); p && *p != "cubic") {
      throw Error(path.string() + ": turbine.power must be 'cubic' (use power_file for a curve)");
    }

    read(tree, "wake.decay", cfg.decay);
    if (const auto r = tree.get_optional<std::string>("wake.initial_radius")) {
      if (*r == "rotor") cfg.initial_radius = WakeRadius::rotor;
      else if (*r == "expanded") cfg.initial_radius = WakeRadius::expanded;
      else throw Error(path.string() + ": wake.initial_radius must be rotor or expanded");
    }

    read(tree, "problem.k", cfg.k);
    read(tree, "problem.exclusions", cfg.exclusions);
    if (tree.get_child_optional("problem.min_separation")) {
      cfg.min_separation = tree.get<double>("problem.min_separation");
    }

    if (const auto v = tree.get_optional<std::string>("solver.name")) cfg.solver = parse_solver(*v);
    read(tree, "solver.max_sweeps", cfg.max_sweeps);
    read(tree, "solver.tolerance", cfg.tolerance);
    read(tree, "solver.cutoff_seconds", cfg.cutoff_seconds);
    read(tree, "solver.tighten", cfg.tighten);
    read(tree, "solver.max_clusters", cfg.max_clusters);
    read(tree, "solver.clusters_per_round", cfg.clusters_per_round);
    read_path(tree, "solver.clusters_file", base, cfg.clusters_file);
    if (tree.get_child_optional("solver.beta")) cfg.beta = tree.get<double>("solver.beta");
    read(tree, "solver.beta_escalations", cfg.beta_escalations);
    read(tree, "solver.count_slack", cfg.count_slack);
    read(tree, "solver.repair_passes", cfg.repair_passes);
    read(tree, "solver.restarts", cfg.restarts);
    read(tree, "solver.seed", cfg.seed);
    read(tree, "solver.enumeration_budget", cfg.enumeration_budget);
    read(tree, "solver.threads", cfg.threads);

    read_path(tree, "output.dir", base, cfg.output_dir);
  } catch (const pt::ptree_bad_data& e) {
    throw Error(path.string() + ": " + e.what());
  }
  if (!(cfg.cutoff_seconds > 0.0)) throw Error(path.string() + ": cutoff_seconds must be positive");
  if (cfg.cells_per_side == 0) throw Error(path.string() + ": cells_per_side must be positive");
  return cfg;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["source"] = cfg.source.string();
  j["rose"] = {{"file", cfg.rose_file.string()},
               {"builtin", cfg.rose_builtin},
               {"speed", cfg.rose_speed},
               {"directions", cfg.rose_directions},
               {"hours", cfg.observation_hours}};
  j["grid"] = {{"area_side", cfg.area_side}, {"cells_per_side", cfg.cells_per_side}};
  j["turbine"] = {{"rotor_radius", cfg.rotor_radius},
                  {"hub_height", cfg.hub_height},
                  {"thrust", cfg.thrust},
                  {"thrust_file", cfg.thrust_file.string()},
                  {"power_file", cfg.power_file.string()}};
  j["wake"] = {{"decay", cfg.decay},
               {"initial_radius",
                cfg.initial_radius == WakeRadius::rotor ? "rotor" : "expanded"}};
  j["problem"] = {{"k", cfg.k}, {"exclusions", cfg.exclusions}};
  if (cfg.min_separation) j["problem"]["min_separation"] = *cfg.min_separation;
  j["solver"] = {{"name", to_string(cfg.solver)},
                 {"max_sweeps", cfg.max_sweeps},
                 {"tolerance", cfg.tolerance},
                 {"cutoff_seconds", cfg.cutoff_seconds},
                 {"tighten", cfg.tighten},
                 {"max_clusters", cfg.max_clusters},
                 {"clusters_per_round", cfg.clusters_per_round},
                 {"clusters_file", cfg.clusters_file.string()},
                 {"beta_escalations", cfg.beta_escalations},
                 {"count_slack", cfg.count_slack},
                 {"repair_passes", cfg.repair_passes},
                 {"restarts", cfg.restarts},
                 {"seed", cfg.seed},
                 {"enumeration_budget", cfg.enumeration_budget},
                 {"threads", cfg.threads}};
  if (cfg.beta) j["solver"]["beta"] = *cfg.beta;
  j["output"] = {{"dir", cfg.output_dir.string()}};
  return j;
}

}  // namespace wflo
