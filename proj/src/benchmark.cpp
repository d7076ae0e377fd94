#include "wflo/benchmark.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>

#include "wflo/error.hpp"
#include "wflo/evaluation.hpp"
#include "wflo/pipeline.hpp"

namespace wflo {

namespace pt = boost::property_tree;

void apply(const CaseOverrides& o, RunConfig& cfg) {
  if (o.solver) cfg.solver = *o.solver;
  if (o.seed) cfg.seed = *o.seed;
  if (o.cutoff_seconds) cfg.cutoff_seconds = *o.cutoff_seconds;
  if (o.max_clusters) cfg.max_clusters = *o.max_clusters;
  if (o.clusters_per_round) cfg.clusters_per_round = *o.clusters_per_round;
}

namespace {

template <typename T>
std::optional<T> strict(const pt::ptree& body, const std::string& key) {
  if (!body.get_child_optional(key)) return std::nullopt;
  return body.get<T>(key);
}

}  // namespace

Suite load_suite(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error("cannot read suite '" + path.string() + "': " + e.message());
  }
  static const std::set<std::string> case_keys = {
      "config", "k", "solver", "cutoff_seconds", "max_clusters", "clusters_per_round", "tighten",
      "restarts", "seed", "max_sweeps", "reference_kw", "baseline"};
  Suite suite;
  const auto base = path.parent_path();
  std::set<std::string> names;
  for (const auto& [section, body] : tree) {
    if (section == "suite") {
      suite.note = body.get<std::string>("note", "");
      continue;
    }
    if (section.rfind("case.", 0) != 0 || section.size() == 5) {
      throw Error(path.string() + ": unexpected section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!case_keys.count(key)) {
        throw Error(path.string() + ": unknown key '" + key + "' in [" + section + "]");
      }
    }
    BenchmarkCase c;
    c.name = section.substr(5);
    names.insert(c.name);
    const auto cfg_path = body.get_optional<std::string>("config");
    if (!cfg_path) throw Error(path.string() + ": [" + section + "] needs a config");
    std::filesystem::path p(*cfg_path);
    c.config = load_run_config(p.is_relative() ? base / p : p);
    try {
      if (auto v = strict<std::size_t>(body, "k")) c.config.k = *v;
      if (auto v = strict<std::string>(body, "solver")) c.config.solver = parse_solver(*v);
      if (auto v = strict<double>(body, "cutoff_seconds")) c.config.cutoff_seconds = *v;
      if (auto v = strict<std::size_t>(body, "max_clusters")) c.config.max_clusters = *v;
      if (auto v = strict<std::size_t>(body, "clusters_per_round")) {
        c.config.clusters_per_round = *v;
      }
      if (auto v = strict<bool>(body, "tighten")) c.config.tighten = *v;
      if (auto v = strict<std::size_t>(body, "restarts")) c.config.restarts = *v;
      if (auto v = strict<std::uint64_t>(body, "seed")) c.config.seed = *v;
      if (auto v = strict<std::size_t>(body, "max_sweeps")) c.config.max_sweeps = *v;
      if (auto v = strict<double>(body, "reference_kw")) c.reference_kw = *v;
    } catch (const pt::ptree_bad_data& e) {
      throw Error(path.string() + ": [" + section + "] " + e.what());
    }
    c.baseline = body.get<std::string>("baseline", "");
    suite.cases.push_back(std::move(c));
  }
  for (const auto& c : suite.cases) {
    if (!c.baseline.empty() && !names.count(c.baseline)) {
      throw Error(path.string() + ": case '" + c.name + "' compares against unknown case '" +
                  c.baseline + "'");
    }
  }
  return suite;
}

BenchmarkResult run_suite(const Suite& suite, const CaseOverrides& overrides) {
  BenchmarkResult result;
  result.note = suite.note;
  std::map<std::string, Instance> instances;
  for (const auto& c : suite.cases) {
    BenchmarkRow row;
    row.name = c.name;
    row.reference_kw = c.reference_kw;
    row.baseline = c.baseline;
    RunConfig cfg = c.config;
    apply(overrides, cfg);
    row.solver = to_string(cfg.solver);
    row.k = cfg.k;
    try {
      const std::string key = cfg.source.string();
      auto it = instances.find(key);
      if (it == instances.end()) {
        Instance inst = load_instance(cfg);
        build_matrix(inst, cfg.threads);
        it = instances.emplace(key, std::move(inst)).first;
      }
      const SolveOutcome out = solve_instance(it->second, cfg);
      row.ok = true;
      row.expected_power_kw = out.evaluation.expected_power_kw;
      row.aep_kwh = out.evaluation.aep_kwh;
      row.surrogate = out.surrogate;
      row.wall_time_s = out.wall_time;
      row.clusters = out.clusters;
      row.turbines = out.evaluation.turbines;
      if (row.reference_kw && *row.reference_kw != 0.0) {
        row.pct_vs_reference =
            100.0 * (row.expected_power_kw - *row.reference_kw) / *row.reference_kw;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  for (auto& row : result.rows) {
    if (!row.ok || row.baseline.empty()) continue;
    for (const auto& other : result.rows) {
      if (other.name != row.baseline || !other.ok) continue;
      try {
        const Comparison cmp = compare({row.expected_power_kw, row.wall_time_s},
                                       {other.expected_power_kw, other.wall_time_s});
        row.pct_vs_baseline = cmp.percent_difference;
        row.time_ratio_vs_baseline = cmp.time_ratio;
      } catch (const Error&) {
        // zero power or zero time: leave the comparison columns empty
      }
    }
  }
  return result;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{:.6g}", *v) : ""; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_benchmark_csv(const BenchmarkResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "case,solver,k,status,expected_power_kw,aep_kwh,surrogate,wall_time_s,clusters,"
         "reference_kw,pct_vs_reference,baseline,pct_vs_baseline,time_ratio_vs_baseline,error\n";
  for (const auto& r : result.rows) {
    out << fmt::format("{},{},{},{},{:.3f},{:.1f},{:.9g},{:.3f},{},{},{},{},{},{},{}\n",
                       csv_quote(r.name), r.solver, r.k, r.ok ? "ok" : "error",
                       r.expected_power_kw, r.aep_kwh, r.surrogate, r.wall_time_s, r.clusters,
                       opt(r.reference_kw), opt(r.pct_vs_reference), csv_quote(r.baseline),
                       opt(r.pct_vs_baseline), opt(r.time_ratio_vs_baseline),
                       csv_quote(r.error));
  }
}

nlohmann::json to_json(const BenchmarkResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  auto optj = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  for (const auto& r : result.rows) {
    rows.push_back({{"case", r.name},
                    {"solver", r.solver},
                    {"k", r.k},
                    {"status", r.ok ? "ok" : "error"},
                    {"error", r.error},
                    {"expected_power_kw", r.expected_power_kw},
                    {"aep_kwh", r.aep_kwh},
                    {"surrogate", r.surrogate},
                    {"wall_time_s", r.wall_time_s},
                    {"clusters", r.clusters},
                    {"turbines", r.turbines},
                    {"reference_kw", optj(r.reference_kw)},
                    {"pct_vs_reference", optj(r.pct_vs_reference)},
                    {"baseline", r.baseline},
                    {"pct_vs_baseline", optj(r.pct_vs_baseline)},
                    {"time_ratio_vs_baseline", optj(r.time_ratio_vs_baseline)}});
  }
  return {{"note", result.note}, {"rows", rows}};
}

}  // namespace wflo
