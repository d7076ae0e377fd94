#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "wflo/evaluation.hpp"
#include "wflo/farm_domain.hpp"
#include "wflo/qip_mrf.hpp"
#include "wflo/run_config.hpp"
#include "wflo/trws.hpp"
#include "wflo/wake_jensen.hpp"
#include "wflo/wind_resource.hpp"

namespace wflo {

struct Instance {
  FarmGrid grid;
  WindRose rose;
  TurbineSpec spec;
  WakeParams wake;
  ProximityPairs exclusions;
  std::shared_ptr<const InteractionMatrix> w;  // null until build_matrix
};

/// Grid, rose, turbine and wake settings from the config; no matrix yet.
Instance load_instance(const RunConfig& cfg);
void build_matrix(Instance& inst, unsigned threads = 0);

struct SolveOutcome {
  std::string solver;
  Layout layout;
  double surrogate = 0.0;   // X^T W X
  double wall_time = 0.0;   // s, solver only (matrix build excluded)
  EvaluationReport evaluation;

  // message passing only
  std::optional<SolveReport> report;
  double beta = 0.0;
  std::size_t beta_escalations = 0;
  std::size_t clusters = 0;
  double decoded_surrogate = 0.0;  // before repair
};

/// Runs the configured solver on an instance whose matrix is built.
SolveOutcome solve_instance(const Instance& inst, const RunConfig& cfg);

nlohmann::json to_json(const SolveOutcome& outcome);

}  // namespace wflo
