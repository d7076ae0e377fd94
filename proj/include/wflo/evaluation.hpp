#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "wflo/farm_domain.hpp"
#include "wflo/qip_mrf.hpp"
#include "wflo/wake_jensen.hpp"
#include "wflo/wind_resource.hpp"

namespace wflo {

/// 0.3 u^3 kW.
double power_cubic(double u);

/// Linear interpolation on the curve, zero below cut-in and above cut-out.
double power_from_curve(const PowerCurve& curve, double u);

double turbine_power(const TurbineSpec& spec, double u);

struct EvaluationReport {
  std::vector<std::size_t> turbines;               // selected cells, ascending
  std::vector<double> state_power_kw;              // farm total per rose state
  std::vector<std::vector<double>> state_speeds;   // [state][turbine] m/s
  double expected_power_kw = 0.0;
  double aep_kwh = 0.0;
  double observation_hours = kHoursPerYear;
};

/// Farm output with every turbine's speed from the full root-sum-square
/// wake combination, not the surrogate W.
EvaluationReport evaluate_layout(const Layout& layout, const FarmGrid& grid, const WindRose& rose,
                                 const TurbineSpec& spec, const WakeParams& params);

void to_json(nlohmann::json& j, const EvaluationReport& r);

struct RunRecord {
  double expected_power_kw = 0.0;
  double wall_time_s = 0.0;
};

struct Comparison {
  double percent_difference = 0.0;  // 100 (P_a - P_b) / P_b
  double time_ratio = 0.0;          // t_b / t_a, above 1 when a is faster
};

Comparison compare(const RunRecord& a, const RunRecord& b);

}  // namespace wflo
