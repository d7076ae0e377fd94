#include "wflo/evaluation.hpp"

#include "wflo/error.hpp"

namespace wflo {

double power_cubic(double u) {
  if (!(u >= 0.0)) throw Error("wind speed must be nonnegative");
  return 0.3 * u * u * u;
}

double power_from_curve(const PowerCurve& curve, double u) {
  if (curve.empty()) throw Error("power curve is empty");
  if (!(u >= 0.0)) throw Error("wind speed must be nonnegative");
  if (u < curve.cut_in() || u > curve.cut_out()) return 0.0;
  return curve.table().interpolate(u);
}

double turbine_power(const TurbineSpec& spec, double u) {
  if (spec.cubic_power()) return power_cubic(u);
  return power_from_curve(std::get<PowerCurve>(spec.power), u);
}

EvaluationReport evaluate_layout(const Layout& layout, const FarmGrid& grid, const WindRose& rose,
                                 const TurbineSpec& spec, const WakeParams& params) {
  if (layout.size() != grid.size()) throw Error("layout size does not match the grid");
  EvaluationReport r;
  r.turbines = layout.selected();
  r.observation_hours = rose.observation_hours();
  r.state_power_kw.reserve(rose.size());
  r.state_speeds.reserve(rose.size());
  for (const auto& state : rose.states()) {
    const WakeParams resolved = resolve_wake_params(params, spec, state.speed);
    std::vector<double> speeds;
    speeds.reserve(r.turbines.size());
    double total = 0.0;
    for (std::size_t t : r.turbines) {
      const double u = combined_speed(r.turbines, t, state, grid, resolved, spec.rotor_radius);
      speeds.push_back(u);
      total += turbine_power(spec, u);
    }
    r.state_power_kw.push_back(total);
    r.state_speeds.push_back(std::move(speeds));
  }
  const auto& states = rose.states();
  for (std::size_t s = 0; s < states.size(); ++s) {
    r.expected_power_kw += states[s].probability * r.state_power_kw[s];
  }
  r.aep_kwh = r.expected_power_kw * r.observation_hours;
  return r;
}

void to_json(nlohmann::json& j, const EvaluationReport& r) {
  j = nlohmann::json{{"turbines", r.turbines},
                     {"expected_power_kw", r.expected_power_kw},
                     {"aep_kwh", r.aep_kwh},
                     {"observation_hours", r.observation_hours},
                     {"state_power_kw", r.state_power_kw},
                     {"state_speeds_ms", r.state_speeds}};
}

Comparison compare(const RunRecord& a, const RunRecord& b) {
  if (b.expected_power_kw == 0.0) throw Error("cannot compare against zero power");
  if (a.wall_time_s == 0.0) throw Error("cannot form a time ratio with zero wall time");
  return {100.0 * (a.expected_power_kw - b.expected_power_kw) / b.expected_power_kw,
          b.wall_time_s / a.wall_time_s};
}

}  // namespace wflo
