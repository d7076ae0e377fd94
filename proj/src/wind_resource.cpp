#include "wflo/wind_resource.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <string>
#include <utility>

#include "csv_util.hpp"
#include "wflo/error.hpp"

namespace wflo {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kLoadTolerance = 1e-6;

double sum_probability(const std::vector<WindState>& states) {
  double total = 0.0;
  for (const auto& s : states) total += s.probability;
  return total;
}

}  // namespace

WindRose::WindRose(std::vector<WindState> states, double observation_hours)
    : states_(std::move(states)), observation_hours_(observation_hours) {
  if (states_.empty()) throw Error("wind rose has no states");
  if (!(observation_hours_ > 0.0)) throw Error("observation hours must be positive");
  std::set<std::pair<double, double>> seen;
  for (const auto& s : states_) {
    if (!(s.speed > 0.0) || !std::isfinite(s.speed)) {
      throw Error("wind speed must be positive, got " + std::to_string(s.speed));
    }
    if (!(s.direction >= 0.0 && s.direction < 360.0)) {
      throw Error("wind direction must lie in [0, 360), got " + std::to_string(s.direction));
    }
    if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
      throw Error("state probability must lie in [0, 1], got " +
                  std::to_string(s.probability));
    }
    if (!seen.emplace(s.speed, s.direction).second) {
      throw Error("duplicate wind state (" + std::to_string(s.speed) + " m/s, " +
                  std::to_string(s.direction) + " deg)");
    }
  }
  const double total = sum_probability(states_);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error("wind rose probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

double WindRose::total_probability() const { return sum_probability(states_); }

const WindState& WindRose::dominant() const {
  const WindState* best = &states_.front();
  for (const auto& s : states_) {
    if (s.probability > best->probability) best = &s;
  }
  return *best;
}

WindRose load_rose(const std::filesystem::path& path, double observation_hours) {
  const auto rows = detail::read_numeric_csv(
      path.string(), {"speed_ms", "direction_deg", "probability"});
  std::vector<WindState> states;
  states.reserve(rows.size());
  for (const auto& row : rows) {
    states.push_back({row.values[0], row.values[1], row.values[2]});
  }
  if (states.empty()) throw Error(path.string() + ": no wind states");
  const double total = sum_probability(states);
  if (std::abs(total - 1.0) > kLoadTolerance) {
    throw Error(path.string() + ": probabilities sum to " + std::to_string(total) +
                " (must be 1 within 1e-6)");
  }
  for (auto& s : states) s.probability /= total;
  try {
    return WindRose(std::move(states), observation_hours);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_rose(const WindRose& rose, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "speed_ms,direction_deg,probability\n" << std::setprecision(17);
  for (const auto& s : rose.states()) {
    out << s.speed << ',' << s.direction << ',' << s.probability << '\n';
  }
}

WindRose builtin_wr1(double speed) { return uniform_rose(speed, 1); }

WindRose uniform_rose(double speed, std::size_t n_directions) {
  if (n_directions == 0) throw Error("uniform rose needs at least one direction");
  std::vector<WindState> states;
  states.reserve(n_directions);
  const double p = 1.0 / static_cast<double>(n_directions);
  for (std::size_t q = 0; q < n_directions; ++q) {
    const double direction = 360.0 * static_cast<double>(q) / static_cast<double>(n_directions);
    states.push_back({speed, direction, p});
  }
  return WindRose(std::move(states));
}

}  // namespace wflo
