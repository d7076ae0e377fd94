#include "wflo/farm_domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "csv_util.hpp"
#include "wflo/error.hpp"

namespace wflo {

SpeedTable::SpeedTable(std::vector<double> speeds, std::vector<double> values)
    : speeds_(std::move(speeds)), values_(std::move(values)) {
  if (speeds_.empty() || speeds_.size() != values_.size()) {
    throw Error("speed table needs matching, nonempty speed and value columns");
  }
  for (std::size_t i = 1; i < speeds_.size(); ++i) {
    if (!(speeds_[i] > speeds_[i - 1])) throw Error("speed table speeds must increase strictly");
  }
}

double SpeedTable::interpolate(double u) const {
  if (u <= speeds_.front()) return values_.front();
  if (u >= speeds_.back()) return values_.back();
  const auto hi = std::upper_bound(speeds_.begin(), speeds_.end(), u);
  const auto k = static_cast<std::size_t>(hi - speeds_.begin());
  const double t = (u - speeds_[k - 1]) / (speeds_[k] - speeds_[k - 1]);
  return values_[k - 1] + t * (values_[k] - values_[k - 1]);
}

SpeedTable load_speed_table(const std::filesystem::path& path) {
  const auto rows = detail::read_numeric_csv(path.string(), {"speed_ms", "value"});
  std::vector<double> speeds;
  std::vector<double> values;
  for (const auto& row : rows) {
    speeds.push_back(row.values[0]);
    values.push_back(row.values[1]);
  }
  try {
    return SpeedTable(std::move(speeds), std::move(values));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

PowerCurve::PowerCurve(SpeedTable table) : table_(std::move(table)) {
  if (table_.empty()) throw Error("power curve is empty");
  for (double v : table_.values()) {
    if (!(v >= 0.0)) throw Error("power curve values must be nonnegative");
  }
}

double PowerCurve::rated_power() const {
  return *std::max_element(table_.values().begin(), table_.values().end());
}

double TurbineSpec::thrust_at(double u) const {
  if (const auto* ct = std::get_if<double>(&thrust)) return *ct;
  return std::get<SpeedTable>(thrust).interpolate(u);
}

void TurbineSpec::validate() const {
  if (!(rotor_radius > 0.0)) throw Error("rotor radius must be positive");
  auto check_ct = [](double ct) {
    if (!(ct > 0.0 && ct < 1.0)) {
      throw Error("thrust coefficient must lie in (0, 1), got " + std::to_string(ct));
    }
  };
  if (const auto* ct = std::get_if<double>(&thrust)) {
    check_ct(*ct);
  } else {
    const auto& table = std::get<SpeedTable>(thrust);
    if (table.empty()) throw Error("thrust table is empty");
    for (double ct : table.values()) check_ct(ct);
  }
  if (const auto* curve = std::get_if<PowerCurve>(&power); curve && curve->empty()) {
    throw Error("power curve is empty");
  }
}

TurbineSpec mosetti_turbine() { return TurbineSpec{}; }

FarmGrid::FarmGrid(std::vector<Cell> cells, double cell_side, Bounds bounds)
    : cells_(std::move(cells)), cell_side_(cell_side), bounds_(bounds) {
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].index != i) throw Error("cell indices must be 0..N-1 in order");
    if (!seen.emplace(cells_[i].centroid.x, cells_[i].centroid.y).second) {
      throw Error("duplicate cell centroid at index " + std::to_string(i));
    }
  }
}

FarmGrid make_square_grid(double area_side, std::size_t cells_per_side) {
  if (cells_per_side == 0) throw Error("grid needs at least one cell per side");
  if (!(area_side > 0.0)) throw Error("grid side length must be positive");
  const double side = area_side / static_cast<double>(cells_per_side);
  std::vector<Cell> cells;
  cells.reserve(cells_per_side * cells_per_side);
  for (std::size_t row = 0; row < cells_per_side; ++row) {
    for (std::size_t col = 0; col < cells_per_side; ++col) {
      cells.push_back({row * cells_per_side + col,
                       {(static_cast<double>(col) + 0.5) * side,
                        (static_cast<double>(row) + 0.5) * side}});
    }
  }
  return FarmGrid(std::move(cells), side, {0.0, 0.0, area_side, area_side});
}

ProximityPairs proximity_pairs(const FarmGrid& grid, double min_separation) {
  ProximityPairs out;
  out.min_separation = min_separation;
  if (!(min_separation > 0.0)) return out;
  const auto& cells = grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      const double dx = cells[j].centroid.x - cells[i].centroid.x;
      const double dy = cells[j].centroid.y - cells[i].centroid.y;
      if (std::hypot(dx, dy) < min_separation) out.pairs.emplace_back(i, j);
    }
  }
  return out;
}

ProximityPairs proximity_pairs(const FarmGrid& grid, const TurbineSpec& spec) {
  return proximity_pairs(grid, 5.0 * spec.rotor_radius);
}

}  // namespace wflo
