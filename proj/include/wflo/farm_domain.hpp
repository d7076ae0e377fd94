#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace wflo {

struct Point {
  double x = 0.0;  // m, east
  double y = 0.0;  // m, north
};

/// Speed-indexed table with linear interpolation between knots.
class SpeedTable {
 public:
  SpeedTable() = default;
  /// Speeds must be strictly increasing; both vectors the same nonzero length.
  SpeedTable(std::vector<double> speeds, std::vector<double> values);

  const std::vector<double>& speeds() const { return speeds_; }
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return speeds_.empty(); }
  double min_speed() const { return speeds_.front(); }
  double max_speed() const { return speeds_.back(); }

  /// Linear interpolation, clamped to the end values outside the table.
  double interpolate(double u) const;

 private:
  std::vector<double> speeds_;
  std::vector<double> values_;
};

/// Reads the `speed_ms,value` CSV format.
SpeedTable load_speed_table(const std::filesystem::path& path);

/// Manufacturer power curve, kW. Zero outside [cut_in, cut_out].
class PowerCurve {
 public:
  PowerCurve() = default;
  explicit PowerCurve(SpeedTable table);

  const SpeedTable& table() const { return table_; }
  double cut_in() const { return table_.min_speed(); }
  double cut_out() const { return table_.max_speed(); }
  double rated_power() const;
  bool empty() const { return table_.empty(); }

 private:
  SpeedTable table_;
};

struct CubicPower {};

/// Turbine description. Hub height is carried for reports only.
struct TurbineSpec {
  double rotor_radius = 20.0;  // m
  double hub_height = 60.0;    // m
  std::variant<double, SpeedTable> thrust = 0.88;
  std::variant<CubicPower, PowerCurve> power = CubicPower{};
  std::optional<double> rated_power_kw;

  /// C_T at the given free-stream speed.
  double thrust_at(double u) const;
  bool cubic_power() const { return std::holds_alternative<CubicPower>(power); }

  /// Throws unless rotor_radius > 0 and 0 < C_T < 1 wherever defined.
  void validate() const;
};

/// Small-turbine benchmark family: R = 20 m, H = 60 m, C_T = 0.88, 0.3 u^3.
TurbineSpec mosetti_turbine();

struct Cell {
  std::size_t index = 0;
  Point centroid;
};

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

/// Discretized farm: candidate cells, each holding at most one turbine.
class FarmGrid {
 public:
  /// Cell indices must be exactly 0..N-1 in order, centroids pairwise distinct.
  FarmGrid(std::vector<Cell> cells, double cell_side, Bounds bounds);

  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  const Point& centroid(std::size_t i) const { return cells_.at(i).centroid; }
  double cell_side() const { return cell_side_; }
  const Bounds& bounds() const { return bounds_; }

 private:
  std::vector<Cell> cells_;
  double cell_side_;
  Bounds bounds_;
};

/// Row-major square grid with the origin at the south-west corner.
FarmGrid make_square_grid(double area_side, std::size_t cells_per_side);

/// Unordered cell pairs (i < j) whose centroids are strictly closer than
/// `min_separation`.
struct ProximityPairs {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double min_separation = 0.0;

  bool empty() const { return pairs.empty(); }
};

ProximityPairs proximity_pairs(const FarmGrid& grid, double min_separation);

/// Exclusion radius of five rotor radii.
ProximityPairs proximity_pairs(const FarmGrid& grid, const TurbineSpec& spec);

}  // namespace wflo
