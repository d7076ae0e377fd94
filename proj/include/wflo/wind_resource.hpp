#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace wflo {

/// One wind-rose bin. Direction is meteorological: the bearing the wind
/// blows FROM, degrees clockwise from north. Wakes extend toward
/// direction + 180.
struct WindState {
  double speed = 0.0;        // m/s, free-stream
  double direction = 0.0;    // deg in [0, 360)
  double probability = 0.0;  // fraction of the observation period
};

inline constexpr double kHoursPerYear = 8760.0;

/// Discrete joint distribution over (speed, direction). Immutable once built.
class WindRose {
 public:
  /// Validates every state and requires the probabilities to sum to 1
  /// within 1e-9 with no repeated (speed, direction) pair.
  explicit WindRose(std::vector<WindState> states,
                    double observation_hours = kHoursPerYear);

  const std::vector<WindState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  double observation_hours() const { return observation_hours_; }
  double total_probability() const;

  /// Highest-probability state; the first one on ties.
  const WindState& dominant() const;

 private:
  std::vector<WindState> states_;
  double observation_hours_;
};

/// Reads the `speed_ms,direction_deg,probability` CSV format. Lines starting
/// with '#' are comments. Probabilities within 1e-6 of summing to 1 are
/// renormalized; anything further off is rejected.
WindRose load_rose(const std::filesystem::path& path,
                   double observation_hours = kHoursPerYear);

void save_rose(const WindRose& rose, const std::filesystem::path& path);

/// Unidirectional benchmark rose: one state from the north.
WindRose builtin_wr1(double speed = 12.0);

/// `n_directions` equally spaced directions starting at north, equal weight.
WindRose uniform_rose(double speed, std::size_t n_directions);

}  // namespace wflo
