#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "wflo/farm_domain.hpp"
#include "wflo/wind_resource.hpp"

namespace wflo {

/// Radius the wake cone starts from at the rotor plane.
enum class WakeRadius {
  rotor,    // the rotor radius R itself
  expanded  // R * sqrt((1 - a) / (1 - 2a)), the fully expanded near-wake radius
};

struct WakeParams {
  double decay = 0.1;                // wake-decay constant alpha
  std::optional<double> induction;   // axial induction a; derived from C_T when empty
  WakeRadius initial_radius = WakeRadius::rotor;
};

/// a = (1 - sqrt(1 - C_T)) / 2, the root of C_T = 4a(1 - a) on (0, 0.5).
double axial_induction(double c_t);

double initial_wake_radius(double rotor_radius, double induction, WakeRadius mode);

/// Copy of `params` with the induction resolved from the turbine's C_T at
/// the free-stream speed `u0` (unless already set). Checks 0 < a < 0.5.
WakeParams resolve_wake_params(const WakeParams& params, const TurbineSpec& spec, double u0);

/// Unit vector pointing downwind for a meteorological FROM-direction.
/// Directions 180 deg apart give exactly opposite vectors.
Point downwind_unit(double direction_deg);

/// Fractional speed deficit at `downstream` caused by a turbine at `upstream`:
/// 2a / (1 + alpha d / r0)^2 inside the cone r <= r0 + alpha d, d > 0, else 0.
/// Requires params.induction to be set.
double single_wake_deficit(const Point& upstream, const Point& downstream,
                           double direction_deg, const WakeParams& params,
                           double rotor_radius);

/// Effective speed at `target`: u0 (1 - sqrt(sum of squared deficits)),
/// clamped at zero. `target` itself is skipped if present in `active`.
double combined_speed(std::span<const std::size_t> active, std::size_t target,
                      const WindState& state, const FarmGrid& grid,
                      const WakeParams& params, double rotor_radius);

/// Dense N x N table of probability-weighted squared wake deficits.
class InteractionMatrix {
 public:
  InteractionMatrix() = default;
  explicit InteractionMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}
  InteractionMatrix(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
  const std::vector<double>& entries() const { return entries_; }

  double max_asymmetry() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// w_ij = sum over states of p * u0 * deficit_{i->j}^2, w_ii = 0. Rows are
/// computed on `threads` workers (0 = hardware concurrency); each entry is
/// accumulated over states in rose order, so results do not depend on the
/// thread count.
InteractionMatrix build_interaction_matrix(const FarmGrid& grid, const WindRose& rose,
                                           const TurbineSpec& spec, const WakeParams& params,
                                           unsigned threads = 0);

/// CSV dump: a header line `n`, the count, then one comma-separated line per row.
void write_matrix_csv(const InteractionMatrix& w, const std::filesystem::path& path);
InteractionMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace wflo
