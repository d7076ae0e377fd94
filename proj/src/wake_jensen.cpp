#include "wflo/wake_jensen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <string>
#include <thread>

#include "csv_util.hpp"
#include "wflo/error.hpp"

namespace wflo {

namespace {

// Absorbs rounding in the rotated coordinates so that cells sitting exactly
// on a cone edge or crosswind line classify the same for every direction.
constexpr double kGeomTolerance = 1e-9;

}  // namespace

double axial_induction(double c_t) {
  if (!(c_t > 0.0 && c_t < 1.0)) {
    throw Error("thrust coefficient must lie in (0, 1), got " + std::to_string(c_t));
  }
  return 0.5 * (1.0 - std::sqrt(1.0 - c_t));
}

double initial_wake_radius(double rotor_radius, double induction, WakeRadius mode) {
  if (mode == WakeRadius::rotor) return rotor_radius;
  return rotor_radius * std::sqrt((1.0 - induction) / (1.0 - 2.0 * induction));
}

WakeParams resolve_wake_params(const WakeParams& params, const TurbineSpec& spec, double u0) {
  WakeParams out = params;
  if (!out.induction) out.induction = axial_induction(spec.thrust_at(u0));
  if (!(*out.induction > 0.0 && *out.induction < 0.5)) {
    throw Error("axial induction must lie in (0, 0.5)");
  }
  if (!(out.decay > 0.0)) throw Error("wake decay constant must be positive");
  return out;
}

Point downwind_unit(double direction_deg) {
  const bool back_half = direction_deg >= 180.0;
  const double base = back_half ? direction_deg - 180.0 : direction_deg;
  double s = 0.0;
  double c = 1.0;
  if (base == 90.0) {
    s = 1.0;
    c = 0.0;
  } else if (base != 0.0) {
    const double rad = base * std::numbers::pi / 180.0;
    s = std::sin(rad);
    c = std::cos(rad);
  }
  // Wind from bearing theta travels toward theta + 180.
  return back_half ? Point{s, c} : Point{-s, -c};
}

namespace {

double deficit_along(const Point& up, const Point& down, const Point& dir, double alpha,
                     double induction, double radius) {
  const double dx = down.x - up.x;
  const double dy = down.y - up.y;
  const double d = dx * dir.x + dy * dir.y;
  if (d <= kGeomTolerance) return 0.0;
  const double r = std::abs(dx * dir.y - dy * dir.x);
  if (r > radius + alpha * d + kGeomTolerance) return 0.0;
  const double spread = 1.0 + alpha * d / radius;
  return 2.0 * induction / (spread * spread);
}

}  // namespace

double single_wake_deficit(const Point& upstream, const Point& downstream,
                           double direction_deg, const WakeParams& params,
                           double rotor_radius) {
  if (!params.induction) throw Error("single_wake_deficit needs a resolved induction factor");
  const double a = *params.induction;
  const double radius = initial_wake_radius(rotor_radius, a, params.initial_radius);
  return deficit_along(upstream, downstream, downwind_unit(direction_deg), params.decay, a,
                       radius);
}

double combined_speed(std::span<const std::size_t> active, std::size_t target,
                      const WindState& state, const FarmGrid& grid,
                      const WakeParams& params, double rotor_radius) {
  double sum_sq = 0.0;
  const Point& here = grid.centroid(target);
  for (std::size_t i : active) {
    if (i == target) continue;
    const double delta =
        single_wake_deficit(grid.centroid(i), here, state.direction, params, rotor_radius);
    sum_sq += delta * delta;
  }
  return std::max(0.0, state.speed * (1.0 - std::sqrt(sum_sq)));
}

InteractionMatrix::InteractionMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw Error("interaction matrix needs n*n entries");
}

double InteractionMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return worst;
}

InteractionMatrix build_interaction_matrix(const FarmGrid& grid, const WindRose& rose,
                                           const TurbineSpec& spec, const WakeParams& params,
                                           unsigned threads) {
  spec.validate();
  const std::size_t n = grid.size();

  struct StateTerms {
    Point dir;
    double weight;  // p * u0
    double alpha;
    double induction;
    double radius;
  };
  std::vector<StateTerms> terms;
  terms.reserve(rose.size());
  for (const auto& s : rose.states()) {
    const auto resolved = resolve_wake_params(params, spec, s.speed);
    const double a = *resolved.induction;
    terms.push_back({downwind_unit(s.direction), s.probability * s.speed, resolved.decay, a,
                     initial_wake_radius(spec.rotor_radius, a, resolved.initial_radius)});
  }

  std::vector<double> entries(n * n, 0.0);
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double* row = entries.data() + i * n;
      const Point& up = grid.centroid(i);
      for (const auto& t : terms) {
        if (t.weight == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const double delta =
              deficit_along(up, grid.centroid(j), t.dir, t.alpha, t.induction, t.radius);
          row[j] += t.weight * delta * delta;
        }
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    fill_rows(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(fill_rows, begin, end);
    }
  }
  return InteractionMatrix(n, std::move(entries));
}

void write_matrix_csv(const InteractionMatrix& w, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "n\n" << w.size() << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j) out << ',';
      out << w(i, j);
    }
    out << '\n';
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

InteractionMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "n") {
    throw Error(path.string() + ": expected header 'n'");
  }
  if (!std::getline(in, line)) throw Error(path.string() + ": missing matrix size");
  const double n_value = detail::parse_double(detail::trim(line), path.string() + ":2");
  if (n_value < 0 || n_value != std::floor(n_value)) throw Error(path.string() + ": bad size");
  const auto n = static_cast<std::size_t>(n_value);
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw Error(path.string() + ": truncated matrix");
    const auto where = path.string() + ":" + std::to_string(i + 3);
    const auto fields = detail::split(detail::trim(line));
    if (fields.size() != n) throw Error(where + ": expected " + std::to_string(n) + " values");
    for (const auto f : fields) entries.push_back(detail::parse_double(f, where));
  }
  return InteractionMatrix(n, std::move(entries));
}

}  // namespace wflo
