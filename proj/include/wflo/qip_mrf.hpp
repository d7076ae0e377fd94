#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "wflo/farm_domain.hpp"
#include "wflo/wake_jensen.hpp"

namespace wflo {

/// Binary turbine assignment X over the candidate cells.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::size_t n) : bits_(n, 0) {}
  static Layout from_indices(std::size_t n, std::span<const std::size_t> indices);

  std::size_t size() const { return bits_.size(); }
  std::size_t count() const;
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool on) { bits_.at(i) = on ? 1 : 0; }
  std::vector<std::size_t> selected() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const Layout&, const Layout&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// minimize X^T W X subject to e^T X = K and the proximity exclusions.
struct QipModel {
  std::shared_ptr<const InteractionMatrix> w;
  std::size_t k = 0;
  ProximityPairs exclusions;

  std::size_t size() const { return w ? w->size() : 0; }
};

/// Checks 1 <= k <= n and that every exclusion references a valid pair.
QipModel make_qip(std::shared_ptr<const InteractionMatrix> w, std::size_t k,
                  ProximityPairs exclusions = {});

/// X^T W X.
double qip_objective(const InteractionMatrix& w, const Layout& x);

/// True when x has exactly k ones and no excluded pair is fully occupied.
bool is_feasible(const QipModel& qip, const Layout& x);

/// Pairwise potential table indexed [2 * x_s + x_t].
struct PairwiseTerm {
  std::size_t s = 0;
  std::size_t t = 0;
  std::array<double, 4> phi{};

  double at(int xs, int xt) const { return phi[2 * xs + xt]; }
};

/// Binary pairwise Markov random field in energy form:
/// E(X) = sum_s unary_s(x_s) + sum_(s,t) phi_st(x_s, x_t) + constant.
struct MrfModel {
  std::size_t n_vertices = 0;
  std::vector<std::array<double, 2>> unary;
  std::vector<PairwiseTerm> edges;
  double constant = 0.0;

  /// Throws unless s < t on every edge, no edge repeats, every index is in
  /// range and all potentials are finite.
  void validate() const;
};

/// Expands X^T W X + beta (e^T X - K)^2 over binary X:
/// unary (0, beta (1 - 2K)), pairwise phi(1,1) = w_st + w_ts + 2 beta,
/// constant beta K^2. Zero edges are dropped.
MrfModel build_penalized_mrf(const QipModel& qip, double beta);

/// Adds `penalty` to phi(1,1) of every excluded pair, creating edges as needed.
MrfModel add_exclusions(MrfModel model, const ProximityPairs& exclusions, double penalty);

double mrf_energy(const MrfModel& model, const Layout& x);

/// 1 + max over cells j of the sum of the K largest entries of row j of
/// W + W^T. Any beta above the largest single-turbine interaction makes
/// every global minimizer of the penalized energy place exactly K turbines.
double default_beta(const InteractionMatrix& w, std::size_t k);

/// Line format: `u s phi0 phi1` per vertex, `e s t phi00 phi01 phi10 phi11`
/// per edge, and a final `c constant`.
void write_model_text(const MrfModel& model, std::ostream& out);

}  // namespace wflo
