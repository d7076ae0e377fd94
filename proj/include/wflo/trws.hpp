#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "wflo/qip_mrf.hpp"

namespace wflo {

/// Monotonic-chain cover of the model's edges under a fixed vertex order.
/// Every edge lies on exactly one chain; vertex s lies on
/// max(#lower neighbours, #higher neighbours) chains.
struct ChainDecomposition {
  std::vector<std::size_t> vertex_order;
  std::vector<std::vector<std::size_t>> chains;
  std::vector<double> rho;  // chain weights, uniform
};

ChainDecomposition decompose(const MrfModel& model);

/// Reparameterized potentials together with the cumulative messages that
/// produced them. For every edge e = (s, t):
///   unary_s  = original_s + sum over incident edges of to_s
///   edge_e   = original_e - to_s(x_s) - to_t(x_t) + cluster terms
/// so every assignment keeps its original energy.
class MessageState {
 public:
  /// The model must outlive the state.
  explicit MessageState(const MrfModel& model);

  const MrfModel& model() const { return *model_; }
  std::size_t n_vertices() const { return unary_.size(); }
  std::size_t n_edges() const { return edge_.size(); }

  const std::array<double, 2>& unary(std::size_t s) const { return unary_[s]; }
  const std::array<double, 4>& edge(std::size_t e) const { return edge_[e]; }
  /// Cumulative message from edge e into its lower endpoint s.
  const std::array<double, 2>& message_to_s(std::size_t e) const { return to_s_[e]; }
  /// Cumulative message from edge e into its higher endpoint t.
  const std::array<double, 2>& message_to_t(std::size_t e) const { return to_t_[e]; }

  /// Edge index joining s and t in either orientation, or npos.
  std::size_t find_edge(std::size_t s, std::size_t t) const;
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  /// Energy of `x` under the reparameterized unary and pairwise tables only.
  double pairwise_energy(const Layout& x) const;

  /// Sum of the minima of every unary and pairwise table plus the constant.
  double pairwise_bound() const;

 private:
  friend class TrwsSolver;
  friend std::array<double, 2> pass_message(MessageState&, std::size_t, std::size_t);

  struct Incident {
    std::uint32_t edge;
    std::uint32_t other;
  };

  const MrfModel* model_;
  std::vector<std::array<double, 2>> unary_;
  std::vector<std::array<double, 4>> edge_;
  std::vector<std::array<double, 2>> to_s_;
  std::vector<std::array<double, 2>> to_t_;
  std::vector<std::size_t> offsets_;
  std::vector<Incident> incident_;
};

/// Min-sum message from s to t: m(j) = min_i { unary_s(i) + phi_st(i, j) },
/// then unary_t(j) += m(j) and phi_st(i, j) -= m(j). The energy of every
/// assignment is unchanged. Throws if s and t are not adjacent.
std::array<double, 2> pass_message(MessageState& state, std::size_t s, std::size_t t);

struct SolverConfig {
  std::size_t max_sweeps = 2000;
  double tolerance = 1e-9;       // absolute lower-bound gain per sweep
  double cutoff_seconds = 3600.0;
  std::uint64_t seed = 0;        // reserved for randomized decoding restarts
};

struct SolveReport {
  Layout best_assignment;
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> lower_bound_trace;
  std::size_t sweeps = 0;
  double wall_time = 0.0;  // s
  bool converged = false;
  /// Per vertex: (best energy with label 0, best energy with label 1), as
  /// estimated when the final backward pass visited the vertex.
  std::vector<std::array<double, 2>> min_marginals;

  double lower_bound() const {
    return lower_bound_trace.empty() ? -std::numeric_limits<double>::infinity()
                                     : lower_bound_trace.back();
  }
};

/// Sequential tree-reweighted message passing over a binary pairwise model,
/// optionally tightened with triplet clusters. Vertices are visited in index
/// order. Every elementary update either moves a factor's min-marginal into
/// a lower-level factor or hands a share of a vertex potential to the
/// factors above it, so the bound never decreases.
class TrwsSolver {
 public:
  struct Cluster {
    std::array<std::size_t, 3> vertices;          // ascending
    std::array<std::size_t, 3> edges;             // (v0,v1), (v0,v2), (v1,v2)
    std::array<double, 8> phi{};                  // index 4 x0 + 2 x1 + x2
    std::array<std::array<double, 4>, 3> to_edge{};  // cumulative messages
  };

  /// The model must outlive the solver.
  explicit TrwsSolver(const MrfModel& model);

  /// Adds a zero-potential triplet factor. All three edges must exist.
  /// Returns false if the triplet is already present.
  bool add_cluster(std::array<std::size_t, 3> vertices);
  bool has_cluster(std::array<std::size_t, 3> vertices) const;
  const std::vector<Cluster>& clusters() const { return clusters_; }

  const MessageState& state() const { return state_; }
  const MrfModel& model() const { return state_.model(); }

  /// Sum of minima over all unary, pairwise and triplet tables plus the constant.
  double lower_bound() const;

  /// Energy of `x` under the current reparameterization, clusters included.
  double reparameterized_energy(const Layout& x) const;

  /// Runs sweeps from the current state until the bound gain over a sweep
  /// drops below cfg.tolerance, cfg.max_sweeps is hit, or the cut-off passes.
  SolveReport run(const SolverConfig& cfg);

  /// Per-vertex label energies read from the current reparameterization
  /// without any pending messages; run() reports the in-pass values instead.
  std::vector<std::array<double, 2>> min_marginals() const;

 private:
  void receive(std::size_t edge, bool into_lower);
  void send(std::size_t s, bool forward);
  Layout pass(bool forward);
  void cluster_round();
  double decode_belief(std::size_t s, int label,
                       const std::vector<std::int8_t>& decoded) const;

  MessageState state_;
  std::vector<std::uint32_t> lower_count_;
  std::vector<std::uint32_t> higher_count_;
  std::vector<Cluster> clusters_;
  std::vector<std::vector<std::uint32_t>> vertex_clusters_;
  std::vector<std::array<double, 2>> pass_marginals_;  // beliefs as the last pass visited s
};

/// One solve from a fresh state.
SolveReport run(const MrfModel& model, const SolverConfig& cfg);

}  // namespace wflo
