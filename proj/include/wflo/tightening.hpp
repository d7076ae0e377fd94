#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "wflo/qip_mrf.hpp"
#include "wflo/trws.hpp"

namespace wflo {

struct TripletCluster {
  std::array<std::size_t, 3> vertices{};  // ascending
  std::array<double, 8> potential{};      // index 4 x0 + 2 x1 + x2
};

struct TightenedModel {
  MrfModel base;  // includes zero edges added to close cluster triangles
  std::vector<TripletCluster> clusters;
  std::size_t polytope_generation = 0;
};

struct ScoredTriplet {
  std::array<std::size_t, 3> vertices{};
  double score = 0.0;
};

struct CandidatePool {
  double edge_fraction = 0.05;   // share of strongest edges searched for triangles
  std::size_t min_edges = 64;    // floor on that share for small models
};

/// Ranks triangles whose three edges all lie among the strongest-coupled
/// edges. The score of (u, v, w) is the bound gain from minimizing the three
/// reparameterized edge tables jointly instead of separately. Sorted by
/// score, descending; ties in lexicographic vertex order. Triplets already
/// attached to the solver are skipped.
std::vector<ScoredTriplet> score_candidate_triplets(const TrwsSolver& solver,
                                                    std::size_t max_candidates,
                                                    const CandidatePool& pool = {});

struct TighteningConfig {
  std::size_t max_clusters = 5000;
  std::size_t clusters_per_round = 20;
  double min_score = 1e-9;
  CandidatePool pool;
  /// Pre-generated clusters attached before the first solve.
  std::vector<std::array<std::size_t, 3>> initial_clusters;
};

/// Adds zero-potential edges so that every listed triplet is a triangle.
MrfModel with_cluster_edges(MrfModel model,
                            const std::vector<std::array<std::size_t, 3>>& triplets);

/// Solve, add the best-scoring triplets, re-solve from the warm state; repeat
/// until max_clusters, no candidate scores above min_score, or the solver
/// cut-off. The returned report concatenates every round's bound trace.
std::pair<TightenedModel, SolveReport> tighten_and_resolve(const MrfModel& model,
                                                           const SolverConfig& solver_cfg,
                                                           const TighteningConfig& cfg);

/// One `t v0 v1 v2` line per cluster.
void write_clusters(const std::vector<TripletCluster>& clusters, std::ostream& out);
std::vector<std::array<std::size_t, 3>> read_clusters(std::istream& in);

}  // namespace wflo
