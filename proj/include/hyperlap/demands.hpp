#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

struct DemandPair {
  int s = 0;
  int t = 0;
  double demand = 1.0;
};

struct DemandInstance {
  Hypergraph h;
  std::vector<DemandPair> pairs;

  void validate() const;
  VertexSet terminals() const;
};

// One "s t D" line per pair, 0-based vertices, '#' comments.
std::vector<DemandPair> parse_demands(std::istream& in, int n);
std::vector<DemandPair> load_demands(const std::string& path, int n);

// Sum of D_i over pairs split by the set.
double separated_demand(const DemandInstance& inst, const std::vector<char>& in_set);

struct DemandCut {
  VertexSet subset;
  double sparsity = 0.0;  // w(dS) / separated demand
  double cut_weight = 0.0;
  double demand = 0.0;
};

DemandCut demand_cut(const DemandInstance& inst, const VertexSet& s);

// Minimum sparsity over all sets separating some demand. Requires n <= 20.
DemandCut sparsest_cut_bruteforce(const DemandInstance& inst);

struct DemandSdpConfig {
  int max_iterations = 20000;  // Newton steps
  double rel_gap = 1e-6;
  double triangle_tol = 1e-7;
  int sampled_triangles = 20000;  // per check, when n exceeds the full-enforcement limit
  std::uint64_t seed = 0;
};

constexpr int kFullTriangleLimit = 30;
// Dense interior point: each Newton step costs O(n^6).
constexpr int kMaxSdpVertices = 40;

struct DemandSdpSolution {
  Matrix vectors;  // row u is the vector of u; sum_i D_i ||s_i - t_i||^2 = 1
  double objective = 0.0;
  double max_triangle_violation = 0.0;  // relative to the largest squared distance
  int triangles_checked = 0;
  int iterations = 0;
};

DemandSdpSolution solve_demands_sdp(const DemandInstance& inst, const DemandSdpConfig& cfg = {});

// Squared distances ||v_u - v_w||^2 between all rows.
Matrix squared_distances(const Matrix& vectors);

struct TerminalEmbedding {
  Matrix coords;          // 1-Lipschitz from (V, squared distances) into l2
  double distortion = 0.0;  // max over terminal pairs of d(s, t) / ||f(s) - f(t)||
  double lipschitz_scale = 0.0;
};

TerminalEmbedding embed_terminals(const Matrix& dist, const VertexSet& terminals, std::uint64_t seed);

struct DemandsResult {
  DemandCut cut;
  double sdp_value = 0.0;
  double max_triangle_violation = 0.0;
  double distortion = 0.0;
  double line_ratio = 0.0;  // phi(x) of the projection that produced the cut
  bool sweep_bound_holds = true;
  int best_trial = -1;
  int trials = 0;
};

constexpr int kDemandRoundingTrials = 16;

DemandsResult sparsest_cut_demands(const DemandInstance& inst, std::uint64_t seed,
                                   const DemandSdpConfig& cfg = {}, int trials = kDemandRoundingTrials);

}  // namespace hyperlap
