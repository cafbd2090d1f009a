#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

enum class WeightSplit {
  Densest,  // the diffusion rules
  Even,     // w_e spread evenly over S_e x I_e; a known-wrong variant kept for comparison
};

struct RateOptions {
  double tie_tolerance = 1e-9;
  double merge_gap = 0.0;  // absolute: values closer than this always share a class
  WeightSplit split = WeightSplit::Densest;
};

struct PairWeight {
  int from;  // supplier in S_e
  int to;    // receiver in I_e
  double weight;
};

struct EdgeDistribution {
  int edge = 0;
  double delta = 0.0;  // max_e f - min_e f, zero inside one class
  std::vector<int> suppliers;
  std::vector<int> receivers;
  // Per-vertex measure rate through this edge: negative on suppliers, positive on receivers.
  std::vector<std::pair<int, double>> rho;
  std::vector<PairWeight> pairs;
};

struct RateResult {
  Vector rate;          // r = df/dt, weighted space
  Vector measure_rate;  // rho = W r
  std::vector<EdgeDistribution> distribution;
  Eigen::SparseMatrix<double> induced_weights;  // A_f, symmetric, row sums w_u
  std::vector<int> vertex_class;                // equivalence class id, ordered by value
};

RateResult compute_rate(const Hypergraph& h, const Vector& f, const RateOptions& options = {});
inline RateResult compute_rate(const Hypergraph& h, const SpaceVector& v, const RateOptions& options = {}) {
  return compute_rate(h, as_weighted(h, v), options);
}

// -r in the caller's space: L_w f, L x or the measure operator applied to phi.
SpaceVector apply_laplacian(const Hypergraph& h, const SpaceVector& v, const RateOptions& options = {});

// <v, L v> / <v, v> evaluated through the operator.
double rayleigh_quotient(const Hypergraph& h, const SpaceVector& v, const RateOptions& options = {});

// Dense copy of A_f for small instances.
Matrix dense_induced_weights(const RateResult& rate);

// Projection onto the weighted-orthogonal complement of span(basis).
Vector project_out(const Hypergraph& h, const Vector& f, const std::vector<Vector>& basis);

}  // namespace hyperlap
