#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hyperlap/error.hpp"

namespace hyperlap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VertexSet = std::vector<int>;

struct Hyperedge {
  std::vector<int> vertices;
  double weight = 1.0;
};

class Hypergraph {
 public:
  Hypergraph() = default;
  // Deduplicates vertices inside each edge and derives vertex weights.
  Hypergraph(int n, std::vector<Hyperedge> edges, std::vector<std::string> labels = {});

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  const Hyperedge& edge(std::size_t i) const { return edges_[i]; }
  const Vector& vertex_weights() const { return weights_; }
  double vertex_weight(int v) const { return weights_(v); }
  double total_weight() const { return total_weight_; }
  const std::vector<std::vector<int>>& incident_edges() const { return incident_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int max_rank() const { return r_max_; }
  int min_rank() const { return r_min_; }

 private:
  int n_ = 0;
  std::vector<Hyperedge> edges_;
  std::vector<std::string> labels_;
  Vector weights_;
  double total_weight_ = 0.0;
  std::vector<std::vector<int>> incident_;
  int r_max_ = 0;
  int r_min_ = 0;
};

Hypergraph parse_hypergraph(std::istream& in);
Hypergraph load_hypergraph(const std::string& path);
std::string to_text(const Hypergraph& h);

// ---------------------------------------------------------------------------
// The three isomorphic spaces: weighted f, normalized x = W^{1/2} f, measure phi = W f.

enum class Space { Weighted, Normalized, Measure };

const char* space_name(Space s);

template <typename Scalar>
struct BasicSpaceVector {
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Values values;
  Space space = Space::Weighted;
};

using SpaceVector = BasicSpaceVector<double>;

inline SpaceVector weighted(Vector f) { return {std::move(f), Space::Weighted}; }
inline SpaceVector normalized(Vector x) { return {std::move(x), Space::Normalized}; }
inline SpaceVector measure(Vector phi) { return {std::move(phi), Space::Measure}; }

template <typename Scalar>
BasicSpaceVector<Scalar> convert(const Hypergraph& h, const BasicSpaceVector<Scalar>& v, Space target) {
  using Values = typename BasicSpaceVector<Scalar>::Values;
  const Values w = h.vertex_weights().cast<Scalar>();
  const Values sw = w.array().sqrt().matrix();
  Values f;
  switch (v.space) {
    case Space::Weighted: f = v.values; break;
    case Space::Normalized: f = v.values.cwiseQuotient(sw); break;
    case Space::Measure: f = v.values.cwiseQuotient(w); break;
  }
  switch (target) {
    case Space::Weighted: return {f, target};
    case Space::Normalized: return {f.cwiseProduct(sw), target};
    case Space::Measure: return {f.cwiseProduct(w), target};
  }
  return {f, Space::Weighted};
}

template <typename Scalar>
typename BasicSpaceVector<Scalar>::Values as_weighted(const Hypergraph& h, const BasicSpaceVector<Scalar>& v) {
  return convert(h, v, Space::Weighted).values;
}

// Inner product of the space the vectors live in; both must share a tag.
double inner(const Hypergraph& h, const SpaceVector& a, const SpaceVector& b);

template <typename Derived>
typename Derived::Scalar weighted_inner(const Hypergraph& h, const Eigen::MatrixBase<Derived>& f,
                                        const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  return (f.cwiseProduct(g).cwiseProduct(h.vertex_weights().cast<Scalar>())).sum();
}

template <typename Derived>
typename Derived::Scalar weighted_norm_sq(const Hypergraph& h, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  return (f.cwiseAbs2().cwiseProduct(h.vertex_weights().cast<Scalar>())).sum();
}

// Sum_e w_e max_{u,v in e} (f_u - f_v)^2 for a weighted-space f.
template <typename Derived>
typename Derived::Scalar discrepancy_numerator(const Hypergraph& h, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  using std::max;
  using std::min;
  Scalar total(0);
  for (const auto& e : h.edges()) {
    Scalar lo = f(e.vertices.front());
    Scalar hi = lo;
    for (int v : e.vertices) {
      lo = min(lo, f(v));
      hi = max(hi, f(v));
    }
    total += Scalar(e.weight) * (hi - lo) * (hi - lo);
  }
  return total;
}

// D_w(f) for a weighted-space vector.
template <typename Derived>
typename Derived::Scalar discrepancy_weighted(const Hypergraph& h, const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  const Scalar denom = weighted_norm_sq(h, f);
  if (!(denom > Scalar(0))) throw DomainError("discrepancy ratio of the zero vector");
  return discrepancy_numerator(h, f) / denom;
}

double discrepancy_ratio(const Hypergraph& h, const SpaceVector& v);

// ---------------------------------------------------------------------------
// Cuts and expansion.

struct CutResult {
  VertexSet subset;
  double expansion = 0.0;
  double cut_weight = 0.0;
  double subset_weight = 0.0;
};

std::vector<char> membership(int n, const VertexSet& s);
VertexSet complement(int n, const VertexSet& s);
double cut_weight(const Hypergraph& h, const std::vector<char>& in_set);
double set_weight(const Hypergraph& h, const VertexSet& s);
CutResult expansion(const Hypergraph& h, const VertexSet& s);

struct ExpansionValue {
  double value = 0.0;
  VertexSet subset;
};

// phi_H = min over proper S of max(phi(S), phi(V \ S)). Requires n <= 20.
ExpansionValue hypergraph_expansion_bruteforce(const Hypergraph& h);

enum class SweepMode { NonNegative, Balanced };

constexpr double kOrthTolerance = 1e-9;

// Nonneg: best threshold set {f >= t} inside supp(f).
// Balanced: median shift, better signed part, sweep on its square; w(S) <= w(V)/2.
CutResult sweep_cut(const Hypergraph& h, const SpaceVector& f, SweepMode mode);

// Right-hand side of the one-dimensional sweep bound:
// sum_e w_e max|f_u - f_v| / sum_u w_u f_u.
double sweep_bound_1d(const Hypergraph& h, const Vector& f);

// ---------------------------------------------------------------------------
// Simple graphs and vertex expansion.

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<std::vector<int>> adjacency() const;
};

Graph parse_graph(std::istream& in);
Hypergraph reduce_vertex_expansion(const Graph& g);
double vertex_expansion(const Graph& g, const VertexSet& s);

// Hop diameter in edge hops; throws DomainError when disconnected.
int hop_diameter(const Hypergraph& h);
bool is_connected(const Hypergraph& h);

}  // namespace hyperlap
