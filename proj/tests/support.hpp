#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperlap/hypergraph.hpp"
#include "hyperlap/random.hpp"

namespace testing_support {

using hyperlap::Hyperedge;
using hyperlap::Hypergraph;
using hyperlap::Rng;
using hyperlap::Vector;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Hypergraph parse(const std::string& text) {
  std::istringstream in(text);
  return hyperlap::parse_hypergraph(in);
}

// Random hypergraph with every vertex covered; ranks in [2, max_rank], weights in [0.5, 2].
inline Hypergraph random_hypergraph(Rng& rng, int n, int m, int max_rank, bool integer_weights = false) {
  std::uniform_int_distribution<int> rank(2, std::max(2, std::min(max_rank, n)));
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::uniform_int_distribution<int> int_weight(1, 3);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Hyperedge> edges;
  std::vector<char> covered(n, 0);
  auto add = [&](std::vector<int> members) {
    for (int v : members) covered[v] = 1;
    const double w = integer_weights ? int_weight(rng) : weight(rng);
    edges.push_back({std::move(members), w});
  };
  for (int i = 0; i < m; ++i) {
    std::shuffle(order.begin(), order.end(), rng);
    add(std::vector<int>(order.begin(), order.begin() + rank(rng)));
  }
  for (int v = 0; v < n; ++v) {
    if (covered[v]) continue;
    std::uniform_int_distribution<int> other(0, n - 2);
    int u = other(rng);
    if (u >= v) ++u;
    add({v, u});
  }
  return Hypergraph(n, std::move(edges));
}

// Connected variant: a random spanning chain of edges plus m random extras.
inline Hypergraph random_connected(Rng& rng, int n, int m, int max_rank, bool integer_weights = false) {
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::uniform_int_distribution<int> int_weight(1, 3);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Hyperedge> edges;
  for (int i = 0; i + 1 < n; ++i)
    edges.push_back({{order[i], order[i + 1]}, integer_weights ? double(int_weight(rng)) : weight(rng)});
  const Hypergraph extra = random_hypergraph(rng, n, m, max_rank, integer_weights);
  for (std::size_t i = 0; i < static_cast<std::size_t>(m) && i < extra.num_edges(); ++i)
    edges.push_back(extra.edge(i));
  return Hypergraph(n, std::move(edges));
}

inline Vector random_vector(Rng& rng, int n) { return hyperlap::gaussian_vector(rng, n); }

// Weighted-orthogonal projection of f away from the constant vector.
inline Vector center(const Hypergraph& h, const Vector& f) {
  const Vector& w = h.vertex_weights();
  return (f.array() - f.dot(w) / w.sum()).matrix();
}

inline std::vector<int> all_vertices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace testing_support
