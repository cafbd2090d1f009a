#include "hyperlap/hypergraph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace hyperlap {

Hypergraph::Hypergraph(int n, std::vector<Hyperedge> edges, std::vector<std::string> labels)
    : n_(n), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (n_ <= 0) throw ValidationError("hypergraph needs at least one vertex");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
    throw ValidationError("label count does not match vertex count");
  weights_ = Vector::Zero(n_);
  incident_.assign(n_, {});
  r_max_ = 0;
  r_min_ = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    if (e.vertices.empty()) throw ValidationError("edge " + std::to_string(i) + " is empty");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge " + std::to_string(i) + " has non-positive weight");
    std::sort(e.vertices.begin(), e.vertices.end());
    e.vertices.erase(std::unique(e.vertices.begin(), e.vertices.end()), e.vertices.end());
    for (int v : e.vertices) {
      if (v < 0 || v >= n_) throw ValidationError("edge " + std::to_string(i) + " names vertex out of range");
      weights_(v) += e.weight;
      incident_[v].push_back(static_cast<int>(i));
    }
    r_max_ = std::max<int>(r_max_, e.vertices.size());
    r_min_ = std::min<int>(r_min_, e.vertices.size());
  }
  if (edges_.empty()) r_min_ = 0;
  for (int v = 0; v < n_; ++v)
    if (!(weights_(v) > 0.0)) throw ValidationError("vertex " + std::to_string(v) + " has zero weight");
  total_weight_ = weights_.sum();
}

Hypergraph parse_hypergraph(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      auto pos = out.find('#');
      if (pos != std::string::npos) out.erase(pos);
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line(line)) throw ParseError(lineno, "missing header \"n m\"");
  std::istringstream header(line);
  long n = 0, m = 0;
  if (!(header >> n >> m) || n <= 0 || m < 0) throw ParseError(lineno, "malformed header");
  std::vector<Hyperedge> edges;
  edges.reserve(m);
  for (long i = 0; i < m; ++i) {
    if (!next_line(line)) throw ParseError(lineno, "expected " + std::to_string(m) + " edges");
    std::istringstream ls(line);
    Hyperedge e;
    long k = 0;
    if (!(ls >> e.weight >> k)) throw ParseError(lineno, "malformed edge line");
    if (k <= 0) throw ValidationError("empty edge on line " + std::to_string(lineno));
    for (long j = 0; j < k; ++j) {
      long v;
      if (!(ls >> v)) throw ParseError(lineno, "edge lists fewer vertices than declared");
      if (v < 0 || v >= n) throw ParseError(lineno, "vertex index out of range");
      e.vertices.push_back(static_cast<int>(v));
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing tokens");
    if (!(e.weight > 0.0)) throw ValidationError("non-positive edge weight on line " + std::to_string(lineno));
    edges.push_back(std::move(e));
  }
  return Hypergraph(static_cast<int>(n), std::move(edges));
}

Hypergraph load_hypergraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_hypergraph(in);
}

std::string to_text(const Hypergraph& h) {
  std::ostringstream out;
  out.precision(17);
  out << h.num_vertices() << ' ' << h.num_edges() << '\n';
  for (const auto& e : h.edges()) {
    out << e.weight << ' ' << e.vertices.size();
    for (int v : e.vertices) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

const char* space_name(Space s) {
  switch (s) {
    case Space::Weighted: return "weighted";
    case Space::Normalized: return "normalized";
    case Space::Measure: return "measure";
  }
  return "?";
}

double inner(const Hypergraph& h, const SpaceVector& a, const SpaceVector& b) {
  if (a.space != b.space) throw DomainError("inner product across spaces");
  const Vector& w = h.vertex_weights();
  switch (a.space) {
    case Space::Weighted: return (a.values.array() * b.values.array() * w.array()).sum();
    case Space::Normalized: return a.values.dot(b.values);
    case Space::Measure: return (a.values.array() * b.values.array() / w.array()).sum();
  }
  return 0.0;
}

double discrepancy_ratio(const Hypergraph& h, const SpaceVector& v) {
  return discrepancy_weighted(h, as_weighted(h, v));
}

std::vector<char> membership(int n, const VertexSet& s) {
  std::vector<char> in(n, 0);
  for (int v : s) {
    if (v < 0 || v >= n) throw DomainError("vertex out of range");
    in[v] = 1;
  }
  return in;
}

VertexSet complement(int n, const VertexSet& s) {
  auto in = membership(n, s);
  VertexSet out;
  for (int v = 0; v < n; ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

double cut_weight(const Hypergraph& h, const std::vector<char>& in_set) {
  double total = 0.0;
  for (const auto& e : h.edges()) {
    bool inside = false, outside = false;
    for (int v : e.vertices) (in_set[v] ? inside : outside) = true;
    if (inside && outside) total += e.weight;
  }
  return total;
}

double set_weight(const Hypergraph& h, const VertexSet& s) {
  double total = 0.0;
  for (int v : s) total += h.vertex_weight(v);
  return total;
}

CutResult expansion(const Hypergraph& h, const VertexSet& s) {
  auto in = membership(h.num_vertices(), s);
  const int size = static_cast<int>(std::count(in.begin(), in.end(), 1));
  if (size == 0 || size == h.num_vertices()) throw DomainError("expansion needs a proper non-empty subset");
  CutResult out;
  for (int v = 0; v < h.num_vertices(); ++v)
    if (in[v]) out.subset.push_back(v);
  out.cut_weight = cut_weight(h, in);
  out.subset_weight = set_weight(h, out.subset);
  out.expansion = out.cut_weight / out.subset_weight;
  return out;
}

ExpansionValue hypergraph_expansion_bruteforce(const Hypergraph& h) {
  const int n = h.num_vertices();
  if (n > 20) throw CapacityError("brute-force expansion limited to n <= 20");
  if (n < 2) throw DomainError("expansion needs at least two vertices");
  std::vector<std::uint32_t> masks;
  for (const auto& e : h.edges()) {
    std::uint32_t m = 0;
    for (int v : e.vertices) m |= 1u << v;
    masks.push_back(m);
  }
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  const Vector& w = h.vertex_weights();
  ExpansionValue best{std::numeric_limits<double>::infinity(), {}};
  std::uint32_t best_mask = 0;
  // The top vertex stays outside S; every cut is seen once.
  for (std::uint32_t s = 1; s < (1u << (n - 1)); ++s) {
    double cut = 0.0;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      const std::uint32_t part = masks[i] & s;
      if (part != 0 && part != masks[i]) cut += h.edge(i).weight;
    }
    double ws = 0.0;
    for (int v = 0; v < n; ++v)
      if (s >> v & 1u) ws += w(v);
    const double value = cut / std::min(ws, h.total_weight() - ws);
    if (value < best.value) {
      best.value = value;
      best_mask = s;
    }
  }
  // Report the lighter side so phi(S) equals the symmetrized value.
  double ws = 0.0;
  for (int v = 0; v < n; ++v)
    if (best_mask >> v & 1u) ws += w(v);
  if (ws > h.total_weight() - ws) best_mask = full & ~best_mask;
  for (int v = 0; v < n; ++v)
    if (best_mask >> v & 1u) best.subset.push_back(v);
  return best;
}

double sweep_bound_1d(const Hypergraph& h, const Vector& f) {
  double num = 0.0;
  for (const auto& e : h.edges()) {
    double lo = f(e.vertices.front()), hi = lo;
    for (int v : e.vertices) {
      lo = std::min(lo, f(v));
      hi = std::max(hi, f(v));
    }
    num += e.weight * (hi - lo);
  }
  return num / f.cwiseProduct(h.vertex_weights()).sum();
}

namespace {

CutResult sweep_nonnegative(const Hypergraph& h, const Vector& f) {
  const int n = h.num_vertices();
  std::vector<int> order;
  for (int v = 0; v < n; ++v)
    if (f(v) > 0.0) order.push_back(v);
  if (order.empty()) throw DomainError("sweep of a vector with empty support");
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) > f(b); });

  std::vector<int> count(h.num_edges(), 0);
  double cut = 0.0, weight = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int v = order[i];
    weight += h.vertex_weight(v);
    for (int ei : h.incident_edges()[v]) {
      const int size = static_cast<int>(h.edge(ei).vertices.size());
      ++count[ei];
      if (count[ei] == 1 && size > 1) cut += h.edge(ei).weight;
      if (count[ei] == size && size > 1) cut -= h.edge(ei).weight;
    }
    // Only thresholds at distinct values are valid level sets.
    if (i + 1 < order.size() && f(order[i + 1]) == f(v)) continue;
    if (i + 1 == static_cast<std::size_t>(n)) continue;
    const double value = std::max(cut, 0.0) / weight;
    if (value < best) {
      best = value;
      best_len = i + 1;
    }
  }
  if (best_len == 0) throw DomainError("sweep found no proper level set");
  CutResult out;
  out.subset.assign(order.begin(), order.begin() + best_len);
  std::sort(out.subset.begin(), out.subset.end());
  // Recompute from scratch so the reported numbers are exact.
  out.cut_weight = cut_weight(h, membership(n, out.subset));
  out.subset_weight = set_weight(h, out.subset);
  out.expansion = out.cut_weight / out.subset_weight;
  return out;
}

}  // namespace

CutResult sweep_cut(const Hypergraph& h, const SpaceVector& v, SweepMode mode) {
  const Vector f = as_weighted(h, v);
  if (f.cwiseAbs().maxCoeff() == 0.0) throw DomainError("sweep of the zero vector");
  if (mode == SweepMode::NonNegative) {
    if (f.minCoeff() < 0.0) throw DomainError("nonnegative sweep given a negative coordinate");
    return sweep_nonnegative(h, f);
  }

  const Vector& w = h.vertex_weights();
  const double dot = f.cwiseProduct(w).sum();
  const double scale = std::sqrt(weighted_norm_sq(h, f)) * std::sqrt(h.total_weight());
  if (std::abs(dot) > kOrthTolerance * scale) throw DomainError("balanced sweep needs f orthogonal to 1");

  const int n = h.num_vertices();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) < f(b); });
  double cumulative = 0.0;
  double c = f(order.back());
  for (int v : order) {
    cumulative += w(v);
    if (cumulative >= h.total_weight() / 2) {
      c = f(v);
      break;
    }
  }
  const Vector g = f.array() - c;
  const Vector pos = g.cwiseMax(0.0);
  const Vector neg = (-g).cwiseMax(0.0);
  auto ratio = [&](const Vector& x) {
    return x.maxCoeff() > 0.0 ? discrepancy_weighted(h, x) : std::numeric_limits<double>::infinity();
  };
  const Vector& chosen = ratio(pos) <= ratio(neg) ? pos : neg;
  return sweep_nonnegative(h, chosen.cwiseAbs2());
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

Graph parse_graph(std::istream& in) {
  Graph g;
  long m = 0;
  if (!(in >> g.n >> m) || g.n <= 0 || m < 0) throw ParseError(1, "malformed graph header");
  for (long i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) throw ParseError(static_cast<int>(i + 2), "malformed graph edge");
    if (u < 0 || v < 0 || u >= g.n || v >= g.n || u == v) throw ValidationError("graph must be simple");
    g.edges.emplace_back(u, v);
  }
  return g;
}

Hypergraph reduce_vertex_expansion(const Graph& g) {
  const auto adj = g.adjacency();
  std::vector<Hyperedge> edges;
  for (int v = 0; v < g.n; ++v) {
    Hyperedge e;
    e.vertices.push_back(v);
    e.vertices.insert(e.vertices.end(), adj[v].begin(), adj[v].end());
    edges.push_back(std::move(e));
  }
  return Hypergraph(g.n, std::move(edges));
}

double vertex_expansion(const Graph& g, const VertexSet& s) {
  auto in = membership(g.n, s);
  const int size = static_cast<int>(std::count(in.begin(), in.end(), 1));
  if (size == 0 || size == g.n) throw DomainError("vertex expansion needs a proper non-empty subset");
  std::vector<char> inner_boundary(g.n, 0), outer_boundary(g.n, 0);
  for (auto [u, v] : g.edges) {
    if (in[u] != in[v]) {
      const int a = in[u] ? u : v;
      const int b = in[u] ? v : u;
      inner_boundary[a] = 1;
      outer_boundary[b] = 1;
    }
  }
  const int nin = static_cast<int>(std::count(inner_boundary.begin(), inner_boundary.end(), 1));
  const int nout = static_cast<int>(std::count(outer_boundary.begin(), outer_boundary.end(), 1));
  return static_cast<double>(nin + nout) / size;
}

namespace {

std::vector<int> hop_distances(const Hypergraph& h, int source) {
  std::vector<int> dist(h.num_vertices(), -1);
  std::vector<char> used(h.num_edges(), 0);
  std::queue<int> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int ei : h.incident_edges()[u]) {
      if (used[ei]) continue;
      used[ei] = 1;
      for (int v : h.edge(ei).vertices) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push(v);
        }
      }
    }
  }
  return dist;
}

}  // namespace

bool is_connected(const Hypergraph& h) {
  const auto d = hop_distances(h, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

int hop_diameter(const Hypergraph& h) {
  int diameter = 0;
  for (int s = 0; s < h.num_vertices(); ++s) {
    const auto d = hop_distances(h, s);
    for (int x : d) {
      if (x < 0) throw DomainError("hypergraph is disconnected");
      diameter = std::max(diameter, x);
    }
  }
  return diameter;
}

}  // namespace hyperlap
