#include "hyperlap/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hyperlap/densest.hpp"
#include "hyperlap/max_flow.hpp"

namespace hyperlap {

namespace {

struct EdgeState {
  int min_class = 0;
  int max_class = 0;
  double delta = 0.0;
  double value = 0.0;  // c_e = w_e * delta
  std::vector<int> low;   // I_e
  std::vector<int> high;  // S_e
};

// Groups vertices whose values chain within tol; class ids increase with value.
std::vector<int> equivalence_classes(const Vector& f, double tol, int& count) {
  const int n = static_cast<int>(f.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) < f(b); });
  std::vector<int> cls(n, 0);
  count = 0;
  for (int i = 0; i < n; ++i) {
    if (i > 0 && f(order[i]) - f(order[i - 1]) > tol) ++count;
    cls[order[i]] = count;
  }
  ++count;
  return cls;
}

// Transportation plan on suppliers x receivers by the northwest-corner rule.
std::vector<PairWeight> northwest_corner(const std::vector<std::pair<int, double>>& supply,
                                         const std::vector<std::pair<int, double>>& demand, double total) {
  std::vector<PairWeight> pairs;
  double s_sum = 0.0, d_sum = 0.0;
  for (auto& s : supply) s_sum += s.second;
  for (auto& d : demand) d_sum += d.second;
  if (!(s_sum > 0.0) || !(d_sum > 0.0)) return pairs;
  std::vector<double> s(supply.size()), d(demand.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = supply[i].second * total / s_sum;
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = demand[j].second * total / d_sum;
  std::size_t i = 0, j = 0;
  while (i < s.size() && j < d.size()) {
    const double amount = std::min(s[i], d[j]);
    if (amount > 0.0) pairs.push_back({supply[i].first, demand[j].first, amount});
    s[i] -= amount;
    d[j] -= amount;
    if (s[i] <= d[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return pairs;
}

// Peels maximal densest subsets of one class and records per-edge rates.
void solve_class(const Hypergraph& h, const std::vector<int>& members, const std::vector<int>& in_ids,
                 const std::vector<int>& out_ids, const std::vector<EdgeState>& state, Vector& rate,
                 std::vector<std::vector<std::pair<int, double>>>& rho) {
  const int n = h.num_vertices();
  std::vector<char> alive(n, 0);
  for (int v : members) alive[v] = 1;
  std::vector<int> pending_in = in_ids, pending_out = out_ids;
  std::vector<int> local(n, -1);

  auto current = [&](const std::vector<int>& vs) {
    std::vector<int> out;
    for (int v : vs)
      if (alive[v]) out.push_back(v);
    return out;
  };

  while (true) {
    std::vector<int> ground;
    for (int v : members)
      if (alive[v]) ground.push_back(v);
    if (ground.empty()) break;
    for (std::size_t i = 0; i < ground.size(); ++i) local[ground[i]] = static_cast<int>(i);

    DensestInstance inst;
    for (int v : ground) inst.weight.push_back(h.vertex_weight(v));
    for (int e : pending_in) {
      DensestEdge de{{}, state[e].value};
      for (int v : current(state[e].low)) de.members.push_back(local[v]);
      inst.in_edges.push_back(std::move(de));
    }
    for (int e : pending_out) {
      DensestEdge de{{}, state[e].value};
      for (int v : current(state[e].high)) de.members.push_back(local[v]);
      inst.out_edges.push_back(std::move(de));
    }
    const DensestSolution sol = solve_densest(inst);
    const double delta = sol.density;
    std::vector<char> in_layer(n, 0);
    for (int i : sol.subset) in_layer[ground[i]] = 1;

    std::vector<int> layer_in, layer_out, rest_in, rest_out;
    for (int e : pending_in) {
      auto cur = current(state[e].low);
      bool inside = std::all_of(cur.begin(), cur.end(), [&](int v) { return in_layer[v]; });
      (inside ? layer_in : rest_in).push_back(e);
    }
    for (int e : pending_out) {
      auto cur = current(state[e].high);
      bool touches = std::any_of(cur.begin(), cur.end(), [&](int v) { return in_layer[v]; });
      (touches ? layer_out : rest_out).push_back(e);
    }

    // Feasibility flow: I-edges supply c_e, layer vertices absorb w_v * delta, S-edges absorb c_e.
    std::vector<int> layer;
    for (int v : ground)
      if (in_layer[v]) layer.push_back(v);
    const int nl = static_cast<int>(layer.size());
    for (int i = 0; i < nl; ++i) local[layer[i]] = i;
    const int ni = static_cast<int>(layer_in.size());
    const int no = static_cast<int>(layer_out.size());
    const int source = nl + ni + no, sink = source + 1;
    FlowNetwork net(sink + 1);
    double supply = 0.0;
    for (int v : layer) {
      const double c = h.vertex_weight(v) * delta;
      if (c > 0.0) net.add_arc(local[v], sink, c);
      if (c < 0.0) {
        net.add_arc(source, local[v], -c);
        supply -= c;
      }
    }
    for (int e : layer_in) supply += state[e].value;
    const double infinite = 1.0 + 2.0 * supply;
    std::vector<std::vector<std::pair<int, int>>> in_arcs(ni), out_arcs(no);
    for (int k = 0; k < ni; ++k) {
      const int e = layer_in[k];
      net.add_arc(source, nl + k, state[e].value);
      for (int v : current(state[e].low)) in_arcs[k].push_back({v, net.add_arc(nl + k, local[v], infinite)});
    }
    for (int k = 0; k < no; ++k) {
      const int e = layer_out[k];
      for (int v : current(state[e].high))
        if (in_layer[v]) out_arcs[k].push_back({v, net.add_arc(local[v], nl + ni + k, infinite)});
      net.add_arc(nl + ni + k, sink, state[e].value);
    }
    const double flow = net.max_flow(source, sink);
    if (flow < supply - 1e-7 * std::max(1.0, supply))
      throw ConvergenceError("rate feasibility flow is not saturated", {supply - flow});

    for (int k = 0; k < ni; ++k)
      for (auto [v, arc] : in_arcs[k]) rho[layer_in[k]].push_back({v, net.flow(arc)});
    for (int k = 0; k < no; ++k)
      for (auto [v, arc] : out_arcs[k]) rho[layer_out[k]].push_back({v, -net.flow(arc)});
    for (int v : layer) {
      rate(v) = delta;
      alive[v] = 0;
    }
    pending_in = std::move(rest_in);
    pending_out = std::move(rest_out);
  }
}

}  // namespace

RateResult compute_rate(const Hypergraph& h, const Vector& f, const RateOptions& options) {
  const int n = h.num_vertices();
  if (f.size() != n) throw DomainError("vector length does not match the hypergraph");
  if (!f.allFinite()) throw DomainError("rate of a non-finite vector");
  const double tol = std::max(options.merge_gap, options.tie_tolerance * (1.0 + f.cwiseAbs().maxCoeff()));
  int class_count = 0;
  RateResult out;
  out.vertex_class = equivalence_classes(f, tol, class_count);
  const auto& cls = out.vertex_class;

  const std::size_t m = h.num_edges();
  std::vector<EdgeState> state(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = h.edge(i);
    auto& s = state[i];
    s.min_class = s.max_class = cls[e.vertices.front()];
    double lo = f(e.vertices.front()), hi = lo;
    for (int v : e.vertices) {
      s.min_class = std::min(s.min_class, cls[v]);
      s.max_class = std::max(s.max_class, cls[v]);
      lo = std::min(lo, f(v));
      hi = std::max(hi, f(v));
    }
    if (s.min_class == s.max_class) continue;
    for (int v : e.vertices) {
      if (cls[v] == s.min_class) s.low.push_back(v);
      if (cls[v] == s.max_class) s.high.push_back(v);
    }
    s.delta = hi - lo;
    s.value = e.weight * s.delta;
  }

  out.rate = Vector::Zero(n);
  std::vector<std::vector<std::pair<int, double>>> rho(m);

  if (options.split == WeightSplit::Even) {
    Vector flow = Vector::Zero(n);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& s = state[i];
      if (s.value <= 0.0) continue;
      const double a = h.edge(i).weight / static_cast<double>(s.low.size() * s.high.size());
      for (int u : s.high)
        for (int v : s.low) {
          flow(u) -= a * s.delta;
          flow(v) += a * s.delta;
        }
      for (int u : s.high) rho[i].push_back({u, -a * s.delta * s.low.size()});
      for (int v : s.low) rho[i].push_back({v, a * s.delta * s.high.size()});
    }
    out.rate = flow.cwiseQuotient(h.vertex_weights());
  } else {
    std::vector<std::vector<int>> members(class_count), in_ids(class_count), out_ids(class_count);
    for (int v = 0; v < n; ++v) members[cls[v]].push_back(v);
    for (std::size_t i = 0; i < m; ++i) {
      if (state[i].value <= 0.0) continue;
      in_ids[state[i].min_class].push_back(static_cast<int>(i));
      out_ids[state[i].max_class].push_back(static_cast<int>(i));
    }
    for (int c = 0; c < class_count; ++c) solve_class(h, members[c], in_ids[c], out_ids[c], state, out.rate, rho);
  }
  out.measure_rate = out.rate.cwiseProduct(h.vertex_weights());

  std::vector<Eigen::Triplet<double>> triplets;
  Vector offdiag = Vector::Zero(n);
  auto add_pairs = [&](const std::vector<PairWeight>& pairs) {
    for (const auto& p : pairs) {
      if (p.from == p.to) continue;
      triplets.emplace_back(p.from, p.to, p.weight);
      triplets.emplace_back(p.to, p.from, p.weight);
      offdiag(p.from) += p.weight;
      offdiag(p.to) += p.weight;
    }
  };
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = state[i];
    if (s.value <= 0.0) {
      // Flat edge: any split is consistent; spread w_e evenly over its pairs.
      const auto& vs = h.edge(i).vertices;
      EdgeDistribution d;
      d.edge = static_cast<int>(i);
      d.suppliers = d.receivers = vs;
      if (vs.size() == 1) d.pairs.push_back({vs[0], vs[0], h.edge(i).weight});
      const double a = 2.0 * h.edge(i).weight / static_cast<double>(vs.size() * (vs.size() - 1));
      for (std::size_t x = 0; x < vs.size(); ++x)
        for (std::size_t y = x + 1; y < vs.size(); ++y) d.pairs.push_back({vs[x], vs[y], a});
      add_pairs(d.pairs);
      out.distribution.push_back(std::move(d));
      continue;
    }
    EdgeDistribution d;
    d.edge = static_cast<int>(i);
    d.delta = s.delta;
    d.suppliers = s.high;
    d.receivers = s.low;
    std::sort(rho[i].begin(), rho[i].end());
    d.rho = rho[i];
    if (options.split == WeightSplit::Even) {
      const double a = h.edge(i).weight / static_cast<double>(s.low.size() * s.high.size());
      for (int u : s.high)
        for (int v : s.low) d.pairs.push_back({u, v, a});
    } else {
      std::vector<std::pair<int, double>> supply, demand;
      for (auto [v, r] : d.rho) {
        if (r < 0.0) supply.push_back({v, -r / s.delta});
        if (r > 0.0) demand.push_back({v, r / s.delta});
      }
      d.pairs = northwest_corner(supply, demand, h.edge(i).weight);
    }
    add_pairs(d.pairs);
    out.distribution.push_back(std::move(d));
  }
  for (int v = 0; v < n; ++v) triplets.emplace_back(v, v, h.vertex_weight(v) - offdiag(v));
  out.induced_weights.resize(n, n);
  out.induced_weights.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SpaceVector apply_laplacian(const Hypergraph& h, const SpaceVector& v, const RateOptions& options) {
  const RateResult r = compute_rate(h, as_weighted(h, v), options);
  SpaceVector out = weighted(-r.rate);
  return convert(h, out, v.space);
}

double rayleigh_quotient(const Hypergraph& h, const SpaceVector& v, const RateOptions& options) {
  const Vector f = as_weighted(h, v);
  const double denom = weighted_norm_sq(h, f);
  if (!(denom > 0.0)) throw DomainError("Rayleigh quotient of the zero vector");
  const RateResult r = compute_rate(h, f, options);
  return -(f.cwiseProduct(r.rate).cwiseProduct(h.vertex_weights())).sum() / denom;
}

Matrix dense_induced_weights(const RateResult& rate) { return Matrix(rate.induced_weights); }

Vector project_out(const Hypergraph& h, const Vector& f, const std::vector<Vector>& basis) {
  // Modified Gram-Schmidt against an orthonormalized copy of the basis.
  std::vector<Vector> ortho;
  for (const auto& b : basis) {
    Vector q = b;
    for (const auto& o : ortho) q -= weighted_inner(h, q, o) * o;
    const double norm = std::sqrt(weighted_norm_sq(h, q));
    if (norm > 1e-14) ortho.push_back(q / norm);
  }
  Vector out = f;
  for (const auto& o : ortho) out -= weighted_inner(h, out, o) * o;
  return out;
}

}  // namespace hyperlap
