#include "hyperlap/densest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "hyperlap/error.hpp"
#include "hyperlap/max_flow.hpp"

namespace hyperlap {

void DensestInstance::validate() const {
  if (weight.empty()) throw DomainError("densest instance has an empty ground set");
  for (double w : weight)
    if (!(w > 0.0)) throw ValidationError("densest instance weight must be positive");
  for (const auto* family : {&in_edges, &out_edges}) {
    for (const auto& e : *family) {
      if (e.members.empty()) throw ValidationError("densest instance edge is empty");
      if (!(e.value > 0.0)) throw ValidationError("densest instance edge value must be positive");
      for (int v : e.members)
        if (v < 0 || v >= size()) throw ValidationError("densest instance edge leaves the ground set");
    }
  }
}

double density(const DensestInstance& inst, const std::vector<int>& subset) {
  std::vector<char> in(inst.size(), 0);
  double w = 0.0;
  for (int v : subset) {
    in[v] = 1;
    w += inst.weight[v];
  }
  if (!(w > 0.0)) throw DomainError("density of an empty subset");
  double total = 0.0;
  for (const auto& e : inst.in_edges)
    if (std::all_of(e.members.begin(), e.members.end(), [&](int v) { return in[v]; })) total += e.value;
  for (const auto& e : inst.out_edges)
    if (std::any_of(e.members.begin(), e.members.end(), [&](int v) { return in[v]; })) total -= e.value;
  return total / w;
}

ParametricCut parametric_cut(const DensestInstance& inst, double lambda) {
  const int n = inst.size();
  const int nin = static_cast<int>(inst.in_edges.size());
  const int nout = static_cast<int>(inst.out_edges.size());
  // Nodes: vertices, in-edges, out-edges, source, sink.
  const int source = n + nin + nout;
  const int sink = source + 1;
  FlowNetwork net(sink + 1);

  double finite = 0.0, positive = 0.0;
  for (const auto& e : inst.in_edges) finite += e.value;
  for (const auto& e : inst.out_edges) finite += e.value;
  for (double w : inst.weight) finite += std::abs(lambda) * w;
  const double infinite = 1.0 + finite;

  for (int i = 0; i < nin; ++i) {
    const auto& e = inst.in_edges[i];
    net.add_arc(source, n + i, e.value);
    positive += e.value;
    for (int v : e.members) net.add_arc(n + i, v, infinite);
  }
  for (int j = 0; j < nout; ++j) {
    const auto& e = inst.out_edges[j];
    for (int v : e.members) net.add_arc(v, n + nin + j, infinite);
    net.add_arc(n + nin + j, sink, e.value);
  }
  for (int v = 0; v < n; ++v) {
    const double c = lambda * inst.weight[v];
    if (c > 0.0) {
      net.add_arc(v, sink, c);
    } else if (c < 0.0) {
      net.add_arc(source, v, -c);
      positive += -c;
    }
  }
  const double flow = net.max_flow(source, sink);
  ParametricCut out;
  out.value = positive - flow;
  const auto minimal = net.min_cut_source_side(source);
  const auto maximal = net.maximal_source_side(sink);
  for (int v = 0; v < n; ++v) {
    if (minimal[v]) out.minimal.push_back(v);
    if (maximal[v]) out.maximal.push_back(v);
  }
  return out;
}

DensestSolution solve_densest(const DensestInstance& inst) {
  inst.validate();
  double scale = 1.0;
  for (const auto& e : inst.in_edges) scale += e.value;
  for (const auto& e : inst.out_edges) scale += e.value;
  const double tol = 1e-10 * scale;

  std::vector<int> best(inst.size());
  for (int v = 0; v < inst.size(); ++v) best[v] = v;
  double lambda = density(inst, best);

  // Dinkelbach iteration: lambda strictly increases and hits the optimum after finitely many cuts.
  ParametricCut cut;
  for (int iter = 0; iter < 10000; ++iter) {
    cut = parametric_cut(inst, lambda);
    if (cut.value <= tol || cut.minimal.empty()) break;
    const double next = density(inst, cut.minimal);
    if (!(next > lambda)) break;
    lambda = next;
    best = cut.minimal;
  }
  // At the optimal lambda every densest set attains zero; the maximal side is their union.
  if (!cut.maximal.empty()) {
    const double d = density(inst, cut.maximal);
    if (d >= lambda - 1e-9 * std::max(1.0, std::abs(lambda))) best = cut.maximal;
  }
  DensestSolution out;
  out.subset = best;
  out.density = density(inst, best);
  out.certificate = cut.value;
  return out;
}

DensestSolution densest_bruteforce(const DensestInstance& inst, double tolerance) {
  inst.validate();
  const int n = inst.size();
  if (n > 16) throw CapacityError("brute-force densest subset limited to 16 elements");
  std::vector<std::uint32_t> in_masks, out_masks;
  for (const auto& e : inst.in_edges) {
    std::uint32_t m = 0;
    for (int v : e.members) m |= 1u << v;
    in_masks.push_back(m);
  }
  for (const auto& e : inst.out_edges) {
    std::uint32_t m = 0;
    for (int v : e.members) m |= 1u << v;
    out_masks.push_back(m);
  }
  std::vector<double> values(std::size_t{1} << n, -std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    double c = 0.0, w = 0.0;
    for (std::size_t i = 0; i < in_masks.size(); ++i)
      if ((in_masks[i] & s) == in_masks[i]) c += inst.in_edges[i].value;
    for (std::size_t j = 0; j < out_masks.size(); ++j)
      if (out_masks[j] & s) c -= inst.out_edges[j].value;
    for (int v = 0; v < n; ++v)
      if (s >> v & 1u) w += inst.weight[v];
    values[s] = c / w;
    best = std::max(best, values[s]);
  }
  const double slack = tolerance * std::max(1.0, std::abs(best));
  std::uint32_t uni = 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s)
    if (values[s] >= best - slack) uni |= s;
  if (values[uni] < best - slack) throw Error(ErrorKind::Validation, "union of densest subsets is not densest");
  DensestSolution out;
  for (int v = 0; v < n; ++v)
    if (uni >> v & 1u) out.subset.push_back(v);
  out.density = density(inst, out.subset);
  return out;
}

}  // namespace hyperlap
