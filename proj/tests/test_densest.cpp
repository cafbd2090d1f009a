#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperlap/densest.hpp"
#include "hyperlap/error.hpp"
#include "hyperlap/max_flow.hpp"
#include "hyperlap/random.hpp"

using namespace hyperlap;

namespace {

DensestInstance random_instance(Rng& rng, int size) {
  std::uniform_real_distribution<double> value(0.1, 3.0);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::uniform_int_distribution<int> count(0, size);
  std::uniform_int_distribution<int> pick(0, size - 1);
  std::uniform_int_distribution<int> edge_size(1, std::min(size, 4));
  DensestInstance inst;
  for (int i = 0; i < size; ++i) inst.weight.push_back(weight(rng));
  auto make_edge = [&] {
    DensestEdge e;
    const int k = edge_size(rng);
    while (static_cast<int>(e.members.size()) < k) {
      const int v = pick(rng);
      if (std::find(e.members.begin(), e.members.end(), v) == e.members.end()) e.members.push_back(v);
    }
    std::sort(e.members.begin(), e.members.end());
    e.value = value(rng);
    return e;
  };
  const int in = count(rng) + 1, out = count(rng);
  for (int i = 0; i < in; ++i) inst.in_edges.push_back(make_edge());
  for (int i = 0; i < out; ++i) inst.out_edges.push_back(make_edge());
  return inst;
}

// Removes P and every in/out edge counted by P, relabelling the remaining ground set.
DensestInstance remove_subset(const DensestInstance& inst, const std::vector<int>& p) {
  std::vector<int> index(inst.size(), -1);
  std::vector<char> in_p(inst.size(), 0);
  for (int v : p) in_p[v] = 1;
  DensestInstance out;
  for (int v = 0; v < inst.size(); ++v)
    if (!in_p[v]) {
      index[v] = out.size();
      out.weight.push_back(inst.weight[v]);
    }
  auto touches = [&](const DensestEdge& e) {
    for (int v : e.members)
      if (in_p[v]) return true;
    return false;
  };
  auto remap = [&](const DensestEdge& e) {
    DensestEdge r{{}, e.value};
    for (int v : e.members) r.members.push_back(index[v]);
    return r;
  };
  // Edges touching P are either consumed (I_P, S_P) or can never again be counted inside U \ P.
  for (const auto& e : inst.in_edges)
    if (!touches(e)) out.in_edges.push_back(remap(e));
  for (const auto& e : inst.out_edges)
    if (!touches(e)) out.out_edges.push_back(remap(e));
  return out;
}

double brute_force_cut(int nodes, const std::vector<std::tuple<int, int, double>>& arcs, int s, int t) {
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << nodes); ++mask) {
    if (!((mask >> s) & 1u) || ((mask >> t) & 1u)) continue;
    double cut = 0;
    for (const auto& [u, v, c] : arcs)
      if (((mask >> u) & 1u) && !((mask >> v) & 1u)) cut += c;
    best = std::min(best, cut);
  }
  return best;
}

}  // namespace

TEST_CASE("single vertex instance") {
  DensestInstance inst{{1.0}, {{{0}, 2.0}}, {}};
  const DensestSolution s = solve_densest(inst);
  CHECK(s.subset == std::vector<int>{0});
  CHECK(s.density == doctest::Approx(2.0));
}

TEST_CASE("out-edge penalty is charged once per touched edge") {
  DensestInstance inst{{1.0, 1.0}, {{{0}, 3.0}}, {{{0, 1}, 1.0}}};
  const DensestSolution s = solve_densest(inst);
  CHECK(s.subset == std::vector<int>{0});
  CHECK(s.density == doctest::Approx(2.0));
  CHECK(density(inst, {0, 1}) == doctest::Approx(1.0));
  CHECK(density(inst, {1}) == doctest::Approx(-1.0));
}

TEST_CASE("equivalence class example with irrational edge values") {
  const double s5 = std::sqrt(5.0);
  // Ground set {b, d} with w_b = 2, w_d = 1; both edges push measure into the class.
  DensestInstance inst{{2.0, 1.0}, {{{0}, s5}, {{0, 1}, 5.0 - s5}}, {}};
  const DensestSolution s = solve_densest(inst);
  CHECK(s.subset == std::vector<int>{0, 1});
  CHECK(s.density == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("brute force avoids penalised vertices") {
  DensestInstance inst{{1.0, 1.0}, {}, {{{0}, 1.0}}};
  const DensestSolution b = densest_bruteforce(inst);
  CHECK(b.subset == std::vector<int>{1});
  CHECK(b.density == doctest::Approx(0.0));
  const DensestSolution s = solve_densest(inst);
  CHECK(s.subset == std::vector<int>{1});
  DensestInstance big;
  big.weight.assign(17, 1.0);
  CHECK_THROWS_AS(densest_bruteforce(big), CapacityError);
}

TEST_CASE("validation rejects bad instances") {
  CHECK_THROWS_AS((DensestInstance{{0.0}, {}, {}}).validate(), ValidationError);
  CHECK_THROWS_AS((DensestInstance{{1.0}, {{{0}, -1.0}}, {}}).validate(), ValidationError);
  CHECK_THROWS_AS((DensestInstance{{1.0}, {{{}, 1.0}}, {}}).validate(), ValidationError);
  CHECK_THROWS_AS((DensestInstance{{1.0}, {{{3}, 1.0}}, {}}).validate(), ValidationError);
}

TEST_CASE("flow solver matches brute force on random instances") {
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const int size = 1 + t % 12;
    const DensestInstance inst = random_instance(rng, size);
    const DensestSolution flow = solve_densest(inst);
    const DensestSolution brute = densest_bruteforce(inst);
    CHECK(flow.subset == brute.subset);
    CHECK(flow.density == doctest::Approx(brute.density).epsilon(1e-9));
    CHECK(density(inst, flow.subset) == doctest::Approx(flow.density).epsilon(1e-9));
  }
}

TEST_CASE("densest subsets are closed under union and intersection") {
  Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const DensestInstance inst = random_instance(rng, 2 + t % 7);
    const double best = densest_bruteforce(inst).density;
    const int n = inst.size();
    std::vector<unsigned> maximizers;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> s;
      for (int v = 0; v < n; ++v)
        if ((mask >> v) & 1u) s.push_back(v);
      if (std::abs(density(inst, s) - best) <= 1e-9 * std::max(1.0, std::abs(best))) maximizers.push_back(mask);
    }
    auto members = [&](unsigned mask) {
      std::vector<int> s;
      for (int v = 0; v < n; ++v)
        if ((mask >> v) & 1u) s.push_back(v);
      return s;
    };
    for (unsigned a : maximizers)
      for (unsigned b : maximizers) {
        CHECK(density(inst, members(a | b)) == doctest::Approx(best).epsilon(1e-9));
        if (a & b) CHECK(density(inst, members(a & b)) == doctest::Approx(best).epsilon(1e-9));
      }
  }
}

TEST_CASE("removing the maximal densest subset strictly lowers the density") {
  Rng rng(99);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const DensestInstance inst = random_instance(rng, 3 + t % 8);
    const DensestSolution first = solve_densest(inst);
    if (static_cast<int>(first.subset.size()) == inst.size()) continue;
    const DensestInstance rest = remove_subset(inst, first.subset);
    const DensestSolution second = densest_bruteforce(rest);
    CHECK(second.density < first.density - 1e-10 * std::max(1.0, std::abs(first.density)));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("max flow examples") {
  FlowNetwork single(2);
  single.add_arc(0, 1, 5.0);
  CHECK(single.max_flow(0, 1) == doctest::Approx(5.0));

  FlowNetwork diamond(4);
  const int sa = diamond.add_arc(0, 1, 1.0);
  diamond.add_arc(0, 2, 1.0);
  diamond.add_arc(1, 3, 1.0);
  diamond.add_arc(2, 3, 1.0);
  CHECK(diamond.max_flow(0, 3) == doctest::Approx(2.0));
  CHECK(diamond.flow(sa) == doctest::Approx(1.0));
  const auto side = diamond.min_cut_source_side(0);
  CHECK(side[0]);
  CHECK_FALSE(side[3]);
}

TEST_CASE("max flow equals the brute-force minimum cut and conserves flow") {
  Rng rng(5);
  std::uniform_real_distribution<double> cap(0.0, 4.0);
  std::bernoulli_distribution present(0.4);
  for (int t = 0; t < 100; ++t) {
    const int nodes = 3 + t % 8;
    FlowNetwork net(nodes);
    std::vector<std::tuple<int, int, double>> arcs;
    std::vector<int> ids;
    for (int u = 0; u < nodes; ++u)
      for (int v = 0; v < nodes; ++v)
        if (u != v && present(rng)) {
          const double c = cap(rng);
          arcs.emplace_back(u, v, c);
          ids.push_back(net.add_arc(u, v, c));
        }
    const double value = net.max_flow(0, nodes - 1);
    CHECK(value == doctest::Approx(brute_force_cut(nodes, arcs, 0, nodes - 1)).epsilon(1e-9));
    std::vector<double> balance(nodes, 0.0);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const auto& [u, v, c] = arcs[i];
      const double f = net.flow(ids[i]);
      CHECK(f >= -1e-12);
      CHECK(f <= c + 1e-9);
      balance[u] -= f;
      balance[v] += f;
    }
    for (int v = 1; v + 1 < nodes; ++v) CHECK(std::abs(balance[v]) <= 1e-9);
    CHECK(balance[nodes - 1] == doctest::Approx(value).epsilon(1e-9));
    // Both reported cuts are minimum cuts, and the maximal side contains the minimal one.
    const auto lo = net.min_cut_source_side(0);
    const auto hi = net.maximal_source_side(nodes - 1);
    double cut_lo = 0, cut_hi = 0;
    for (const auto& [u, v, c] : arcs) {
      if (lo[u] && !lo[v]) cut_lo += c;
      if (hi[u] && !hi[v]) cut_hi += c;
    }
    CHECK(cut_lo == doctest::Approx(value).epsilon(1e-9));
    CHECK(cut_hi == doctest::Approx(value).epsilon(1e-9));
    for (int v = 0; v < nodes; ++v)
      if (lo[v]) CHECK(hi[v]);
  }
}
