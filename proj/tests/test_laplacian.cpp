#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "hyperlap/laplacian.hpp"
#include "hyperlap/spectral.hpp"
#include "hyperlap/verify.hpp"
#include "support.hpp"

using namespace hyperlap;
using testing_support::vec;

namespace {

// Gaussian or small-integer coordinates; integers force tied equivalence classes.
Vector test_vector(Rng& rng, int n, int t) {
  if (t % 2 == 0) return testing_support::random_vector(rng, n);
  std::uniform_int_distribution<int> level(-2, 2);
  Vector f(n);
  for (int i = 0; i < n; ++i) f(i) = level(rng);
  return f;
}

void check_rate_invariants(const Hypergraph& h, const Vector& f) {
  const RateResult r = compute_rate(h, f);
  const double scale = 1.0 + f.cwiseAbs().maxCoeff();
  const double tol = 1e-8 * scale;
  Vector rebuilt = Vector::Zero(h.num_vertices());
  double flow_identity = 0.0;
  for (const auto& d : r.distribution) {
    const auto& e = h.edge(d.edge);
    double total = 0.0;
    for (const auto& p : d.pairs) total += p.weight;
    CHECK(total == doctest::Approx(e.weight).epsilon(1e-9));
    if (d.delta <= 0.0) continue;
    // Suppliers hold the maximum of f on e, receivers the minimum.
    double hi = -1e300, lo = 1e300;
    for (int v : e.vertices) {
      hi = std::max(hi, f(v));
      lo = std::min(lo, f(v));
    }
    for (int u : d.suppliers) CHECK(f(u) >= hi - 1e-9 * scale);
    for (int v : d.receivers) CHECK(f(v) <= lo + 1e-9 * scale);
    for (const auto& p : d.pairs) {
      CHECK(p.weight >= 0.0);
      CHECK(std::find(d.suppliers.begin(), d.suppliers.end(), p.from) != d.suppliers.end());
      CHECK(std::find(d.receivers.begin(), d.receivers.end(), p.to) != d.receivers.end());
    }
    // Per-edge flows follow from the pair weights.
    std::map<int, double> from_pairs;
    for (const auto& p : d.pairs) {
      from_pairs[p.from] -= p.weight * d.delta;
      from_pairs[p.to] += p.weight * d.delta;
    }
    double r_s = -1e300, r_i = 1e300;
    for (int u : d.suppliers) r_s = std::max(r_s, r.rate(u));
    for (int v : d.receivers) r_i = std::min(r_i, r.rate(v));
    for (auto [v, rho] : d.rho) {
      rebuilt(v) += rho;
      CHECK(rho == doctest::Approx(from_pairs[v]).epsilon(1e-9).scale(scale));
      if (rho < -tol)
        for (int u : d.suppliers) CHECK(r.rate(v) >= r.rate(u) - tol);
      if (rho > tol)
        for (int u : d.receivers) CHECK(r.rate(v) <= r.rate(u) + tol);
    }
    flow_identity += e.weight * d.delta * (r_i - r_s);
  }
  CHECK((rebuilt - r.measure_rate).cwiseAbs().maxCoeff() <= tol * scale);
  CHECK(std::abs(r.measure_rate.sum()) <= tol * scale);
  const double r_norm = weighted_norm_sq(h, r.rate);
  CHECK(flow_identity == doctest::Approx(r_norm).epsilon(1e-8).scale(scale * scale));
  // <f, L_w f>_w equals the discrepancy numerator.
  CHECK(-weighted_inner(h, f, r.rate) == doctest::Approx(discrepancy_numerator(h, f)).epsilon(1e-8).scale(scale));
  // A_f is symmetric with row sums w_u.
  const Matrix a = dense_induced_weights(r);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * h.vertex_weights().maxCoeff());
  CHECK((a.rowwise().sum() - h.vertex_weights()).cwiseAbs().maxCoeff() <= 1e-9 * h.vertex_weights().maxCoeff());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) CHECK(a(i, j) >= 0.0);
}

}  // namespace

TEST_CASE("constant vector has zero rate") {
  const Hypergraph h = fixtures::gamma3_example();
  const RateResult r = compute_rate(h, Vector::Constant(4, 2.5));
  CHECK(r.rate.cwiseAbs().maxCoeff() == 0.0);
  for (const auto& d : r.distribution) CHECK(d.delta == 0.0);
}

TEST_CASE("rate on the third minimizer of the gamma3 example") {
  const Hypergraph h = fixtures::gamma3_example();
  const double s5 = std::sqrt(5.0);
  const SpaceVector lf = apply_laplacian(h, weighted(vec({s5 - 1, -1, 4 - s5, -1})));
  CHECK(lf.space == Space::Weighted);
  CHECK((lf.values - vec({s5, -5.0 / 3.0, 5 - s5, -5.0 / 3.0})).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("four-vertex example is an eigenvector with e5 sent to {a, c}") {
  const Hypergraph h = fixtures::four_vertex_example();
  const Vector f2 = vec({1, 1, -1, -1});
  const SpaceVector lf = apply_laplacian(h, weighted(f2));
  CHECK((lf.values - (2.0 / 3.0) * f2).cwiseAbs().maxCoeff() <= 1e-12);

  const RateResult r = compute_rate(h, f2);
  const auto& e5 = r.distribution[4];
  REQUIRE(e5.edge == 4);
  double to_ac = 0.0;
  for (const auto& p : e5.pairs)
    if (p.from == 0 && p.to == 2) to_ac += p.weight;
  CHECK(to_ac == doctest::Approx(1.0));

  RateOptions even;
  even.split = WeightSplit::Even;
  const SpaceVector bad = apply_laplacian(h, weighted(f2), even);
  CHECK((bad.values - vec({1.0 / 3.0, 1.0, -2.0 / 3.0, -2.0 / 3.0})).cwiseAbs().maxCoeff() <= 1e-12);
  const Vector residual = project_out(h, bad.values, {f2});
  CHECK(residual.norm() > 1e-3);
}

TEST_CASE("projected Laplacian of f3 leaves span(f3)") {
  const Hypergraph h = fixtures::gamma3_example();
  const double s5 = std::sqrt(5.0);
  const Vector f2 = vec({s5 - 1, (3 - s5) / 2, -1, -1});
  const Vector f3 = vec({s5 - 1, -1, 4 - s5, -1});
  const Vector lf3 = apply_laplacian(h, weighted(f3)).values;
  const Vector p = project_out(h, lf3, {Vector::Ones(4), f2});
  const Vector expected = vec({-0.5 + 7 * s5 / 6, -4.0 / 3.0 - s5 / 6, 59.0 / 12.0 - 11 * s5 / 12, -7.0 / 4.0 + s5 / 12});
  CHECK((p - expected).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(project_out(h, p, {f3}).norm() > 1e-3);
}

TEST_CASE("Laplacian in every space annihilates the stationary direction") {
  Rng rng(8);
  const Hypergraph h = testing_support::random_hypergraph(rng, 7, 6, 4);
  const Vector x1 = h.vertex_weights().cwiseSqrt();
  const SpaceVector lx = apply_laplacian(h, normalized(x1));
  CHECK(lx.space == Space::Normalized);
  CHECK(lx.values.cwiseAbs().maxCoeff() <= 1e-12);
  const SpaceVector lphi = apply_laplacian(h, measure(h.vertex_weights()));
  CHECK(lphi.space == Space::Measure);
  CHECK(lphi.values.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Rayleigh quotient examples") {
  const Hypergraph h = fixtures::gamma3_example();
  const double s5 = std::sqrt(5.0);
  CHECK(rayleigh_quotient(h, weighted(Vector::Ones(4))) == 0.0);
  CHECK(rayleigh_quotient(h, weighted(vec({s5 - 1, (3 - s5) / 2, -1, -1}))) ==
        doctest::Approx((5 - s5) / 4).epsilon(1e-12));
  CHECK_THROWS_AS(rayleigh_quotient(h, weighted(Vector::Zero(4))), DomainError);
}

TEST_CASE("Rayleigh quotient equals the discrepancy ratio") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 10;
    const Hypergraph h = testing_support::random_hypergraph(rng, n, n, 5);
    const Vector f = test_vector(rng, n, t);
    if (f.cwiseAbs().maxCoeff() == 0.0) continue;
    const SpaceVector x = convert(h, weighted(f), Space::Normalized);
    CHECK(rayleigh_quotient(h, x) == doctest::Approx(discrepancy_ratio(h, x)).epsilon(1e-8));
  }
}

TEST_CASE("rate invariants on random hypergraphs") {
  Rng rng(13);
  for (int t = 0; t < 60; ++t) {
    const int n = 3 + t % 12;
    const Hypergraph h = testing_support::random_hypergraph(rng, n, n + 2, 6);
    check_rate_invariants(h, test_vector(rng, n, t));
  }
}

TEST_CASE("normalized Laplacian structure") {
  Rng rng(14);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 10;
    const Hypergraph h = testing_support::random_hypergraph(rng, n, n, 5);
    const Vector x1 = h.vertex_weights().cwiseSqrt();
    const Vector x = convert(h, weighted(test_vector(rng, n, t)), Space::Normalized).values;
    const Vector lx = apply_laplacian(h, normalized(x)).values;
    const double scale = 1.0 + x.squaredNorm();
    CHECK(std::abs(lx.dot(x1)) <= 1e-8 * scale * x1.norm());

    const Vector px = x - (x.dot(x1) / x1.squaredNorm()) * x1;
    const Vector lpx = apply_laplacian(h, normalized(px)).values;
    CHECK(x.dot(lx) == doctest::Approx(px.dot(lpx)).epsilon(1e-8).scale(scale));

    const double alpha = 0.7 * (t % 5) - 1.0, beta = 0.3 + 0.4 * (t % 3);
    const Vector lcomb = apply_laplacian(h, normalized(alpha * x1 + beta * x)).values;
    CHECK((lcomb - beta * lx).cwiseAbs().maxCoeff() <= 1e-8 * scale);
  }
}

TEST_CASE("rate is positively homogeneous") {
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const Hypergraph h = testing_support::random_hypergraph(rng, 8, 8, 4);
    const Vector f = test_vector(rng, 8, t);
    const Vector r = compute_rate(h, f).rate;
    const Vector r3 = compute_rate(h, 3.0 * f).rate;
    CHECK((r3 - 3.0 * r).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + r.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("oracle minimizer is an eigenvector for gamma_2") {
  Rng rng(16);
  for (int t = 0; t < 10; ++t) {
    const Hypergraph h = testing_support::random_connected(rng, 4 + t % 3, 3, 4);
    const MinimizerSet m = exact_minimizers(h, 2);
    const Vector x2 = convert(h, weighted(m.vectors[1]), Space::Normalized).values;
    const Vector lx2 = apply_laplacian(h, normalized(x2)).values;
    CHECK((lx2 - m.ratios[1] * x2).norm() <= 1e-6 * x2.norm());
  }
}
