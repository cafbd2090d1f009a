#include <doctest.h>

#include <cmath>

#include "hyperlap/diffusion.hpp"
#include "hyperlap/spectral.hpp"
#include "hyperlap/verify.hpp"
#include "support.hpp"

using namespace hyperlap;
using testing_support::parse;
using testing_support::vec;

namespace {

Hypergraph dumbbell() {
  return Hypergraph(6, {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 1.0}, {{3, 4}, 1.0}, {{4, 5}, 1.0}, {{3, 5}, 1.0},
                        {{2, 3}, 1.0}});
}

Vector random_distribution(Rng& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Vector phi(n);
  for (int i = 0; i < n; ++i) phi(i) = e(rng);
  return phi / phi.sum();
}

}  // namespace

TEST_CASE("stationary measure is a fixed point") {
  const Hypergraph h = fixtures::gamma3_example();
  const Vector star = stationary_measure(h, 1.0);
  DiffusionConfig cfg;
  cfg.horizon = 2.0;
  cfg.step = 0.01;
  const Trajectory t = simulate_diffusion(h, measure(star), cfg);
  for (const auto& s : t.states) CHECK((s - star).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((discretized_step(h, measure(star)).values - star).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("two-vertex walk decays like exp(-2t)") {
  const Hypergraph h = parse("2 1\n1 2 0 1\n");
  DiffusionConfig cfg;
  cfg.horizon = 3.0;
  cfg.step = 1e-3;
  const Trajectory t = simulate_diffusion(h, measure(vec({1, 0})), cfg);
  REQUIRE(t.times.size() == t.l1_distance.size());
  CHECK(t.times.back() == doctest::Approx(3.0));
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    const double exact = std::exp(-2.0 * t.times[i]);
    CHECK(std::abs(t.l1_distance[i] / exact - 1.0) <= 0.02);
  }
  CHECK(t.states.back()(0) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("deterministic trajectories conserve mass and never raise the Rayleigh quotient") {
  Rng rng(3);
  for (int g = 0; g < 5; ++g) {
    const Hypergraph h = testing_support::random_hypergraph(rng, 6 + g, 6, 4);
    DiffusionConfig cfg;
    cfg.horizon = 2.0;
    cfg.step = 1e-3;
    cfg.stride = 1;
    const Vector phi0 = random_distribution(rng, h.num_vertices());
    const Trajectory t = simulate_diffusion(h, measure(phi0), cfg);
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      CHECK(std::abs(t.states[i].sum() - 1.0) <= 1e-8);
      if (i > 0) CHECK(t.rayleigh[i] <= t.rayleigh[i - 1] + 1e-6);
    }
  }
}

TEST_CASE("norm derivative matches the Laplacian quadratic form") {
  Rng rng(4);
  const Hypergraph h = testing_support::random_hypergraph(rng, 7, 6, 4);
  const double step = 1e-5;
  DiffusionConfig cfg;
  cfg.horizon = 10 * step;
  cfg.step = step;
  cfg.stride = 1;
  const Vector phi0 = random_distribution(rng, 7);
  const Trajectory t = simulate_diffusion(h, measure(phi0), cfg);
  const Vector f0 = t.states[0].cwiseQuotient(h.vertex_weights());
  const Vector f1 = t.states[1].cwiseQuotient(h.vertex_weights());
  const double slope = (weighted_norm_sq(h, f1) - weighted_norm_sq(h, f0)) / step;
  const double expected = -2.0 * discrepancy_numerator(h, f0);
  CHECK(slope == doctest::Approx(expected).epsilon(1e-3).scale(1e-6));
}

TEST_CASE("trajectory sampling stride caps the record") {
  const Hypergraph h = fixtures::gamma3_example();
  DiffusionConfig cfg;
  cfg.horizon = 10.0;
  cfg.step = 1e-3;
  const Trajectory t = simulate_diffusion(h, measure(vec({1, 0, 0, 0})), cfg);
  CHECK(t.config.stride == 10);
  CHECK(t.times.size() == 1001);
  CHECK(t.steps == 10000);
}

TEST_CASE("oversized steps settle instead of oscillating") {
  // Colliding vertices are merged within the step, so even h = 100 lands on the stationary measure.
  const Hypergraph h = parse("2 1\n1 2 0 1\n");
  DiffusionConfig cfg;
  cfg.horizon = 1000.0;
  cfg.step = 100.0;
  const Trajectory t = simulate_diffusion(h, measure(vec({1, 0})), cfg);
  CHECK((t.states.back() - vec({0.5, 0.5})).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("divergence is reported with its step") {
  const Hypergraph h = parse("2 1\n1 2 0 1\n");
  DiffusionConfig cfg;
  cfg.horizon = 10.0;
  cfg.step = 1.0;
  cfg.eta = 1e300;
  try {
    simulate_stochastic(h, measure(vec({1, 0})), cfg);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() == 1);
    CHECK(e.kind() == ErrorKind::Divergence);
  }
  cfg.horizon = -1.0;
  CHECK_THROWS_AS(simulate_diffusion(h, measure(vec({1, 0})), cfg), DomainError);
  cfg.horizon = 1.0;
  cfg.eta = -1.0;
  CHECK_THROWS_AS(simulate_stochastic(h, measure(vec({1, 0})), cfg), DomainError);
}

TEST_CASE("zero noise reproduces the deterministic run bit for bit") {
  const Hypergraph h = fixtures::four_vertex_example();
  DiffusionConfig cfg;
  cfg.horizon = 1.0;
  cfg.step = 1e-2;
  cfg.seed = 99;
  const Trajectory a = simulate_diffusion(h, measure(vec({1, 0, 0, 0})), cfg);
  const Trajectory b = simulate_stochastic(h, measure(vec({1, 0, 0, 0})), cfg);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i] == b.states[i]);
}

TEST_CASE("stochastic runs are deterministic per seed") {
  const Hypergraph h = fixtures::gamma3_example();
  DiffusionConfig cfg;
  cfg.horizon = 0.5;
  cfg.step = 1e-2;
  cfg.eta = 0.5;
  cfg.seed = 4;
  const Trajectory a = simulate_stochastic(h, measure(vec({1, 0, 0, 0})), cfg);
  const Trajectory b = simulate_stochastic(h, measure(vec({1, 0, 0, 0})), cfg);
  CHECK(a.states.back() == b.states.back());
  cfg.seed = 5;
  const Trajectory c = simulate_stochastic(h, measure(vec({1, 0, 0, 0})), cfg);
  CHECK(a.states.back() != c.states.back());
}

TEST_CASE("two-vertex noise matches the Ornstein-Uhlenbeck variance") {
  // On a unit edge the transient coordinate is an OU process with rate 2:
  // E||Pi X_t||^2 = eta (1 - exp(-4t)) / 4.
  const Hypergraph h = parse("2 1\n1 2 0 1\n");
  const double eta = 1.0, horizon = 1.0;
  const int runs = 2000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < runs; ++s) {
    DiffusionConfig cfg;
    cfg.horizon = horizon;
    cfg.step = 1e-3;
    cfg.eta = eta;
    cfg.seed = static_cast<std::uint64_t>(s);
    const Trajectory t = simulate_stochastic(h, measure(vec({0.5, 0.5})), cfg);
    const double v = transient_component(h, t.states.back()).squaredNorm();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sum_sq / runs - mean * mean) / runs);
  const double exact = eta * (1.0 - std::exp(-4.0 * horizon)) / 4.0;
  CHECK(std::abs(mean - exact) <= 3.0 * se + 0.01 * exact);
}

TEST_CASE("slow start on a disconnected hypergraph stays on one component") {
  const Hypergraph h = parse("4 2\n1 2 0 1\n1 2 2 3\n");
  const SlowStart s = slow_mixing_start(h, weighted(vec({1, 1, -1, -1})));
  const Vector& phi = s.phi0.values;
  CHECK(phi.minCoeff() >= 0.0);
  CHECK(phi.sum() == doctest::Approx(1.0));
  CHECK(((phi(0) == 0.0 && phi(1) == 0.0) || (phi(2) == 0.0 && phi(3) == 0.0)));
  CHECK(s.rayleigh_y_hat == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(slow_mixing_start(h, weighted(vec({1, 1, 1, 0}))), DomainError);
  CHECK_THROWS_AS(slow_mixing_start(h, weighted(Vector::Zero(4))), DomainError);
}

TEST_CASE("slow start postconditions and the lower mixing bound") {
  const Hypergraph h = fixtures::gamma3_example();
  const MinimizerSet m = exact_minimizers(h, 2);
  const SlowStart s = slow_mixing_start(h, weighted(m.vectors[1]));
  CHECK(s.phi0.values.minCoeff() >= 0.0);
  CHECK(s.phi0.values.sum() == doctest::Approx(1.0));
  CHECK(s.l1_distance >= 0.5);
  CHECK(s.rayleigh_y_hat <= 4.0 * s.rayleigh_y + 1e-12);

  const double delta = 0.01;
  const double t_low = mixing_time_lower(h, s.rayleigh_y, delta);
  REQUIRE(t_low > 0.0);
  DiffusionConfig cfg;
  cfg.horizon = t_low;
  cfg.step = 1e-3;
  const Trajectory t = simulate_diffusion(h, s.phi0, cfg);
  for (double d : t.l1_distance) CHECK(d >= delta);
}

TEST_CASE("upper mixing bound holds from random starts") {
  Rng rng(6);
  for (int g = 0; g < 3; ++g) {
    const Hypergraph h = testing_support::random_connected(rng, 5, 3, 3);
    const double gamma2 = exact_gamma(h, {constant_minimizer(h)}).gamma;
    const double delta = 0.05;
    const double t_up = mixing_time_upper(h, gamma2, delta);
    for (int s = 0; s < 5; ++s) {
      DiffusionConfig cfg;
      cfg.horizon = 1.5 * t_up;
      cfg.step = 0.01 / gamma2;
      const Trajectory t = simulate_diffusion(h, measure(random_distribution(rng, 5)), cfg);
      for (std::size_t i = 0; i < t.times.size(); ++i)
        if (t.times[i] >= t_up) CHECK(t.l1_distance[i] <= delta);
    }
  }
}

TEST_CASE("slow mixing cut on a disconnected hypergraph is free") {
  const Hypergraph h = parse("4 2\n1 2 0 1\n1 2 2 3\n");
  const SlowMixingCut c = cut_from_slow_mixing(h, measure(vec({0.5, 0.5, 0, 0})), 1.0, 0.01, 0.1);
  CHECK(c.cut.expansion == 0.0);
  CHECK(c.cut.subset_weight <= h.total_weight() / 2);
}

TEST_CASE("slow mixing cut on a dumbbell") {
  const Hypergraph h = dumbbell();
  const MinimizerSet m = exact_minimizers(h, 2);
  const SlowStart s = slow_mixing_start(h, weighted(m.vectors[1]));
  const SlowMixingCut c = cut_from_slow_mixing(h, s.phi0, 2.0, 1e-3, 0.1);
  CHECK(c.cut.subset_weight <= h.total_weight() / 2 + 1e-12);
  CHECK(c.cut.expansion <= c.sweep_bound + 1e-12);
  CHECK(c.cut.expansion == doctest::Approx(1.0 / 7.0));
  CHECK(c.log_bound > 0.0);
  CHECK_THROWS_AS(cut_from_slow_mixing(h, measure(stationary_measure(h, 1.0)), 1.0, 1e-2, 0.1), PreconditionError);
  CHECK_THROWS_AS(cut_from_slow_mixing(h, s.phi0, 200.0, 1e-2, 0.1), PreconditionError);
}

TEST_CASE("discretized operator contracts the transient part") {
  Rng rng(7);
  for (int g = 0; g < 5; ++g) {
    const Hypergraph h = testing_support::random_connected(rng, 6, 4, 4);
    const double gamma2 = exact_gamma(h, {constant_minimizer(h)}).gamma;
    const Vector sw = h.vertex_weights().cwiseSqrt();
    for (int s = 0; s < 10; ++s) {
      Vector x = testing_support::random_vector(rng, 6);
      x -= (x.dot(sw) / sw.squaredNorm()) * sw;
      const Vector mx = discretized_step(h, normalized(x)).values;
      const Vector pmx = mx - (mx.dot(sw) / sw.squaredNorm()) * sw;
      CHECK(pmx.norm() <= std::sqrt(1.0 - gamma2 / 2.0) * x.norm() + 1e-9);

      const Vector phi = random_distribution(rng, 6);
      CHECK(discretized_step(h, measure(phi)).values.minCoeff() >= -1e-15);
    }
  }
}

TEST_CASE("diameter check") {
  const Hypergraph whole = parse("4 1\n1 4 0 1 2 3\n");
  CHECK(diameter_check(whole, 1.0).actual == 1);
  for (int k = 1; k <= 5; ++k) {
    std::vector<Hyperedge> edges;
    for (int i = 0; i < k; ++i) edges.push_back({{i, i + 1}, 1.0});
    const Hypergraph path(k + 1, edges);
    const DiameterReport r = diameter_check(path, exact_gamma(path, {constant_minimizer(path)}).gamma);
    CHECK(r.actual == k);
    CHECK(r.actual <= r.integer_bound);
    CHECK(r.integer_bound > r.bound);
    if (k > 1) CHECK(r.actual <= r.bound);
  }
  Rng rng(8);
  for (int g = 0; g < 10; ++g) {
    const Hypergraph h = testing_support::random_connected(rng, 4 + g % 3, 2, 3);
    const DiameterReport r = diameter_check(h, exact_gamma(h, {constant_minimizer(h)}).gamma);
    CHECK(r.actual <= r.bound);
  }
  CHECK_THROWS_AS(diameter_check(parse("4 2\n1 2 0 1\n1 2 2 3\n"), 0.5), DomainError);
  CHECK_THROWS_AS(diameter_check(whole, 0.0), DomainError);
}
