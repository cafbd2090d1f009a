#include "hyperlap/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hyperlap/random.hpp"

namespace hyperlap {

Vector stationary_measure(const Hypergraph& h, double mass) {
  return h.vertex_weights() * (mass / h.total_weight());
}

Vector transient_component(const Hypergraph& h, const Vector& phi) {
  const Vector sw = h.vertex_weights().cwiseSqrt();
  const Vector x = phi.cwiseQuotient(sw);
  return x - (x.dot(sw) / h.total_weight()) * sw;
}

double transient_rayleigh(const Hypergraph& h, const Vector& phi) {
  const Vector y = transient_component(h, phi);
  const Vector x = phi.cwiseQuotient(h.vertex_weights().cwiseSqrt());
  if (!(y.norm() > 1e-13 * std::max(1e-300, x.norm()))) return 0.0;
  return discrepancy_weighted(h, Vector(y.cwiseQuotient(h.vertex_weights().cwiseSqrt())));
}

namespace {

constexpr int kMaxRegroupRounds = 16;
// Growth beyond this factor of the starting scale counts as divergence: the rate
// computation would overflow well before the state itself turns non-finite.
constexpr double kDivergenceGrowth = 1e100;

// One explicit Euler step in measure space. Vertices whose order would flip within the step
// meet during it: they are regrouped into one class for the rate, and each regrouped run that
// moves at a common rate is snapped to its weighted mean. This removes chattering around ties.
Vector euler_step(const Hypergraph& h, const Vector& phi, double step) {
  const Vector& w = h.vertex_weights();
  const Vector f = phi.cwiseQuotient(w);
  std::vector<int> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a) < f(b); });
  RateOptions options;
  RateResult r = compute_rate(h, f, options);
  for (int round = 0; round < kMaxRegroupRounds; ++round) {
    const Vector next = f + step * r.rate;
    double gap = 0.0;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const int a = order[i - 1], b = order[i];
      if (next(a) > next(b) && f(b) - f(a) > options.merge_gap) gap = std::max(gap, f(b) - f(a));
    }
    if (gap == 0.0) break;
    options.merge_gap = gap * (1.0 + 1e-12);
    r = compute_rate(h, f, options);
  }
  Vector out = phi + step * r.measure_rate;
  if (options.merge_gap == 0.0) return out;

  const double rate_tol = 1e-12 * (1.0 + r.rate.cwiseAbs().maxCoeff());
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    const bool joined = i < order.size() && r.vertex_class[order[i]] == r.vertex_class[order[i - 1]] &&
                        std::abs(r.rate(order[i]) - r.rate(order[i - 1])) <= rate_tol;
    if (joined) continue;
    if (i - begin > 1) {
      double mass = 0.0, weight = 0.0;
      for (std::size_t j = begin; j < i; ++j) {
        mass += out(order[j]);
        weight += w(order[j]);
      }
      for (std::size_t j = begin; j < i; ++j) out(order[j]) = w(order[j]) * (mass / weight);
    }
    begin = i;
  }
  return out;
}

Trajectory integrate(const Hypergraph& h, const SpaceVector& start, DiffusionConfig cfg, bool noisy) {
  if (!(cfg.horizon >= 0.0)) throw DomainError("horizon must be non-negative");
  if (cfg.eta < 0.0) throw DomainError("noise rate must be non-negative");
  if (cfg.step <= 0.0) cfg.step = cfg.gap_estimate > 0.0 ? 0.01 / cfg.gap_estimate : 0.01;
  const double h_step = cfg.step;
  const long steps = static_cast<long>(std::ceil(cfg.horizon / h_step - 1e-9));
  if (cfg.stride <= 0) cfg.stride = std::max<long>(1, static_cast<long>(std::ceil(cfg.horizon / (1000.0 * h_step))));

  Vector phi = convert(h, start, Space::Measure).values;
  const double limit = kDivergenceGrowth * std::max(1.0, phi.cwiseAbs().maxCoeff());
  const Vector sw = h.vertex_weights().cwiseSqrt();
  Rng rng = make_rng(cfg.seed, "stochastic-diffusion");
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise_scale = std::sqrt(cfg.eta * h_step);

  Trajectory out;
  out.config = cfg;
  out.steps = steps;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.states.push_back(phi);
    out.rayleigh.push_back(transient_rayleigh(h, phi));
    out.l1_distance.push_back((phi - stationary_measure(h, phi.sum())).cwiseAbs().sum());
  };
  record(0.0);
  for (long k = 1; k <= steps; ++k) {
    phi = euler_step(h, phi, h_step);
    if (noisy && cfg.eta > 0.0) {
      for (Eigen::Index v = 0; v < phi.size(); ++v) phi(v) += noise_scale * sw(v) * normal(rng);
    }
    if (!phi.allFinite() || phi.cwiseAbs().maxCoeff() > limit) throw DivergenceError(k);
    if (k % cfg.stride == 0 || k == steps) record(std::min(cfg.horizon, k * h_step));
  }
  return out;
}

}  // namespace

Trajectory simulate_diffusion(const Hypergraph& h, const SpaceVector& phi0, DiffusionConfig cfg) {
  cfg.eta = 0.0;
  return integrate(h, phi0, cfg, false);
}

Trajectory simulate_stochastic(const Hypergraph& h, const SpaceVector& phi0, DiffusionConfig cfg) {
  return integrate(h, phi0, cfg, true);
}

SlowStart slow_mixing_start(const Hypergraph& h, const SpaceVector& yv) {
  const Vector y = convert(h, yv, Space::Normalized).values;
  const Vector sw = h.vertex_weights().cwiseSqrt();
  const double norm = y.norm();
  if (!(norm > 0.0)) throw DomainError("slow start needs a nonzero vector");
  if (std::abs(y.dot(sw)) > kOrthTolerance * norm * sw.norm())
    throw DomainError("slow start needs a vector orthogonal to the stationary direction");

  // Shift by a weighted median so both signed supports weigh at most w(V)/2.
  const Vector q = y.cwiseQuotient(sw);
  std::vector<int> order(q.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return q(a) < q(b); });
  double cumulative = 0.0, median = q(order.back());
  for (int v : order) {
    cumulative += h.vertex_weight(v);
    if (cumulative >= h.total_weight() / 2) {
      median = q(v);
      break;
    }
  }
  const Vector z = y - median * sw;
  const Vector pos = z.cwiseMax(0.0);
  const Vector neg = (-z).cwiseMax(0.0);
  auto project = [&](const Vector& x) -> Vector { return x - (x.dot(sw) / h.total_weight()) * sw; };
  const Vector& part = project(pos).norm() >= project(neg).norm() ? pos : neg;

  const Vector z_hat = part / part.dot(sw);
  SlowStart out;
  out.phi0 = measure(z_hat.cwiseProduct(sw));
  out.y_hat = normalized(project(z_hat));
  out.rayleigh_y = discrepancy_ratio(h, normalized(y));
  out.rayleigh_y_hat = discrepancy_ratio(h, out.y_hat);
  out.l1_distance = (out.phi0.values - stationary_measure(h, 1.0)).cwiseAbs().sum();
  return out;
}

double mixing_time_upper(const Hypergraph& h, double gamma2, double delta) {
  const double phi_min = h.vertex_weights().minCoeff() / h.total_weight();
  return std::log(1.0 / (delta * std::sqrt(phi_min))) / gamma2;
}

double mixing_time_lower(const Hypergraph& h, double gamma, double delta) {
  const double phi_min = h.vertex_weights().minCoeff() / h.total_weight();
  return std::log(std::sqrt(phi_min) / (2.0 * delta)) / (4.0 * gamma);
}

SlowMixingCut cut_from_slow_mixing(const Hypergraph& h, const SpaceVector& phi0v, double horizon, double step,
                                   double delta) {
  const Vector phi0 = convert(h, phi0v, Space::Measure).values;
  const Vector star = stationary_measure(h, phi0.sum());
  const double d0 = (phi0 - star).cwiseAbs().sum();
  if (!(d0 > delta)) throw PreconditionError("starting measure is already delta-close to stationary");
  DiffusionConfig cfg;
  cfg.horizon = horizon;
  cfg.step = step;
  const Trajectory traj = simulate_diffusion(h, measure(phi0), cfg);
  const Vector& phi_t = traj.states.back();
  SlowMixingCut out;
  out.distance = (phi_t - stationary_measure(h, phi_t.sum())).cwiseAbs().sum();
  if (!(out.distance > delta)) throw PreconditionError("trajectory mixed to within delta before the horizon");

  const Vector x_hat = transient_component(h, phi_t);
  const Vector f = x_hat.cwiseQuotient(h.vertex_weights().cwiseSqrt());
  out.rayleigh = discrepancy_weighted(h, f);
  out.cut = sweep_cut(h, weighted(f), SweepMode::Balanced);
  const double phi_min = h.vertex_weights().minCoeff() / h.total_weight();
  out.log_bound = std::log(d0 / (std::sqrt(phi_min) * delta)) / horizon;
  out.sweep_bound = out.rayleigh + 2.0 * std::sqrt(out.rayleigh / h.min_rank());
  return out;
}

SpaceVector discretized_step(const Hypergraph& h, const SpaceVector& phi) {
  const Vector m = convert(h, phi, Space::Measure).values;
  const RateResult r = compute_rate(h, Vector(m.cwiseQuotient(h.vertex_weights())));
  return convert(h, measure(m + 0.5 * r.measure_rate), phi.space);
}

DiameterReport diameter_check(const Hypergraph& h, double gamma2) {
  if (!(gamma2 > 0.0)) throw DomainError("diameter bound needs a positive spectral gap");
  DiameterReport out;
  out.actual = hop_diameter(h);
  const double nw = h.total_weight() / h.vertex_weights().minCoeff();
  const double contraction = 1.0 - gamma2 / 2.0;
  out.bound = contraction <= 0.0 ? 0.0 : 2.0 * std::log(nw) / std::log(1.0 / contraction);
  out.integer_bound = static_cast<int>(std::floor(out.bound)) + 1;
  return out;
}

}  // namespace hyperlap
