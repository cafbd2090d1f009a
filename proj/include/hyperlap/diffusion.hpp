#pragma once

#include <cstdint>
#include <vector>

#include "hyperlap/hypergraph.hpp"
#include "hyperlap/laplacian.hpp"

namespace hyperlap {

struct DiffusionConfig {
  double horizon = 1.0;
  double step = 0.0;  // <= 0 selects the default 0.01 / gap (or 0.01)
  double eta = 0.0;
  std::uint64_t seed = 0;
  double gap_estimate = 0.0;
  long stride = 0;  // <= 0 selects ceil(T / (1000 h))
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;         // measure space
  std::vector<double> rayleigh;       // R of the transient component, normalized space
  std::vector<double> l1_distance;    // ||phi_t - phi*||_1
  DiffusionConfig config;
  long steps = 0;
};

Vector stationary_measure(const Hypergraph& h, double mass);

// Transient component Pi x of a measure-space vector, returned in normalized space.
Vector transient_component(const Hypergraph& h, const Vector& phi);

Trajectory simulate_diffusion(const Hypergraph& h, const SpaceVector& phi0, DiffusionConfig cfg);
Trajectory simulate_stochastic(const Hypergraph& h, const SpaceVector& phi0, DiffusionConfig cfg);

// Rayleigh quotient of Pi x for a measure-space phi; zero when Pi x vanishes.
double transient_rayleigh(const Hypergraph& h, const Vector& phi);

struct SlowStart {
  SpaceVector phi0;      // measure space, nonnegative, unit mass
  SpaceVector y_hat;     // normalized space, Pi of the rescaled positive part
  double rayleigh_y = 0.0;
  double rayleigh_y_hat = 0.0;
  double l1_distance = 0.0;
};

SlowStart slow_mixing_start(const Hypergraph& h, const SpaceVector& y);

// Time after which the deterministic walk is delta-close to stationarity.
double mixing_time_upper(const Hypergraph& h, double gamma2, double delta);
// Time before which a slow start is still delta-far.
double mixing_time_lower(const Hypergraph& h, double gamma, double delta);

struct SlowMixingCut {
  CutResult cut;
  double rayleigh = 0.0;       // R of the transient component at T
  double distance = 0.0;       // ||phi_T - phi*||_1
  double log_bound = 0.0;      // (1/T) ln(||phi0 - phi*||_1 / (sqrt(phi*_min) delta))
  double sweep_bound = 0.0;    // R + 2 sqrt(R / r_min)
};

SlowMixingCut cut_from_slow_mixing(const Hypergraph& h, const SpaceVector& phi0, double horizon, double step,
                                   double delta);

// phi - (measure Laplacian) phi / 2.
SpaceVector discretized_step(const Hypergraph& h, const SpaceVector& phi);

struct DiameterReport {
  double bound = 0.0;     // 2 ln N_w / ln(1 / (1 - gamma2 / 2))
  int actual = 0;         // BFS hop diameter
  int integer_bound = 0;  // smallest integer strictly above bound: what the walk argument yields
};

DiameterReport diameter_check(const Hypergraph& h, double gamma2);

}  // namespace hyperlap
