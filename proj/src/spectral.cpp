#include "hyperlap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gram_solver.hpp"
#include "hyperlap/parallel.hpp"
#include "hyperlap/random.hpp"

namespace hyperlap {

const char* method_name(MinimizerMethod m) {
  switch (m) {
    case MinimizerMethod::Oracle: return "oracle";
    case MinimizerMethod::Sdp: return "sdp";
    case MinimizerMethod::Given: return "given";
  }
  return "?";
}

Vector constant_minimizer(const Hypergraph& h) {
  return Vector::Ones(h.num_vertices()) / std::sqrt(h.total_weight());
}

MinimizerSet make_minimizer_set(const Hypergraph& h, std::vector<Vector> vectors, MinimizerMethod method) {
  MinimizerSet out;
  out.method = method;
  for (auto& v : vectors) {
    Vector f = v;
    for (const auto& o : out.vectors) f -= weighted_inner(h, f, o) * o;
    const double norm = std::sqrt(weighted_norm_sq(h, f));
    if (!(norm > 1e-10 * std::sqrt(weighted_norm_sq(h, v)))) throw DomainError("minimizer vectors are dependent");
    f /= norm;
    out.ratios.push_back(discrepancy_weighted(h, f));
    out.vectors.push_back(std::move(f));
  }
  return out;
}

double gram_objective(const Hypergraph& h, const Matrix& g) {
  double total = 0.0;
  for (const auto& e : h.edges()) {
    double best = 0.0;
    for (std::size_t a = 0; a < e.vertices.size(); ++a)
      for (std::size_t b = a + 1; b < e.vertices.size(); ++b)
        best = std::max(best, (g.row(e.vertices[a]) - g.row(e.vertices[b])).squaredNorm());
    total += e.weight * best;
  }
  return total;
}

namespace {

struct PairTable {
  Matrix diffs;                  // m x P, column p = b_p
  std::vector<int> edge_start;   // pairs of edge i are [edge_start[i], edge_start[i+1])
  std::vector<double> edge_weight;
  double log_weight = 0.0;       // sum_e w_e ln |P_e|
};

PairTable build_pairs(const Hypergraph& h, const Matrix& basis) {
  PairTable t;
  std::vector<Vector> cols;
  t.edge_start.push_back(0);
  for (const auto& e : h.edges()) {
    const auto& vs = e.vertices;
    if (vs.size() < 2) continue;
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        cols.push_back((basis.row(vs[a]) - basis.row(vs[b])).transpose());
    t.edge_start.push_back(static_cast<int>(cols.size()));
    t.edge_weight.push_back(e.weight);
    const double pairs = static_cast<double>(vs.size() * (vs.size() - 1) / 2);
    t.log_weight += e.weight * std::log(std::max(pairs, 1.0));
  }
  t.diffs.resize(basis.cols(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t p = 0; p < cols.size(); ++p) t.diffs.col(p) = cols[p];
  return t;
}

struct SdpEvaluation {
  double exact = 0.0;     // sum_e w_e max_p s_p
  double smooth = 0.0;
  Vector coeffs;          // per-pair softmax weight times w_e
};

SdpEvaluation evaluate_pairs(const PairTable& t, const Matrix& z, double mu) {
  SdpEvaluation ev;
  const Matrix zb = z * t.diffs;
  const Vector s = (t.diffs.array() * zb.array()).colwise().sum().transpose();
  ev.coeffs = Vector::Zero(s.size());
  Vector weights;
  for (std::size_t i = 0; i + 1 < t.edge_start.size(); ++i) {
    const int begin = t.edge_start[i], len = t.edge_start[i + 1] - begin;
    const Vector seg = s.segment(begin, len);
    ev.exact += t.edge_weight[i] * seg.maxCoeff();
    ev.smooth += t.edge_weight[i] * detail::soft_max(seg, mu, weights);
    ev.coeffs.segment(begin, len) = t.edge_weight[i] * weights;
  }
  return ev;
}

Matrix weighted_gram(const PairTable& t, const Vector& coeffs) {
  return t.diffs * coeffs.asDiagonal() * t.diffs.transpose();
}

// Minimum eigenvalue of sum_p c_p b_p b_p^T: a lower bound on the SDP value.
double dual_bound(const PairTable& t, const Vector& coeffs) {
  if (t.diffs.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(weighted_gram(t, coeffs), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct Solved {
  Matrix z;
  double upper = 0.0;
  double lower = 0.0;
  int iterations = 0;
};

Solved solve_from(const PairTable& t, Matrix z0, const SdpConfig& cfg) {
  const int m = static_cast<int>(z0.rows());
  Solved out;
  out.z = detail::project_spectraplex(z0);
  if (t.diffs.cols() == 0) {
    out.upper = out.lower = 0.0;
    return out;
  }
  double upper = evaluate_pairs(t, out.z, 1.0).exact;
  double lower = -std::numeric_limits<double>::infinity();
  const double abs_tol = 1e-9;
  double mu = 0.05 * std::max(upper, 1e-3) / std::max(t.log_weight, 1e-12);
  int budget = cfg.max_iterations;

  auto certify = [&](const Matrix& z) {
    // Smoothing-free weights at a small temperature give the tightest certificate.
    for (double temp : {mu, mu * 0.1}) {
      const SdpEvaluation ev = evaluate_pairs(t, z, std::max(temp, 1e-300));
      lower = std::max(lower, dual_bound(t, ev.coeffs));
    }
    const double value = evaluate_pairs(t, z, mu).exact;
    if (value < upper) {
      upper = value;
      out.z = z;
    }
    return upper - lower <= cfg.rel_gap * 0.5 * std::abs(upper) + abs_tol;
  };

  Matrix z = out.z;
  while (budget > 0) {
    const detail::SmoothFn fn = [&](const Matrix& x, Matrix* grad) {
      const SdpEvaluation ev = evaluate_pairs(t, x, mu);
      if (grad) *grad = weighted_gram(t, ev.coeffs);
      return ev.smooth;
    };
    bool done = false;
    const detail::StopFn stop = [&](const Matrix& x, int) { return done = certify(x); };
    const int stage_cap = std::min(budget, 400 + 40 * m);
    const auto res = detail::minimize_on_spectraplex(fn, z, stage_cap, stop);
    budget -= res.iterations;
    out.iterations += res.iterations;
    z = res.z;
    if (done || certify(z)) break;
    // Tighten the smoothing once the stage has settled.
    if (mu * t.log_weight > 0.1 * cfg.rel_gap * std::max(upper, abs_tol)) mu *= 0.2;
  }
  out.upper = upper;
  out.lower = lower;
  return out;
}

}  // namespace

GramSolution solve_sdp(const Hypergraph& h, const std::vector<Vector>& prior, const SdpConfig& cfg) {
  const int n = h.num_vertices();
  if (static_cast<int>(prior.size()) >= n) throw DomainError("prior already spans the space");
  const Vector sw = h.vertex_weights().cwiseSqrt();
  Matrix images(n, prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) images.col(i) = prior[i].cwiseProduct(sw);
  const Matrix q = detail::orthogonal_complement(images, n);
  const Matrix basis = sw.cwiseInverse().asDiagonal() * q;  // X = basis Z basis^T
  const int m = static_cast<int>(basis.cols());
  const PairTable table = build_pairs(h, basis);

  const int restarts = std::max(1, cfg.restarts);
  std::vector<Solved> runs(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Matrix z0 = Matrix::Identity(m, m) / m;
    if (r > 0) {
      Rng rng = make_rng(cfg.seed, "sdp-restart", r);
      Matrix g(m, m);
      for (int c = 0; c < m; ++c) g.col(c) = gaussian_vector(rng, m);
      z0 = g * g.transpose();
      z0 /= z0.trace();
    }
    runs[r] = solve_from(table, z0, cfg);
  });
  std::size_t best = 0;
  double best_lower = runs[0].lower;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].upper < runs[best].upper) best = r;
    best_lower = std::max(best_lower, runs[r].lower);
  }

  GramSolution out;
  const Matrix g = basis * detail::psd_sqrt(runs[best].z);
  out.vectors = Matrix::Zero(n, n);
  out.vectors.leftCols(m) = g;
  out.objective = gram_objective(h, out.vectors);
  out.lower_bound = std::min(best_lower, out.objective);
  out.best_restart_objective = runs[best].upper;
  for (const auto& r : runs) out.iterations += r.iterations;
  out.residual_norm = (out.vectors.transpose() * h.vertex_weights().asDiagonal() * out.vectors).trace() - 1.0;
  for (const auto& f : prior)
    out.residual_orth.push_back((out.vectors.transpose() * f.cwiseProduct(h.vertex_weights())).norm());
  std::vector<double> residuals{std::abs(out.residual_norm)};
  residuals.insert(residuals.end(), out.residual_orth.begin(), out.residual_orth.end());
  if (*std::max_element(residuals.begin(), residuals.end()) > cfg.feas_tol)
    throw ConvergenceError("SDP solution violates the feasibility tolerance", residuals);
  return out;
}

double rounding_bound(const Hypergraph& h, double sdpval) {
  return 384.0 * std::log(static_cast<double>(std::max(h.max_rank(), 2))) * sdpval;
}

RoundingResult gaussian_round(const Hypergraph& h, const GramSolution& sol, const std::vector<Vector>& prior,
                              int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("rounding needs at least one trial");
  RoundingResult best;
  best.ratio = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 2 && best.best_trial < 0; ++attempt) {
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng = make_rng(seed, attempt == 0 ? "round" : "round-retry", trial);
      const Vector z = gaussian_vector(rng, sol.vectors.cols());
      const Vector f = sol.vectors * z;
      const double norm = std::sqrt(weighted_norm_sq(h, f));
      if (!(norm > 1e-300)) continue;
      for (const auto& p : prior) {
        const double r = std::abs(weighted_inner(h, f, p)) / (norm * std::sqrt(weighted_norm_sq(h, p)));
        best.max_orth_residual = std::max(best.max_orth_residual, r);
      }
      const double ratio = discrepancy_weighted(h, f);
      if (ratio < best.ratio) {
        best.ratio = ratio;
        best.f = f;
        best.best_trial = trial;
      }
    }
  }
  if (best.best_trial < 0) throw StochasticFailure("every rounding trial produced the zero vector", trials);
  return best;
}

MinimizerSet approx_procedural_minimizers(const Hypergraph& h, int k, const SdpConfig& cfg, int trials) {
  if (k < 1 || k >= h.num_vertices() + 1) throw DomainError("k must lie in [1, n]");
  MinimizerSet out;
  out.method = MinimizerMethod::Sdp;
  out.vectors.push_back(constant_minimizer(h));
  out.ratios.push_back(0.0);
  out.sdp_values.push_back(0.0);
  out.seeds.push_back(cfg.seed);
  out.residuals.push_back(0.0);
  for (int i = 2; i <= k; ++i) {
    SdpConfig stage = cfg;
    stage.seed = derive_seed(cfg.seed, "sdp", i);
    const GramSolution sol = solve_sdp(h, out.vectors, stage);
    const std::uint64_t round_seed = derive_seed(cfg.seed, "rounding", i);
    const RoundingResult rounded = gaussian_round(h, sol, out.vectors, trials, round_seed);
    Vector f = rounded.f;
    for (const auto& o : out.vectors) f -= weighted_inner(h, f, o) * o;
    const double drift = (f - rounded.f).norm() / rounded.f.norm();
    f /= std::sqrt(weighted_norm_sq(h, f));
    out.vectors.push_back(f);
    out.ratios.push_back(discrepancy_weighted(h, f));
    out.sdp_values.push_back(sol.objective);
    out.seeds.push_back(round_seed);
    out.residuals.push_back(std::max(drift, rounded.max_orth_residual));
  }
  return out;
}

MinimaximizerReport minimaximizer_report(const Hypergraph& h, const MinimizerSet& candidates,
                                         std::optional<double> gamma, int grid, std::uint64_t seed) {
  MinimaximizerReport out;
  out.k = static_cast<int>(candidates.size());
  if (out.k == 0) throw DomainError("report needs at least one candidate");
  for (const auto& f : candidates.vectors) out.xi_upper = std::max(out.xi_upper, discrepancy_weighted(h, f));
  out.gamma = gamma;

  auto ratio_at = [&](const Vector& coeffs) {
    Vector f = Vector::Zero(h.num_vertices());
    for (int i = 0; i < out.k; ++i) f += coeffs(i) * candidates.vectors[i];
    return weighted_norm_sq(h, f) > 0.0 ? discrepancy_weighted(h, f) : 0.0;
  };

  double best = 0.0;
  Vector best_coeffs = Vector::Unit(out.k, 0);
  auto consider = [&](const Vector& c) {
    const double r = ratio_at(c);
    ++out.samples;
    if (r > best) {
      best = r;
      best_coeffs = c;
    }
  };
  for (int i = 0; i < out.k; ++i) consider(Vector::Unit(out.k, i));
  if (out.k == 2) {
    for (int s = 0; s < grid; ++s) {
      const double theta = M_PI * s / grid;
      consider(Vector{{std::cos(theta), std::sin(theta)}});
    }
  } else if (out.k > 2) {
    Rng rng = make_rng(seed, "span-grid");
    for (int s = 0; s < grid; ++s) consider(gaussian_vector(rng, out.k).normalized());
  }
  // Local refinement around the best sample by shrinking coordinate steps.
  for (double step = 0.05; step > 1e-9 && out.k > 1; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < out.k; ++i) {
        for (double sign : {1.0, -1.0}) {
          Vector c = best_coeffs;
          c(i) += sign * step;
          c.normalize();
          const double before = best;
          consider(c);
          improved = improved || best > before;
        }
      }
    }
  }
  out.span_max = best;
  out.span_within_k_xi = out.span_max <= out.k * out.xi_upper + 1e-9;
  if (gamma) out.gamma_below_span = *gamma <= out.span_max + 1e-7;
  return out;
}

}  // namespace hyperlap
