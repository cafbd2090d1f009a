#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

enum class MinimizerMethod { Oracle, Sdp, Given };

const char* method_name(MinimizerMethod m);

struct MinimizerSet {
  std::vector<Vector> vectors;  // weighted space, orthonormal in <.,.>_w
  std::vector<double> ratios;
  MinimizerMethod method = MinimizerMethod::Given;
  std::vector<std::uint64_t> seeds;
  std::vector<double> sdp_values;
  std::vector<double> residuals;

  std::size_t size() const { return vectors.size(); }
};

// 1 / ||1||_w.
Vector constant_minimizer(const Hypergraph& h);

// Orthonormalizes in <.,.>_w and records ratios; drops nothing, throws on dependence.
MinimizerSet make_minimizer_set(const Hypergraph& h, std::vector<Vector> vectors,
                                MinimizerMethod method = MinimizerMethod::Given);

struct GammaResult {
  double gamma = 0.0;
  Vector f;  // weighted space, ||f||_w = 1
};

constexpr int kExactGammaMaxVertices = 8;

// Minimum of D_w over the weighted-orthogonal complement of prior, by enumerating
// every weak ordering of V and solving the generalized eigenproblem on its face.
GammaResult exact_gamma(const Hypergraph& h, const std::vector<Vector>& prior);
inline GammaResult exact_gamma(const Hypergraph& h, const MinimizerSet& prior) {
  return exact_gamma(h, prior.vectors);
}

// f_1 = constant, then repeated exact_gamma.
MinimizerSet exact_minimizers(const Hypergraph& h, int k);

// ---------------------------------------------------------------------------
// SDP relaxation of the procedural minimizer problem.

struct SdpConfig {
  int max_iterations = 50000;
  int restarts = 5;
  double feas_tol = 1e-6;
  double rel_gap = 1e-3;
  std::uint64_t seed = 0;
};

struct GramSolution {
  Matrix vectors;  // row v is g_v, n columns
  double objective = 0.0;
  double lower_bound = 0.0;  // dual certificate
  double residual_norm = 0.0;
  std::vector<double> residual_orth;
  int iterations = 0;
  double best_restart_objective = 0.0;
};

double gram_objective(const Hypergraph& h, const Matrix& vectors);

GramSolution solve_sdp(const Hypergraph& h, const std::vector<Vector>& prior, const SdpConfig& cfg = {});

struct RoundingResult {
  Vector f;  // weighted space
  double ratio = 0.0;
  int best_trial = -1;
  double max_orth_residual = 0.0;
};

constexpr int kDefaultRoundingTrials = 72;

RoundingResult gaussian_round(const Hypergraph& h, const GramSolution& sol, const std::vector<Vector>& prior,
                              int trials = kDefaultRoundingTrials, std::uint64_t seed = 0);

MinimizerSet approx_procedural_minimizers(const Hypergraph& h, int k, const SdpConfig& cfg = {},
                                          int trials = kDefaultRoundingTrials);

// Hard ceiling from the rounding analysis: 384 ln(r) sdpval.
double rounding_bound(const Hypergraph& h, double sdpval);

// ---------------------------------------------------------------------------

struct MinimaximizerReport {
  int k = 0;
  double xi_upper = 0.0;   // max_i D_w(f_i), an upper bound on xi_k
  double span_max = 0.0;   // sampled max of D_w over span(candidates)
  std::optional<double> gamma;
  int samples = 0;
  bool span_within_k_xi = true;     // span_max <= k * xi_upper
  bool gamma_below_span = true;     // gamma_k <= span_max, when gamma is known
};

MinimaximizerReport minimaximizer_report(const Hypergraph& h, const MinimizerSet& candidates,
                                         std::optional<double> gamma = std::nullopt, int grid = 2000,
                                         std::uint64_t seed = 0);

}  // namespace hyperlap
