#pragma once

#include <cstdint>
#include <vector>

#include "hyperlap/hypergraph.hpp"
#include "hyperlap/random.hpp"
#include "hyperlap/spectral.hpp"

namespace hyperlap {

// Row i is u_i with u_i(s) = f_s(i); unit rows are the normalized copies (zero rows stay zero).
struct SpectralEmbedding {
  Matrix u;
  Matrix unit;
  Vector norm_sq;

  int dimension() const { return static_cast<int>(u.cols()); }
};

SpectralEmbedding spectral_embedding(const MinimizerSet& f);

// sum_e w_e max ||u_i - u_j||^2 / sum_i w_i ||u_i||^2.
double embedding_discrepancy(const Hypergraph& h, const SpectralEmbedding& emb);

double mu_measure(const Hypergraph& h, const SpectralEmbedding& emb, const VertexSet& s);
double nu_measure(const Hypergraph& h, const SpectralEmbedding& emb, const VertexSet& s);

// Best non-empty level set {i in S : ||u_i||^2 >= r}.
CutResult threshold_cut(const Hypergraph& h, const SpectralEmbedding& emb, const VertexSet& s);

// ---------------------------------------------------------------------------
// Orthogonal separator: ceil(log2 tau) Gaussian hyperplanes give each vector a sign word;
// a uniformly random word is kept with probability alpha 2^l, so Pr[u in S] = alpha exactly.

double separator_alpha(int tau);
int separator_hyperplanes(int tau);

// Rows of vectors must be unit or zero; zero rows are never selected.
VertexSet orthogonal_separator(const Matrix& vectors, double beta, int tau, Rng& rng);
VertexSet orthogonal_separator(const Matrix& vectors, double beta, int tau, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct SseRound {
  int support = 0;
  double mass = 0.0;  // sum_i w_i X_i
  bool accepted = false;
  double expansion = 0.0;
};

struct SseResult {
  CutResult cut;
  int k = 0;
  double alpha = 0.0;
  double support_limit = 0.0;  // 24 n / k
  double mass_threshold = 0.0; // k alpha / 2
  std::vector<SseRound> rounds;
};

SseResult small_set_expansion(const Hypergraph& h, const MinimizerSet& f, std::uint64_t seed,
                              double failure_probability = 0.01);

struct MultiwayResult {
  std::vector<CutResult> sets;
  int required = 0;
  int attempts = 0;
  int samples_per_attempt = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int tau = 0;
  std::vector<double> merged_mu;  // pre-threshold mu of each returned set
};

constexpr int kMaxStochasticRetries = 64;

MultiwayResult multiway_partition(const Hypergraph& h, const MinimizerSet& f, double eps, std::uint64_t seed);

}  // namespace hyperlap
