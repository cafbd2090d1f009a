#include "hyperlap/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hyperlap/parallel.hpp"

namespace hyperlap {

SpectralEmbedding spectral_embedding(const MinimizerSet& f) {
  if (f.size() == 0) throw DomainError("embedding needs at least one vector");
  const Eigen::Index n = f.vectors.front().size();
  SpectralEmbedding emb;
  emb.u.resize(n, static_cast<Eigen::Index>(f.size()));
  for (std::size_t s = 0; s < f.size(); ++s) emb.u.col(s) = f.vectors[s];
  emb.norm_sq = emb.u.rowwise().squaredNorm();
  emb.unit = Matrix::Zero(n, emb.u.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    if (emb.norm_sq(i) > 0.0) emb.unit.row(i) = emb.u.row(i) / std::sqrt(emb.norm_sq(i));
  return emb;
}

double embedding_discrepancy(const Hypergraph& h, const SpectralEmbedding& emb) {
  double num = 0.0;
  for (const auto& e : h.edges()) {
    double best = 0.0;
    for (std::size_t a = 0; a < e.vertices.size(); ++a)
      for (std::size_t b = a + 1; b < e.vertices.size(); ++b)
        best = std::max(best, (emb.u.row(e.vertices[a]) - emb.u.row(e.vertices[b])).squaredNorm());
    num += e.weight * best;
  }
  return num / emb.norm_sq.dot(h.vertex_weights());
}

double mu_measure(const Hypergraph& h, const SpectralEmbedding& emb, const VertexSet& s) {
  double total = 0.0;
  for (int i : s) total += h.vertex_weight(i) * emb.norm_sq(i);
  return total;
}

double nu_measure(const Hypergraph& h, const SpectralEmbedding& emb, const VertexSet& s) {
  const auto in = membership(h.num_vertices(), s);
  double total = 0.0;
  for (const auto& e : h.edges()) {
    int inside = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, hi_in = 0.0;
    for (int v : e.vertices) {
      lo = std::min(lo, emb.norm_sq(v));
      hi = std::max(hi, emb.norm_sq(v));
      if (in[v]) {
        ++inside;
        hi_in = std::max(hi_in, emb.norm_sq(v));
      }
    }
    if (inside == static_cast<int>(e.vertices.size())) total += e.weight * (hi - lo);
    else if (inside > 0) total += e.weight * hi_in;
  }
  return total;
}

CutResult threshold_cut(const Hypergraph& h, const SpectralEmbedding& emb, const VertexSet& s) {
  Vector x = Vector::Zero(h.num_vertices());
  for (int i : s) x(i) = emb.norm_sq(i);
  return sweep_cut(h, weighted(x), SweepMode::NonNegative);
}

double separator_alpha(int tau) { return 1.0 / (2.0 * tau); }

int separator_hyperplanes(int tau) { return static_cast<int>(std::ceil(std::log2(static_cast<double>(tau)))); }

VertexSet orthogonal_separator(const Matrix& vectors, double beta, int tau, Rng& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("separator beta must lie in (0, 1)");
  if (tau < 2) throw DomainError("separator tau must be at least 2");
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const double norm = vectors.row(i).norm();
    if (norm != 0.0 && std::abs(norm - 1.0) > 1e-8) throw DomainError("separator needs unit vectors");
  }
  const int planes = separator_hyperplanes(tau);
  const double keep = separator_alpha(tau) * std::ldexp(1.0, planes);
  Matrix g(vectors.cols(), planes);
  for (int j = 0; j < planes; ++j) g.col(j) = gaussian_vector(rng, vectors.cols());
  std::uniform_int_distribution<std::uint64_t> word_dist(0, (std::uint64_t{1} << planes) - 1);
  const std::uint64_t word = word_dist(rng);
  std::bernoulli_distribution coin(std::min(1.0, keep));
  if (!coin(rng)) return {};
  const Matrix proj = vectors * g;
  VertexSet out;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    if (vectors.row(i).squaredNorm() == 0.0) continue;
    std::uint64_t w = 0;
    for (int j = 0; j < planes; ++j)
      if (proj(i, j) >= 0.0) w |= std::uint64_t{1} << j;
    if (w == word) out.push_back(static_cast<int>(i));
  }
  return out;
}

VertexSet orthogonal_separator(const Matrix& vectors, double beta, int tau, std::uint64_t seed) {
  Rng rng = make_rng(seed, "separator");
  return orthogonal_separator(vectors, beta, tau, rng);
}

SseResult small_set_expansion(const Hypergraph& h, const MinimizerSet& f, std::uint64_t seed,
                              double failure_probability) {
  const int k = static_cast<int>(f.size());
  if (k < 2) throw DomainError("small-set expansion needs k >= 2");
  if (!(failure_probability > 0.0 && failure_probability < 1.0)) throw DomainError("failure probability in (0, 1)");
  const int n = h.num_vertices();
  const SpectralEmbedding emb = spectral_embedding(f);
  SseResult out;
  out.k = k;
  out.alpha = separator_alpha(k);
  out.support_limit = 24.0 * n / k;
  out.mass_threshold = k * out.alpha / 2.0;
  const int rounds = static_cast<int>(std::ceil(48.0 * std::log(1.0 / failure_probability)));
  out.rounds.resize(rounds);
  std::vector<CutResult> cuts(rounds);

  parallel_for(rounds, [&](std::size_t t) {
    Rng rng = make_rng(seed, "sse-round", t);
    const VertexSet s = orthogonal_separator(emb.unit, 0.99, k, rng);
    SseRound& round = out.rounds[t];
    Vector x = Vector::Zero(n);
    for (int i : s) x(i) = emb.norm_sq(i);
    round.support = static_cast<int>((x.array() > 0.0).count());
    round.mass = x.dot(h.vertex_weights());
    if (round.support == 0 || round.support > out.support_limit || round.mass < out.mass_threshold) return;
    try {
      cuts[t] = sweep_cut(h, weighted(x), SweepMode::NonNegative);
    } catch (const DomainError&) {
      return;  // the support was all of V: no proper level set
    }
    round.accepted = true;
    round.expansion = cuts[t].expansion;
  });

  // Lowest expansion; ties go to the smaller set.
  auto better = [&](int a, int b) {
    if (cuts[a].expansion != cuts[b].expansion) return cuts[a].expansion < cuts[b].expansion;
    return cuts[a].subset.size() < cuts[b].subset.size();
  };
  int best = -1;
  for (int t = 0; t < rounds; ++t)
    if (out.rounds[t].accepted && (best < 0 || better(t, best))) best = t;
  if (best < 0) throw StochasticFailure("no small-set expansion round met the support and mass conditions", rounds);
  out.cut = cuts[best];
  return out;
}

namespace {

struct Merged {
  VertexSet set;
  double mu = 0.0;
};

// One run of the sampling algorithm; returns the thresholded sets sorted by expansion.
std::vector<std::pair<CutResult, double>> multiway_attempt(const Hypergraph& h, const SpectralEmbedding& emb,
                                                           double eps, int tau, double beta, int samples,
                                                           std::uint64_t seed) {
  const int n = h.num_vertices();
  std::vector<VertexSet> sampled(samples);
  parallel_for(samples, [&](std::size_t l) {
    Rng rng = make_rng(seed, "multiway-sample", l);
    sampled[l] = orthogonal_separator(emb.unit, beta, tau, rng);
  });

  // Filter by mu, then make disjoint in sample order.
  std::vector<char> taken(n, 0);
  std::vector<Merged> pieces;
  for (const auto& s : sampled) {
    if (s.empty() || mu_measure(h, emb, s) > 1.0 + eps / 4.0) continue;
    Merged piece;
    for (int v : s) {
      if (taken[v]) continue;
      taken[v] = 1;
      piece.set.push_back(v);
    }
    piece.mu = mu_measure(h, emb, piece.set);
    if (!piece.set.empty()) pieces.push_back(std::move(piece));
  }

  // Merge in descending mu: large pieces stand alone, small ones accumulate.
  std::stable_sort(pieces.begin(), pieces.end(), [](const Merged& a, const Merged& b) { return a.mu > b.mu; });
  std::vector<Merged> merged;
  Merged pending;
  for (auto& piece : pieces) {
    if (piece.mu >= 0.25) {
      merged.push_back(std::move(piece));
      continue;
    }
    pending.set.insert(pending.set.end(), piece.set.begin(), piece.set.end());
    pending.mu += piece.mu;
    if (pending.mu >= 0.25) {
      merged.push_back(std::move(pending));
      pending = Merged{};
    }
  }

  std::vector<std::pair<CutResult, double>> out;
  for (auto& m : merged) {
    std::sort(m.set.begin(), m.set.end());
    try {
      out.emplace_back(threshold_cut(h, emb, m.set), m.mu);
    } catch (const DomainError&) {
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first.expansion < b.first.expansion; });
  return out;
}

}  // namespace

MultiwayResult multiway_partition(const Hypergraph& h, const MinimizerSet& f, double eps, std::uint64_t seed) {
  const int k = static_cast<int>(f.size());
  if (k < 1) throw DomainError("multiway partition needs at least one vector");
  if (!(eps >= 1.0 / k - 1e-12 && eps < 1.0)) throw DomainError("eps must lie in [1/k, 1)");
  const int n = h.num_vertices();
  const SpectralEmbedding emb = spectral_embedding(f);

  MultiwayResult out;
  out.required = static_cast<int>(std::floor((1.0 - eps) * k + 1e-9));
  out.tau = std::max(2, static_cast<int>(std::ceil(16.0 * k / eps - 1e-9)));
  out.beta = 1.0 - eps / 72.0;
  out.alpha = separator_alpha(out.tau);
  out.samples_per_attempt = static_cast<int>(std::ceil(2.0 * std::log(4.0 * n) / out.alpha));

  for (int attempt = 0; attempt < kMaxStochasticRetries; ++attempt) {
    ++out.attempts;
    auto sets = multiway_attempt(h, emb, eps, out.tau, out.beta, out.samples_per_attempt,
                                 derive_seed(seed, "multiway-attempt", attempt));
    if (static_cast<int>(sets.size()) < out.required) continue;
    for (auto& [cut, mu] : sets) {
      out.sets.push_back(std::move(cut));
      out.merged_mu.push_back(mu);
    }
    return out;
  }
  throw StochasticFailure("multiway partition produced too few sets", out.attempts);
}

}  // namespace hyperlap
