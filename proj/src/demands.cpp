#include "hyperlap/demands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "hyperlap/random.hpp"

namespace hyperlap {

void DemandInstance::validate() const {
  if (pairs.empty()) throw DomainError("demand instance needs at least one pair");
  for (const auto& p : pairs) {
    if (p.s < 0 || p.t < 0 || p.s >= h.num_vertices() || p.t >= h.num_vertices())
      throw ValidationError("demand endpoint out of range");
    if (p.s == p.t) throw ValidationError("demand pair with identical endpoints");
    if (!(p.demand > 0.0)) throw ValidationError("demand must be positive");
  }
}

VertexSet DemandInstance::terminals() const {
  std::vector<char> seen(h.num_vertices(), 0);
  for (const auto& p : pairs) seen[p.s] = seen[p.t] = 1;
  VertexSet out;
  for (int v = 0; v < h.num_vertices(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

std::vector<DemandPair> parse_demands(std::istream& in, int n) {
  std::vector<DemandPair> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long s = 0, t = 0;
    double d = 0.0;
    if (!(ls >> s >> t >> d)) throw ParseError(lineno, "expected \"s t D\"");
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing tokens");
    if (s < 0 || t < 0 || s >= n || t >= n) throw ParseError(lineno, "vertex index out of range");
    if (s == t) throw ValidationError("demand pair with identical endpoints on line " + std::to_string(lineno));
    if (!(d > 0.0)) throw ValidationError("non-positive demand on line " + std::to_string(lineno));
    out.push_back({static_cast<int>(s), static_cast<int>(t), d});
  }
  return out;
}

std::vector<DemandPair> load_demands(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_demands(in, n);
}

double separated_demand(const DemandInstance& inst, const std::vector<char>& in_set) {
  double total = 0.0;
  for (const auto& p : inst.pairs)
    if (in_set[p.s] != in_set[p.t]) total += p.demand;
  return total;
}

DemandCut demand_cut(const DemandInstance& inst, const VertexSet& s) {
  const auto in = membership(inst.h.num_vertices(), s);
  DemandCut out;
  out.subset = s;
  std::sort(out.subset.begin(), out.subset.end());
  out.cut_weight = cut_weight(inst.h, in);
  out.demand = separated_demand(inst, in);
  if (!(out.demand > 0.0)) throw DomainError("set separates no demand pair");
  out.sparsity = out.cut_weight / out.demand;
  return out;
}

DemandCut sparsest_cut_bruteforce(const DemandInstance& inst) {
  inst.validate();
  const int n = inst.h.num_vertices();
  if (n > 20) throw CapacityError("brute-force sparsest cut limited to n <= 20");
  DemandCut best;
  best.sparsity = std::numeric_limits<double>::infinity();
  std::vector<char> in(n);
  // The top vertex stays outside: Phi is symmetric under complement.
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << (n - 1)); ++mask) {
    for (int v = 0; v < n; ++v) in[v] = (mask >> v) & 1u;
    const double d = separated_demand(inst, in);
    if (!(d > 0.0)) continue;
    const double phi = cut_weight(inst.h, in) / d;
    if (phi < best.sparsity) {
      VertexSet s;
      for (int v = 0; v < n; ++v)
        if (in[v]) s.push_back(v);
      best = demand_cut(inst, s);
    }
  }
  return best;
}

Matrix squared_distances(const Matrix& vectors) {
  const Vector sq = vectors.rowwise().squaredNorm();
  Matrix d = -2.0 * vectors * vectors.transpose();
  d.colwise() += sq;
  d.rowwise() += sq.transpose();
  return d.cwiseMax(0.0);
}

namespace {

constexpr int kRoundingRetries = 64;
constexpr int kMaxCutRounds = 32;
constexpr double kBarrierGrowth = 8.0;
constexpr double kBoundaryFraction = 0.5;
constexpr double kNewtonTolerance = 1e-8;
constexpr int kMaxCenteringSteps = 500;  // near the optimum roundoff can stall Newton

struct Triangle {
  int a, b, c;  // d(a, c) <= d(a, b) + d(b, c)
};

std::vector<Triangle> all_triangles(int n) {
  std::vector<Triangle> out;
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c)
      for (int b = 0; b < n; ++b)
        if (b != a && b != c) out.push_back({a, b, c});
  return out;
}

double triangle_gap(const Matrix& d, const Triangle& t) { return d(t.a, t.c) - d(t.a, t.b) - d(t.b, t.c); }

// Sparse linear form over the solver variables.
struct Form {
  std::vector<std::pair<int, double>> terms;

  double operator()(const Vector& z) const {
    double v = 0.0;
    for (auto [i, c] : terms) v += c * z(i);
    return v;
  }
  Form& add(const Form& o, double scale) {
    for (auto [i, c] : o.terms) terms.emplace_back(i, scale * c);
    return *this;
  }
};

// Log-barrier interior point for the demands SDP. Vertex 0 is pinned at the origin and X is the
// Gram matrix of vertices 1..n-1, so each squared distance is a sparse linear form in X. Variables
// are the upper triangle of X followed by one epigraph variable t_e per edge of rank >= 2.
class DemandBarrier {
 public:
  explicit DemandBarrier(const DemandInstance& inst) {
    n_ = inst.h.num_vertices();
    m_ = n_ - 1;
    index_.assign(static_cast<std::size_t>(m_ * m_), -1);
    for (int i = 0; i < m_; ++i)
      for (int j = i; j < m_; ++j) {
        index_[i * m_ + j] = index_[j * m_ + i] = static_cast<int>(cells_.size());
        cells_.emplace_back(i, j);
      }
    p_ = static_cast<int>(cells_.size());
    int vars = p_;
    double d_min = std::numeric_limits<double>::infinity(), d_sum = 0.0;
    for (const auto& pr : inst.pairs) {
      demand_.add(distance(pr.s, pr.t), pr.demand);
      d_min = std::min(d_min, pr.demand);
      d_sum += pr.demand;
    }
    for (const auto& e : inst.h.edges()) {
      if (e.vertices.size() < 2) continue;
      const int t = vars++;
      cost_.emplace_back(t, e.weight);
      for (std::size_t i = 0; i < e.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < e.vertices.size(); ++j) {
          Form f;
          f.terms.emplace_back(t, 1.0);
          pairs_.push_back(f.add(distance(e.vertices[i], e.vertices[j]), -1.0));
        }
    }
    vars_ = vars;
    // Every cut solution has trace at most (n - 1) / D_min, so the bound never excludes one.
    trace_bound_ = 4.0 * n_ / d_min;
    start_scale_ = 1.0 / (2.0 * d_sum);
  }

  int vertices() const { return n_; }

  // Squared distance ||v_u - v_w||^2 as a form in X.
  Form distance(int u, int w) const {
    Form f;
    if (u > 0) f.terms.emplace_back(cell(u - 1, u - 1), 1.0);
    if (w > 0) f.terms.emplace_back(cell(w - 1, w - 1), 1.0);
    if (u > 0 && w > 0) f.terms.emplace_back(cell(u - 1, w - 1), -2.0);
    return f;
  }

  Matrix gram(const Vector& z) const {
    Matrix x(m_, m_);
    for (int k = 0; k < p_; ++k) {
      const auto [i, j] = cells_[k];
      x(i, j) = x(j, i) = z(k);
    }
    return x;
  }

  // Solves with the given triangle constraints; returns the final variables.
  Vector solve(const std::vector<Triangle>& triangles, double rel_gap, int& budget, int& iterations) const {
    std::vector<Form> rows = pairs_;
    for (const auto& t : triangles) {
      Form f = distance(t.a, t.b);
      f.add(distance(t.b, t.c), 1.0).add(distance(t.a, t.c), -1.0);
      rows.push_back(std::move(f));
    }
    // All pairwise distances equal: every triangle holds strictly.
    Vector z = Vector::Zero(vars_);
    for (int k = 0; k < p_; ++k) z(k) = (cells_[k].first == cells_[k].second ? 2.0 : 1.0) * start_scale_;
    for (std::size_t r = 0; r < pairs_.size(); ++r) {
      const int t = pairs_[r].terms.front().first;
      z(t) = 3.0 * start_scale_;
    }
    Vector a = Vector::Zero(vars_);
    for (auto [i, c] : demand_.terms) a(i) += c;

    const double theta = static_cast<double>(rows.size()) + m_ + 1.0;
    const double floor = 1e-10 * objective(z);
    double s = theta / std::max(objective(z), 1e-300);
    for (;;) {
      center(rows, a, s, z, budget, iterations);
      if (theta / s <= 0.1 * rel_gap * objective(z) + floor) break;
      s *= kBarrierGrowth;
    }
    return z;
  }

  double objective(const Vector& z) const {
    double v = 0.0;
    for (auto [i, w] : cost_) v += w * z(i);
    return v;
  }

 private:
  int cell(int i, int j) const { return index_[i * m_ + j]; }

  // Barrier value, or +infinity outside the domain.
  double barrier(const std::vector<Form>& rows, double s, const Vector& z) const {
    double v = s * objective(z);
    for (const auto& r : rows) {
      const double slack = r(z);
      if (!(slack > 0.0)) return std::numeric_limits<double>::infinity();
      v -= std::log(slack);
    }
    const Matrix x = gram(z);
    const double room = trace_bound_ - x.trace();
    if (!(room > 0.0)) return std::numeric_limits<double>::infinity();
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Vector diag = llt.matrixLLT().diagonal();
    if (!(diag.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
    return v - 2.0 * diag.array().log().sum() - std::log(room);
  }

  // Equality-constrained Newton centering on a . z = 1.
  void center(const std::vector<Form>& rows, const Vector& a, double s, Vector& z, int& budget,
              int& iterations) const {
    for (int step_count = 0; step_count < kMaxCenteringSteps; ++step_count) {
      Vector g = Vector::Zero(vars_);
      Matrix hess = Matrix::Zero(vars_, vars_);
      for (auto [i, w] : cost_) g(i) += s * w;
      for (const auto& r : rows) {
        const double slack = r(z);
        for (auto [i, ci] : r.terms) {
          g(i) -= ci / slack;
          for (auto [j, cj] : r.terms) hess(i, j) += ci * cj / (slack * slack);
        }
      }
      const Matrix x = gram(z);
      const Matrix xi = x.llt().solve(Matrix::Identity(m_, m_));
      const double room = trace_bound_ - x.trace();
      for (int k = 0; k < p_; ++k) {
        const auto [i, j] = cells_[k];
        const bool dk = i == j;
        g(k) -= dk ? xi(i, i) : 2.0 * xi(i, j);
        if (dk) g(k) += 1.0 / room;
        for (int l = 0; l < p_; ++l) {
          const auto [r, c] = cells_[l];
          const bool dl = r == c;
          // tr(X^-1 E_k X^-1 E_l) for symmetric unit matrices E.
          double v;
          if (dk && dl) v = xi(i, r) * xi(i, r);
          else if (dk) v = 2.0 * xi(i, r) * xi(c, i);
          else if (dl) v = 2.0 * xi(j, r) * xi(r, i);
          else v = 2.0 * (xi(j, r) * xi(c, i) + xi(j, c) * xi(r, i));
          hess(k, l) += v;
          if (dk && dl) hess(k, l) += 1.0 / (room * room);
        }
      }
      const Eigen::LDLT<Matrix> solver(hess);
      const Vector hg = solver.solve(g), ha = solver.solve(a);
      const double nu = -a.dot(hg) / a.dot(ha);
      const Vector dz = -(hg + nu * ha);
      const double decrement = -g.dot(dz);
      if (!(decrement > 2.0 * kNewtonTolerance)) return;
      if (budget-- <= 0) throw ConvergenceError("demand SDP exceeded its Newton step budget", {decrement});
      ++iterations;
      const double f0 = barrier(rows, s, z);
      // Fraction to the boundary: no slack and no eigenvalue of X may shrink by more than half.
      double step = 1.0;
      for (const auto& r : rows) {
        const double change = r(dz);
        if (change < 0.0) step = std::min(step, -kBoundaryFraction * r(z) / change);
      }
      const double dtrace = gram(dz).trace();
      if (dtrace > 0.0) step = std::min(step, kBoundaryFraction * room / dtrace);
      const Eigen::LLT<Matrix> chol(x);
      const Matrix lower = chol.matrixL();
      const Matrix scaled = lower.triangularView<Eigen::Lower>().solve(
          lower.triangularView<Eigen::Lower>().solve(gram(dz)).transpose());
      const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(scaled, Eigen::EigenvaluesOnly).eigenvalues()(0);
      if (min_eig < 0.0) step = std::min(step, -kBoundaryFraction / min_eig);
      while (barrier(rows, s, z + step * dz) > f0 - 0.25 * step * decrement) {
        step *= 0.5;
        if (step < 1e-20) return;  // no progress is possible at this precision
      }
      z += step * dz;
    }
  }

  int n_ = 0, m_ = 0, p_ = 0, vars_ = 0;
  std::vector<int> index_;
  std::vector<std::pair<int, int>> cells_;
  std::vector<std::pair<int, double>> cost_;
  std::vector<Form> pairs_;
  Form demand_;
  double trace_bound_ = 0.0;
  double start_scale_ = 0.0;
};

double sdp_numerator(const DemandInstance& inst, const Matrix& d) {
  double total = 0.0;
  for (const auto& e : inst.h.edges()) {
    double best = 0.0;
    for (int u : e.vertices)
      for (int v : e.vertices) best = std::max(best, d(u, v));
    total += e.weight * best;
  }
  return total;
}

double sdp_denominator(const DemandInstance& inst, const Matrix& d) {
  double total = 0.0;
  for (const auto& p : inst.pairs) total += p.demand * d(p.s, p.t);
  return total;
}

}  // namespace

DemandSdpSolution solve_demands_sdp(const DemandInstance& inst, const DemandSdpConfig& cfg) {
  inst.validate();
  const int n = inst.h.num_vertices();
  if (n < 2) throw DomainError("demand SDP needs at least two vertices");
  if (n > kMaxSdpVertices) throw CapacityError("demand SDP limited to n <= " + std::to_string(kMaxSdpVertices));
  const DemandBarrier barrier(inst);
  DemandSdpSolution out;
  int budget = cfg.max_iterations;

  // Cutting planes: start from the terminal triples, add violated triangles and re-solve. Violations
  // are found by a full scan up to kFullTriangleLimit vertices and by sampling beyond it.
  std::vector<Triangle> active;
  std::set<std::tuple<int, int, int>> seen;
  auto activate = [&](const Triangle& t) {
    if (seen.emplace(t.a, t.b, t.c).second) active.push_back(t);
  };
  const VertexSet term = inst.terminals();
  for (int a : term)
    for (int c : term)
      for (int b : term)
        if (a < c && b != a && b != c) activate({a, b, c});
  const std::vector<Triangle> every = n <= kFullTriangleLimit ? all_triangles(n) : std::vector<Triangle>{};
  Rng rng = make_rng(cfg.seed, "demands-sdp");
  std::uniform_int_distribution<int> pick(0, n - 1);
  Matrix vectors;
  for (int round = 0; round < kMaxCutRounds; ++round) {
    const Vector z = barrier.solve(active, cfg.rel_gap, budget, out.iterations);
    Eigen::SelfAdjointEigenSolver<Matrix> es(barrier.gram(z));
    vectors = Matrix::Zero(n, n - 1);
    vectors.bottomRows(n - 1) = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    const Matrix d = squared_distances(vectors);
    const double tol = cfg.triangle_tol * std::max(d.maxCoeff(), 1e-300);
    const std::size_t before = active.size();
    if (n <= kFullTriangleLimit) {
      for (const auto& t : every)
        if (triangle_gap(d, t) > tol) activate(t);
    } else {
      for (int s = 0; s < cfg.sampled_triangles; ++s) {
        int a = pick(rng), b = pick(rng), c = pick(rng);
        if (a == b || b == c || a == c) continue;
        if (a > c) std::swap(a, c);
        if (triangle_gap(d, {a, b, c}) > tol) activate({a, b, c});
      }
    }
    if (active.size() == before) break;
  }

  const Matrix d0 = squared_distances(vectors);
  const double den = sdp_denominator(inst, d0);
  if (!(den > 0.0)) throw ConvergenceError("demand SDP collapsed every demand pair", {den});
  out.vectors = vectors / std::sqrt(den);
  const Matrix d = squared_distances(out.vectors);
  out.objective = sdp_numerator(inst, d) / sdp_denominator(inst, d);
  double worst = 0.0;
  for (const auto& t : all_triangles(n)) {
    worst = std::max(worst, triangle_gap(d, t));
    ++out.triangles_checked;
  }
  out.max_triangle_violation = worst / std::max(d.maxCoeff(), 1e-300);
  return out;
}

TerminalEmbedding embed_terminals(const Matrix& dist, const VertexSet& terminals, std::uint64_t seed) {
  const int n = static_cast<int>(dist.rows());
  const int t = static_cast<int>(terminals.size());
  if (t < 2) throw DomainError("embedding needs at least two terminals");
  const int scales = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(t)))));
  const int repeats = std::max(1, static_cast<int>(std::ceil(2.0 * std::log2(static_cast<double>(t)))));
  Rng rng = make_rng(seed, "bourgain");
  std::vector<Vector> columns;
  for (int j = 1; j <= scales; ++j) {
    std::bernoulli_distribution include(std::ldexp(1.0, -j));
    for (int r = 0; r < repeats; ++r) {
      VertexSet a;
      for (int v : terminals)
        if (include(rng)) a.push_back(v);
      if (a.empty()) a.push_back(terminals[std::uniform_int_distribution<int>(0, t - 1)(rng)]);
      Vector col(n);
      for (int u = 0; u < n; ++u) {
        double best = std::numeric_limits<double>::infinity();
        for (int v : a) best = std::min(best, dist(u, v));
        col(u) = best;
      }
      columns.push_back(std::move(col));
    }
  }
  // Singleton terminal sets keep every terminal pair separated.
  for (int v : terminals) columns.push_back(dist.col(v));

  TerminalEmbedding out;
  out.coords.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) out.coords.col(c) = columns[c];
  // Pairs the solver left at (numerically) zero distance are ignored when rescaling.
  const double floor = 1e-9 * std::max(dist.maxCoeff(), 1e-300);
  double scale = 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (dist(u, v) > floor) scale = std::max(scale, (out.coords.row(u) - out.coords.row(v)).norm() / dist(u, v));
  if (!(scale > 0.0)) throw DomainError("embedding of a zero metric");
  out.coords /= scale;
  out.lipschitz_scale = scale;
  for (int a = 0; a < t; ++a)
    for (int b = a + 1; b < t; ++b) {
      const int s = terminals[a], u = terminals[b];
      const double image = (out.coords.row(s) - out.coords.row(u)).norm();
      if (dist(s, u) > 0.0)
        out.distortion = std::max(out.distortion,
                                  image > 0.0 ? dist(s, u) / image : std::numeric_limits<double>::infinity());
    }
  return out;
}

DemandsResult sparsest_cut_demands(const DemandInstance& inst, std::uint64_t seed, const DemandSdpConfig& cfg,
                                   int trials) {
  inst.validate();
  const int n = inst.h.num_vertices();
  DemandSdpConfig sdp_cfg = cfg;
  sdp_cfg.seed = derive_seed(seed, "demands-sdp");
  const DemandSdpSolution sdp = solve_demands_sdp(inst, sdp_cfg);
  const Matrix dist = squared_distances(sdp.vectors);
  const TerminalEmbedding emb = embed_terminals(dist, inst.terminals(), derive_seed(seed, "demands-embedding"));

  DemandsResult out;
  out.sdp_value = sdp.objective;
  out.max_triangle_violation = sdp.max_triangle_violation;
  out.distortion = emb.distortion;
  out.cut.sparsity = std::numeric_limits<double>::infinity();

  for (int trial = 0; trial < trials + kRoundingRetries; ++trial) {
    if (out.trials >= trials && out.best_trial >= 0) break;
    ++out.trials;
    Rng rng = make_rng(seed, "demands-round", trial);
    const Vector x = emb.coords * gaussian_vector(rng, emb.coords.cols());
    double num = 0.0, den = 0.0;
    for (const auto& e : inst.h.edges()) {
      double lo = x(e.vertices.front()), hi = lo;
      for (int v : e.vertices) {
        lo = std::min(lo, x(v));
        hi = std::max(hi, x(v));
      }
      num += e.weight * (hi - lo);
    }
    for (const auto& p : inst.pairs) den += p.demand * std::abs(x(p.s) - x(p.t));
    if (!(den > 0.0)) continue;  // the projection merged every demand pair
    const double line_ratio = num / den;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x(a) < x(b); });
    std::vector<char> in(n, 0);
    double trial_best = std::numeric_limits<double>::infinity();
    VertexSet trial_set;
    for (int j = 0; j + 1 < n; ++j) {
      in[order[j]] = 1;
      if (x(order[j + 1]) == x(order[j])) continue;
      const double d = separated_demand(inst, in);
      if (!(d > 0.0)) continue;
      const double phi = cut_weight(inst.h, in) / d;
      if (phi < trial_best) {
        trial_best = phi;
        trial_set.assign(order.begin(), order.begin() + j + 1);
      }
    }
    if (trial_set.empty()) continue;
    const bool bound_ok = trial_best <= line_ratio * (1.0 + 1e-9) + 1e-12;
    out.sweep_bound_holds = out.sweep_bound_holds && bound_ok;
    if (trial_best < out.cut.sparsity) {
      out.cut = demand_cut(inst, trial_set);
      out.line_ratio = line_ratio;
      out.best_trial = trial;
    }
  }
  if (out.best_trial < 0) throw StochasticFailure("no projection separated a demand pair", out.trials);
  return out;
}

}  // namespace hyperlap
