#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "hyperlap/parallel.hpp"
#include "hyperlap/spectral.hpp"

namespace hyperlap {

namespace {

// All set partitions of {0..n-1} as restricted growth strings.
void set_partitions(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int blocks) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int b = 0; b <= blocks && b < n; ++b) {
      a[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n > 0) {
    a[0] = 0;
    rec(1, 1);
  }
}

Matrix null_space(const Matrix& a, int cols) {
  if (a.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  Vector f;
};

class FaceSolver {
 public:
  FaceSolver(const Hypergraph& h, const std::vector<Vector>& prior) : h_(h), prior_(prior) {}

  // ranks[v] = position of v's class in the weak ordering; c classes.
  void solve(const std::vector<int>& ranks, int c, Candidate& best) const {
    const int n = h_.num_vertices();
    Matrix q = Matrix::Zero(c, c);
    for (const auto& e : h_.edges()) {
      int lo = c, hi = -1;
      for (int v : e.vertices) {
        lo = std::min(lo, ranks[v]);
        hi = std::max(hi, ranks[v]);
      }
      if (lo == hi) continue;
      q(hi, hi) += e.weight;
      q(lo, lo) += e.weight;
      q(hi, lo) -= e.weight;
      q(lo, hi) -= e.weight;
    }
    Vector mass = Vector::Zero(c);
    for (int v = 0; v < n; ++v) mass(ranks[v]) += h_.vertex_weight(v);
    Matrix constraints(prior_.size(), c);
    constraints.setZero();
    for (std::size_t i = 0; i < prior_.size(); ++i)
      for (int v = 0; v < n; ++v) constraints(i, ranks[v]) += h_.vertex_weight(v) * prior_[i](v);
    const Matrix basis = null_space(constraints, c);
    if (basis.cols() == 0) return;

    const Matrix a = basis.transpose() * q * basis;
    const Matrix b = basis.transpose() * mass.asDiagonal() * basis;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(a, b);
    if (ges.info() != Eigen::Success) return;
    const Vector& lambda = ges.eigenvalues();
    const Matrix& vecs = ges.eigenvectors();
    const int d = static_cast<int>(lambda.size());

    for (int i = 0; i < d;) {
      if (lambda(i) > best.value + 1e-9 * (1.0 + best.value)) break;
      int j = i + 1;
      while (j < d && lambda(j) - lambda(i) <= 1e-9 * (1.0 + std::abs(lambda(i)))) ++j;
      // Eigenspace of lambda(i) in class coordinates.
      const Matrix space = basis * vecs.middleCols(i, j - i);
      cone_candidates(space, ranks, c, best);
      i = j;
    }
  }

 private:
  // Searches the eigenspace for nonzero vectors whose class values are nondecreasing.
  void cone_candidates(const Matrix& space, const std::vector<int>& ranks, int c, Candidate& best) const {
    const int m = static_cast<int>(space.cols());
    Matrix diffs(std::max(c - 1, 0), m);
    for (int r = 0; r + 1 < c; ++r) diffs.row(r) = space.row(r + 1) - space.row(r);

    auto consider = [&](const Vector& coeffs) {
      for (double sign : {1.0, -1.0}) {
        const Vector y = sign * (space * coeffs);
        const double scale = y.cwiseAbs().maxCoeff();
        if (!(scale > 0.0)) continue;
        bool ok = true;
        for (int r = 0; r + 1 < c && ok; ++r) ok = y(r + 1) - y(r) >= -1e-9 * scale;
        if (!ok) continue;
        Vector f(ranks.size());
        for (std::size_t v = 0; v < ranks.size(); ++v) f(v) = y(ranks[v]);
        const double value = discrepancy_weighted(h_, f);
        if (value < best.value - 1e-12) {
          best.value = value;
          best.f = f / std::sqrt(weighted_norm_sq(h_, f));
        }
      }
    };

    if (m == 1) {
      consider(Vector::Ones(1));
      return;
    }
    // Extreme rays of the cone {a : diffs a >= 0} have m-1 tight constraints.
    const int rows = static_cast<int>(diffs.rows());
    consider_kernel(diffs, consider);
    if (rows < m - 1) return;
    std::vector<char> mask(rows, 0);
    std::fill(mask.begin(), mask.begin() + (m - 1), 1);
    do {
      Matrix tight(m - 1, m);
      int t = 0;
      for (int r = 0; r < rows; ++r)
        if (mask[r]) tight.row(t++) = diffs.row(r);
      consider_kernel(tight, consider);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }

  template <typename F>
  static void consider_kernel(const Matrix& rows, F&& consider) {
    const Matrix kernel = null_space(rows, static_cast<int>(rows.cols()));
    for (Eigen::Index k = 0; k < kernel.cols(); ++k) consider(kernel.col(k));
  }

  const Hypergraph& h_;
  const std::vector<Vector>& prior_;
};

}  // namespace

GammaResult exact_gamma(const Hypergraph& h, const std::vector<Vector>& prior) {
  const int n = h.num_vertices();
  if (n > kExactGammaMaxVertices) throw CapacityError("exact oracle limited to n <= 8");
  if (static_cast<int>(prior.size()) >= n) throw DomainError("prior already spans the space");

  std::vector<std::vector<int>> partitions;
  set_partitions(n, partitions);
  FaceSolver solver(h, prior);
  std::vector<Candidate> results(partitions.size());

  parallel_for(partitions.size(), [&](std::size_t p) {
    const auto& blocks = partitions[p];
    const int c = *std::max_element(blocks.begin(), blocks.end()) + 1;
    std::vector<int> order(c);
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> ranks(n);
    Candidate best;
    do {
      // A face and its reversal share eigenpairs; solve() checks both signs.
      if (c > 1 && order.front() > order.back()) continue;
      for (int v = 0; v < n; ++v) ranks[v] = order[blocks[v]];
      solver.solve(ranks, c, best);
    } while (std::next_permutation(order.begin(), order.end()));
    results[p] = std::move(best);
  });

  double min_value = std::numeric_limits<double>::infinity();
  for (const auto& r : results) min_value = std::min(min_value, r.value);
  if (!std::isfinite(min_value)) throw Error(ErrorKind::Convergence, "exact oracle found no feasible face");
  for (const auto& r : results) {
    if (r.value <= min_value + 1e-12) {
      GammaResult out{r.value, r.f};
      for (Eigen::Index v = 0; v < out.f.size(); ++v) {
        if (std::abs(out.f(v)) > 1e-9) {
          if (out.f(v) < 0.0) out.f = -out.f;
          break;
        }
      }
      return out;
    }
  }
  return {};
}

MinimizerSet exact_minimizers(const Hypergraph& h, int k) {
  if (k < 1 || k > h.num_vertices()) throw DomainError("k must lie in [1, n]");
  MinimizerSet out;
  out.method = MinimizerMethod::Oracle;
  out.vectors.push_back(constant_minimizer(h));
  out.ratios.push_back(0.0);
  for (int i = 2; i <= k; ++i) {
    const GammaResult g = exact_gamma(h, out.vectors);
    out.vectors.push_back(g.f);
    out.ratios.push_back(g.gamma);
  }
  return out;
}

}  // namespace hyperlap
