#include "gram_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hyperlap::detail {

namespace {

Vector project_simplex(const Vector& v) {
  Vector u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<double>());
  double cumulative = 0.0, theta = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cumulative += u(i);
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u(i) - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

}  // namespace

Matrix project_spectraplex(const Matrix& y) {
  const Matrix sym = 0.5 * (y + y.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector lambda = project_simplex(es.eigenvalues());
  return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

Matrix psd_sqrt(const Matrix& z) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (z + z.transpose()));
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Matrix orthogonal_complement(const Matrix& a, int n) {
  if (a.cols() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * std::max(1.0, s(0))) ++rank;
  return svd.matrixU().rightCols(n - rank);
}

double soft_max(const Vector& s, double mu, Vector& weights) {
  const double top = s.maxCoeff();
  weights = ((s.array() - top) / mu).exp();
  const double total = weights.sum();
  weights /= total;
  return top + mu * std::log(total);
}

FistaResult minimize_on_spectraplex(const SmoothFn& f, Matrix z0, int max_iterations, const StopFn& stop,
                                    int check_every) {
  Matrix x = project_spectraplex(z0);
  Matrix y = x;
  Matrix grad(x.rows(), x.cols());
  double fx = f(x, nullptr);
  double lipschitz = 1.0;
  double t = 1.0;
  FistaResult out;
  for (int it = 1; it <= max_iterations; ++it) {
    const double fy = f(y, &grad);
    Matrix x_new;
    double f_new = 0.0;
    for (int tries = 0; tries < 60; ++tries) {
      x_new = project_spectraplex(y - grad / lipschitz);
      f_new = f(x_new, nullptr);
      const Matrix step = x_new - y;
      if (f_new <= fy + (grad.array() * step.array()).sum() + 0.5 * lipschitz * step.squaredNorm() + 1e-15)
        break;
      lipschitz *= 2.0;
    }
    if (f_new > fx) {
      // Adaptive restart keeps the sequence monotone.
      t = 1.0;
      y = x;
      out.iterations = it;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_new + ((t - 1.0) / t_next) * (x_new - x);
    x = std::move(x_new);
    fx = f_new;
    t = t_next;
    lipschitz *= 0.95;
    out.iterations = it;
    if (it % check_every == 0 && stop(x, it)) break;
  }
  out.z = x;
  return out;
}

}  // namespace hyperlap::detail
