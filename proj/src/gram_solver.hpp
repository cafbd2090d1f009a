#pragma once

#include <functional>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap::detail {

// Euclidean projection onto {Z symmetric, Z >= 0, tr Z = 1}.
Matrix project_spectraplex(const Matrix& y);

// Symmetric square root of a PSD matrix.
Matrix psd_sqrt(const Matrix& z);

// Orthonormal basis of the null space of a^T (columns), i.e. the complement of span(a).
Matrix orthogonal_complement(const Matrix& a, int n);

// Returns the smoothed objective at z and writes its gradient when grad != nullptr.
using SmoothFn = std::function<double(const Matrix& z, Matrix* grad)>;
// Called every few iterations with the current iterate; return true to stop.
using StopFn = std::function<bool(const Matrix& z, int iteration)>;

struct FistaResult {
  Matrix z;
  int iterations = 0;
};

// Accelerated projected gradient with backtracking and adaptive restart.
FistaResult minimize_on_spectraplex(const SmoothFn& f, Matrix z0, int max_iterations, const StopFn& stop,
                                    int check_every = 25);

// mu * log sum exp(s / mu) and softmax weights.
double soft_max(const Vector& s, double mu, Vector& weights);

}  // namespace hyperlap::detail
