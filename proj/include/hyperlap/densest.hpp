#pragma once

#include <vector>

namespace hyperlap {

// Ground set is 0..size()-1; callers map back to vertex ids.
struct DensestEdge {
  std::vector<int> members;
  double value = 0.0;
};

struct DensestInstance {
  std::vector<double> weight;
  std::vector<DensestEdge> in_edges;
  std::vector<DensestEdge> out_edges;

  int size() const { return static_cast<int>(weight.size()); }
  void validate() const;
};

struct DensestSolution {
  std::vector<int> subset;
  double density = 0.0;
  double certificate = 0.0;
};

// (c(I_X) - c(S_X)) / w(X): I_X are in-edges inside X, S_X are out-edges touching X.
double density(const DensestInstance& inst, const std::vector<int>& subset);

// Maximal densest subset via parametric minimum cut.
DensestSolution solve_densest(const DensestInstance& inst);

// Exhaustive oracle for |U| <= 16; returns the union of all maximizers.
DensestSolution densest_bruteforce(const DensestInstance& inst, double tolerance = 1e-9);

// Value of max_X c(I_X) - c(S_X) - lambda w(X) and its maximal maximizer.
struct ParametricCut {
  double value = 0.0;
  std::vector<int> minimal;
  std::vector<int> maximal;
};
ParametricCut parametric_cut(const DensestInstance& inst, double lambda);

}  // namespace hyperlap
