#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

namespace fixtures {

// Nested edges {a}, {a,b}, ..., {a..e}: gamma_2 has two minimizers leading to different gamma_3.
Hypergraph nested_five();
// Five edges on four vertices with every vertex weight 3; e3 = {c, d} carries weight e3_weight.
Hypergraph four_vertex_example(double e3_weight = 2.0);
// Edges {a,b} and {b,c,d}.
Hypergraph gamma3_example();

}  // namespace fixtures

struct VerifyCheck {
  std::string fixture;
  std::string name;
  std::vector<double> expected;
  std::vector<double> actual;
  double error = 0.0;
  bool ok = true;
};

struct VerifyOptions {
  double tolerance = 1e-7;
  double four_vertex_e3_weight = 2.0;  // change to perturb the four-vertex fixture
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  double seconds = 0.0;

  bool ok() const;
  std::vector<const VerifyCheck*> failures() const;
};

VerifyReport verify_examples(const VerifyOptions& options = {});

}  // namespace hyperlap
