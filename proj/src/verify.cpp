#include "hyperlap/verify.hpp"

#include <chrono>
#include <cmath>

#include "hyperlap/laplacian.hpp"
#include "hyperlap/spectral.hpp"

namespace hyperlap {

namespace fixtures {

Hypergraph nested_five() {
  return Hypergraph(5, {{{0}, 1.0}, {{0, 1}, 1.0}, {{0, 1, 2}, 1.0}, {{0, 1, 2, 3}, 1.0}, {{0, 1, 2, 3, 4}, 1.0}},
                    {"a", "b", "c", "d", "e"});
}

Hypergraph four_vertex_example(double e3_weight) {
  return Hypergraph(4, {{{0, 1}, 1.0}, {{1, 3}, 1.0}, {{2, 3}, e3_weight}, {{0}, 1.0}, {{0, 1, 2}, 1.0}},
                    {"a", "b", "c", "d"});
}

Hypergraph gamma3_example() { return Hypergraph(4, {{{0, 1}, 1.0}, {{1, 2, 3}, 1.0}}, {"a", "b", "c", "d"}); }

}  // namespace fixtures

bool VerifyReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::vector<const VerifyCheck*> VerifyReport::failures() const {
  std::vector<const VerifyCheck*> out;
  for (const auto& c : checks)
    if (!c.ok) out.push_back(&c);
  return out;
}

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Unit vector in <.,.>_w with its first nonzero coordinate positive.
Vector direction(const Hypergraph& h, const Vector& f) {
  Vector out = f / std::sqrt(weighted_norm_sq(h, f));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (std::abs(out(i)) > 1e-9) {
      if (out(i) < 0.0) out = -out;
      break;
    }
  }
  return out;
}

// Distance of f from span(g), relative to ||f||_w.
double off_span(const Hypergraph& h, const Vector& f, const Vector& g) {
  const Vector r = project_out(h, f, {direction(h, g)});
  return std::sqrt(weighted_norm_sq(h, r) / weighted_norm_sq(h, f));
}

class Recorder {
 public:
  Recorder(VerifyReport& report, double tol) : report_(report), tol_(tol) {}

  void equal(const std::string& fixture, const std::string& name, const Vector& expected, const Vector& actual) {
    VerifyCheck c{fixture, name, to_std(expected), to_std(actual), 0.0, true};
    if (expected.size() != actual.size()) {
      c.error = std::numeric_limits<double>::infinity();
    } else {
      c.error = (expected - actual).cwiseAbs().maxCoeff();
    }
    c.ok = c.error <= tol_;
    report_.checks.push_back(std::move(c));
  }

  void equal(const std::string& fixture, const std::string& name, double expected, double actual) {
    equal(fixture, name, vec({expected}), vec({actual}));
  }

  // Passes when actual <= bound.
  void at_most(const std::string& fixture, const std::string& name, double bound, double actual) {
    VerifyCheck c{fixture, name, {bound}, {actual}, std::max(0.0, actual - bound), true};
    c.ok = c.error <= tol_;
    report_.checks.push_back(std::move(c));
  }

  // Passes when actual > threshold: an anti-property that must not collapse.
  void exceeds(const std::string& fixture, const std::string& name, double threshold, double actual) {
    VerifyCheck c{fixture, name, {threshold}, {actual}, std::max(0.0, threshold - actual), actual > threshold};
    report_.checks.push_back(std::move(c));
  }

  // Matches the closest of several admissible values.
  void one_of(const std::string& fixture, const std::string& name, const std::vector<Vector>& options,
              const Vector& actual) {
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < options.size(); ++i) {
      const double err = (options[i] - actual).cwiseAbs().maxCoeff();
      if (err < best_err) {
        best_err = err;
        best = i;
      }
    }
    equal(fixture, name, options[best], actual);
  }

 private:
  VerifyReport& report_;
  double tol_;
};

void check_nested(Recorder& rec) {
  const std::string name = "nested_five";
  const Hypergraph h = fixtures::nested_five();
  const MinimizerSet m = exact_minimizers(h, 3);
  const double g2 = 5.0 / 6.0, g3a = 113.0 / 99.0, g3b = 181.0 / 165.0;
  rec.one_of(name, "gamma_sequence", {vec({0.0, g2, g3a}), vec({0.0, g2, g3b})},
             vec({m.ratios[0], m.ratios[1], m.ratios[2]}));

  const Vector f1 = constant_minimizer(h);
  const Vector f2a = vec({1, 1, 1, -4, -4}), f2b = vec({2, 2, -3, -3, -3});
  const Vector f3a = vec({2, 2, -6, 3, -6}), f3b = vec({4, -5, -5, 5, 5});
  rec.equal(name, "f2_candidates_ratio", vec({g2, g2}),
            vec({discrepancy_weighted(h, f2a), discrepancy_weighted(h, f2b)}));
  rec.equal(name, "f2_candidates_orthogonal", vec({0, 0}),
            vec({weighted_inner(h, f1, f2a), weighted_inner(h, f1, f2b)}));

  const GammaResult after_a = exact_gamma(h, {f1, direction(h, f2a)});
  rec.equal(name, "gamma3_after_first_f2", vec({g3a, g3a, 0, 0}),
            vec({after_a.gamma, discrepancy_weighted(h, f3a), weighted_inner(h, f1, f3a), weighted_inner(h, f2a, f3a)}));
  const GammaResult after_b = exact_gamma(h, {f1, direction(h, f2b)});
  rec.equal(name, "gamma3_after_second_f2", vec({g3b, g3b, 0, 0}),
            vec({after_b.gamma, discrepancy_weighted(h, f3b), weighted_inner(h, f1, f3b), weighted_inner(h, f2b, f3b)}));
}

void check_four_vertex(Recorder& rec, double e3_weight) {
  const std::string name = "four_vertex";
  const Hypergraph h = fixtures::four_vertex_example(e3_weight);
  const Vector f2 = vec({1, 1, -1, -1});
  const GammaResult g = exact_gamma(h, {constant_minimizer(h)});
  rec.equal(name, "gamma2", vec({2.0 / 3.0, 2.0 / 3.0}), vec({g.gamma, discrepancy_weighted(h, f2)}));
  rec.equal(name, "vertex_weights", Vector::Constant(4, 3.0), h.vertex_weights());

  const Vector g1 = vec({0, 0, 1, 1}), g2 = vec({1, 1, 0, 0});
  rec.equal(name, "xi2_witness_orthogonal", 0.0, weighted_inner(h, g1, g2));
  rec.at_most(name, "xi2_upper", 1.0 / 3.0, std::max(discrepancy_weighted(h, g1), discrepancy_weighted(h, g2)));

  const Vector lf2 = apply_laplacian(h, weighted(f2)).values;
  rec.equal(name, "eigen_relation", (2.0 / 3.0) * f2, lf2);

  const RateResult rate = compute_rate(h, f2);
  Matrix a(4, 4);
  a << 1, 1, 1, 0, 1, 1, 0, 1, 1, 0, 0, 2, 0, 1, 2, 0;
  const Matrix induced = dense_induced_weights(rate);
  rec.equal(name, "induced_weights", Eigen::Map<const Vector>(a.data(), a.size()),
            Eigen::Map<const Vector>(induced.data(), induced.size()));

  RateOptions even;
  even.split = WeightSplit::Even;
  const Vector even_vec = apply_laplacian(h, weighted(f2), even).values;
  rec.equal(name, "even_split_vector", vec({1.0 / 3.0, 1.0, -2.0 / 3.0, -2.0 / 3.0}), even_vec);
  rec.exceeds(name, "even_split_not_eigenvector", 1e-3, off_span(h, even_vec, f2));
}

void check_gamma3(Recorder& rec) {
  const std::string name = "gamma3_example";
  const Hypergraph h = fixtures::gamma3_example();
  const double s5 = std::sqrt(5.0);
  const MinimizerSet m = exact_minimizers(h, 3);
  rec.equal(name, "gamma_sequence", vec({0.0, (5 - s5) / 4, (11 + s5) / 8}),
            vec({m.ratios[0], m.ratios[1], m.ratios[2]}));

  const Vector f2 = vec({s5 - 1, (3 - s5) / 2, -1, -1});
  const Vector f3 = vec({s5 - 1, -1, 4 - s5, -1});
  const Vector f3_mirror = vec({s5 - 1, -1, -1, 4 - s5});
  rec.equal(name, "f2_direction", direction(h, f2), direction(h, m.vectors[1]));
  rec.one_of(name, "f3_direction", {direction(h, f3), direction(h, f3_mirror)}, direction(h, m.vectors[2]));
  rec.equal(name, "f_ratios", vec({(5 - s5) / 4, (11 + s5) / 8}),
            vec({discrepancy_weighted(h, f2), discrepancy_weighted(h, f3)}));

  const Vector lf3 = apply_laplacian(h, weighted(f3)).values;
  rec.equal(name, "laplacian_f3", vec({s5, -5.0 / 3.0, 5 - s5, -5.0 / 3.0}), lf3);

  const Vector projected = project_out(h, lf3, {constant_minimizer(h), direction(h, f2)});
  rec.equal(name, "projected_laplacian_f3",
            vec({-0.5 + 7 * s5 / 6, -4.0 / 3.0 - s5 / 6, 59.0 / 12.0 - 11 * s5 / 12, -7.0 / 4.0 + s5 / 12}), projected);
  rec.exceeds(name, "projected_not_in_span_f3", 1e-3, off_span(h, projected, f3));
}

}  // namespace

VerifyReport verify_examples(const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  Recorder rec(report, options.tolerance);
  check_nested(rec);
  check_four_vertex(rec, options.four_vertex_e3_weight);
  check_gamma3(rec);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace hyperlap
