#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hyperlap/demands.hpp"
#include "hyperlap/diffusion.hpp"
#include "hyperlap/laplacian.hpp"
#include "hyperlap/partition.hpp"
#include "hyperlap/spectral.hpp"
#include "hyperlap/verify.hpp"
#include "report.hpp"

using namespace hyperlap;
using namespace hyperlap::cli;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string out;
};

struct MinimizerOptions {
  std::string method = "auto";  // auto | oracle | sdp | components
  int k = 2;
  int trials = kDefaultRoundingTrials;
  int restarts = 5;
  double rel_gap = 1e-3;
  int max_iterations = 50000;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base seed for every random stream");
  cmd->add_option("--out", c.out, "Directory for report files (stdout only when omitted)");
}

void add_minimizer_options(CLI::App* cmd, MinimizerOptions& m) {
  cmd->add_option("--k", m.k, "Number of minimizer vectors")->check(CLI::Range(1, 1 << 30));
  cmd->add_option("--method", m.method, "Minimizer source")
      ->check(CLI::IsMember({"auto", "oracle", "sdp", "components"}));
  cmd->add_option("--trials", m.trials, "Gaussian rounding trials")->check(CLI::Range(1, 1 << 30));
  cmd->add_option("--restarts", m.restarts, "SDP restarts")->check(CLI::Range(1, 1 << 30));
  cmd->add_option("--rel-gap", m.rel_gap, "SDP relative duality gap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iterations", m.max_iterations, "SDP iteration cap")->check(CLI::Range(1, 1 << 30));
}

Json minimizer_config(const MinimizerOptions& m) {
  return Json{{"method", m.method}, {"k", m.k},         {"trials", m.trials},
              {"restarts", m.restarts}, {"rel_gap", m.rel_gap}, {"max_iterations", m.max_iterations}};
}

std::string resolved_method(const Hypergraph& h, const std::string& method) {
  if (method != "auto") return method;
  return h.num_vertices() <= kExactGammaMaxVertices ? "oracle" : "sdp";
}

std::vector<VertexSet> components(const Hypergraph& h) {
  const int n = h.num_vertices();
  std::vector<int> label(n, -1);
  std::vector<VertexSet> out;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    VertexSet comp{s};
    label[s] = static_cast<int>(out.size());
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int e : h.incident_edges()[comp[i]])
        for (int v : h.edge(e).vertices)
          if (label[v] < 0) {
            label[v] = label[s];
            comp.push_back(v);
          }
    out.push_back(std::move(comp));
  }
  return out;
}

MinimizerSet acquire(const Hypergraph& h, const MinimizerOptions& m, std::uint64_t seed) {
  const std::string method = resolved_method(h, m.method);
  if (method == "oracle") return exact_minimizers(h, m.k);
  if (method == "components") {
    const auto comps = components(h);
    if (static_cast<int>(comps.size()) < m.k) throw DomainError("fewer connected components than k");
    std::vector<Vector> vectors;
    for (int i = 0; i < m.k; ++i) {
      Vector f = Vector::Zero(h.num_vertices());
      for (int v : comps[i]) f(v) = 1.0;
      vectors.push_back(f);
    }
    return make_minimizer_set(h, vectors, MinimizerMethod::Given);
  }
  SdpConfig cfg;
  cfg.seed = seed;
  cfg.restarts = m.restarts;
  cfg.rel_gap = m.rel_gap;
  cfg.max_iterations = m.max_iterations;
  return approx_procedural_minimizers(h, m.k, cfg, m.trials);
}

Json graph_summary(const Hypergraph& h) {
  return Json{{"vertices", h.num_vertices()},
              {"edges", h.num_edges()},
              {"max_rank", h.max_rank()},
              {"min_rank", h.min_rank()},
              {"total_weight", h.total_weight()}};
}

void emit(const Common& c, const Json& report) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  write_text(c.out, "report.json", text);
}

std::string minimizer_csv(const MinimizerSet& set) {
  std::vector<std::string> header{"vertex"};
  std::vector<Vector> columns;
  const Eigen::Index n = set.vectors.front().size();
  columns.push_back(Vector::LinSpaced(n, 0.0, static_cast<double>(n - 1)));
  for (std::size_t i = 0; i < set.size(); ++i) {
    header.push_back("f" + std::to_string(i + 1));
    columns.push_back(set.vectors[i]);
  }
  return csv_vectors(header, columns);
}

// --- spectral ---------------------------------------------------------------

struct SpectralArgs {
  Common common;
  MinimizerOptions min;
  std::string file;
  bool oracle = false;
  bool sdp = false;
};

int run_spectral(SpectralArgs& a) {
  if (a.oracle && a.sdp) throw DomainError("choose one of --oracle and --sdp");
  if (a.oracle) a.min.method = "oracle";
  if (a.sdp) a.min.method = "sdp";
  const Hypergraph h = load_hypergraph(a.file);
  if (a.min.k > h.num_vertices()) throw DomainError("k exceeds the number of vertices");
  const std::string method = resolved_method(h, a.min.method);
  const MinimizerSet set = acquire(h, a.min, derive_seed(a.common.seed, "spectral"));

  Json config = minimizer_config(a.min);
  config["file"] = a.file;
  config["seed"] = a.common.seed;
  Json report = envelope("spectral", config);
  report["hypergraph"] = graph_summary(h);
  report["resolved_method"] = method;
  report["minimizers"] = to_json(set);

  std::optional<double> gamma;
  if (method == "oracle" && set.size() >= 2) {
    gamma = set.ratios.back();
    const Vector x2 = convert(h, weighted(set.vectors[1]), Space::Normalized).values;
    const Vector lx2 = apply_laplacian(h, normalized(x2)).values;
    report["eigen_check"] = {{"gamma2", set.ratios[1]}, {"residual", (lx2 - set.ratios[1] * x2).norm()}};
  }
  if (method == "sdp") {
    Json bounds = Json::array();
    for (std::size_t i = 1; i < set.size(); ++i) {
      const double bound = rounding_bound(h, set.sdp_values[i]);
      bounds.push_back({{"index", i + 1},
                        {"sdp_value", set.sdp_values[i]},
                        {"ratio", set.ratios[i]},
                        {"bound", bound},
                        {"holds", set.ratios[i] <= bound + 1e-12}});
    }
    report["rounding_bounds"] = bounds;
  }
  if (set.size() >= 1) {
    const auto mm = minimaximizer_report(h, set, gamma, 2000, derive_seed(a.common.seed, "minimaximizer"));
    report["minimaximizer"] = {{"k", mm.k},
                               {"xi_upper", mm.xi_upper},
                               {"span_max", mm.span_max},
                               {"samples", mm.samples},
                               {"span_within_k_xi", mm.span_within_k_xi},
                               {"gamma_below_span", mm.gamma_below_span}};
  }
  write_text(a.common.out, "minimizers.csv", minimizer_csv(set));
  emit(a.common, report);
  return kOk;
}

// --- diffuse ----------------------------------------------------------------

struct DiffuseArgs {
  Common common;
  std::string file;
  double horizon = 1.0;
  double step = 0.0;
  double eta = 0.0;
  std::string start = "vertex:0";
  bool slow_start = false;
  bool cut = false;
  double delta = 0.1;
  std::optional<double> gamma2;
};

Vector start_measure(const Hypergraph& h, const std::string& spec, std::uint64_t seed) {
  const int n = h.num_vertices();
  if (spec == "random") {
    Rng rng = make_rng(seed, "diffuse-start");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector phi(n);
    for (int v = 0; v < n; ++v) phi(v) = u(rng);
    return phi / phi.sum();
  }
  if (spec == "stationary") return stationary_measure(h, 1.0);
  if (spec.rfind("vertex:", 0) == 0) {
    int v = -1;
    try {
      v = std::stoi(spec.substr(7));
    } catch (const std::exception&) {
      throw DomainError("malformed start " + spec);
    }
    if (v < 0 || v >= n) throw DomainError("start vertex out of range");
    Vector phi = Vector::Zero(n);
    phi(v) = 1.0;
    return phi;
  }
  throw DomainError("start must be vertex:<i>, random or stationary");
}

int run_diffuse(DiffuseArgs& a) {
  const Hypergraph h = load_hypergraph(a.file);
  if (!(a.delta > 0.0)) throw DomainError("delta must be positive");
  Json config{{"file", a.file},          {"horizon", a.horizon}, {"step", a.step},   {"eta", a.eta},
              {"start", a.start},        {"slow_start", a.slow_start}, {"cut", a.cut}, {"delta", a.delta},
              {"seed", a.common.seed}};
  if (a.gamma2) config["gamma2"] = *a.gamma2;
  Json report = envelope("diffuse", config);
  report["hypergraph"] = graph_summary(h);

  std::optional<double> gamma2 = a.gamma2;
  MinimizerSet f;
  const bool need_f2 = a.slow_start || !gamma2;
  if (need_f2 && h.num_vertices() >= 2) {
    MinimizerOptions m;
    m.k = 2;
    f = acquire(h, m, derive_seed(a.common.seed, "diffuse-minimizers"));
    if (!gamma2 && f.method == MinimizerMethod::Oracle) gamma2 = f.ratios[1];
  }

  Vector phi0 = start_measure(h, a.start, a.common.seed);
  if (a.slow_start) {
    if (f.size() < 2) throw DomainError("slow start needs a second minimizer");
    const Vector y = convert(h, weighted(f.vectors[1]), Space::Normalized).values;
    const SlowStart s = slow_mixing_start(h, normalized(y));
    phi0 = s.phi0.values;
    report["slow_start"] = {{"rayleigh_y", s.rayleigh_y},
                            {"rayleigh_y_hat", s.rayleigh_y_hat},
                            {"l1_distance", s.l1_distance},
                            {"mixing_time_lower", mixing_time_lower(h, s.rayleigh_y_hat, a.delta)}};
  }

  DiffusionConfig cfg;
  cfg.horizon = a.horizon;
  cfg.step = a.step;
  cfg.eta = a.eta;
  cfg.seed = derive_seed(a.common.seed, "diffuse");
  if (gamma2) cfg.gap_estimate = *gamma2;
  const Trajectory traj = a.eta > 0.0 ? simulate_stochastic(h, measure(phi0), cfg)
                                      : simulate_diffusion(h, measure(phi0), cfg);
  report["trajectory"] = {{"steps", traj.steps},
                          {"step", traj.config.step},
                          {"stride", traj.config.stride},
                          {"samples", traj.times.size()},
                          {"initial_l1", traj.l1_distance.front()},
                          {"final_l1", traj.l1_distance.back()},
                          {"initial_rayleigh", traj.rayleigh.front()},
                          {"final_rayleigh", traj.rayleigh.back()},
                          {"final_mass", traj.states.back().sum()},
                          {"final_state", to_json(traj.states.back())}};
  if (gamma2 && *gamma2 > 0.0) {
    const double t_up = mixing_time_upper(h, *gamma2, a.delta);
    Json mix{{"gamma2", *gamma2}, {"delta", a.delta}, {"mixing_time_upper", t_up}};
    // First sampled time at which the walk is delta-close.
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      if (traj.l1_distance[i] <= a.delta) {
        mix["observed_mixing_time"] = traj.times[i];
        break;
      }
    }
    report["mixing"] = mix;
  }
  if (a.cut) {
    const SlowMixingCut c = cut_from_slow_mixing(h, measure(phi0), a.horizon, traj.config.step, a.delta);
    report["slow_mixing_cut"] = {{"cut", to_json(c.cut)},
                                 {"rayleigh", c.rayleigh},
                                 {"distance", c.distance},
                                 {"log_bound", c.log_bound},
                                 {"sweep_bound", c.sweep_bound}};
  }

  std::vector<std::string> header{"t", "rayleigh", "l1_distance"};
  for (int v = 0; v < h.num_vertices(); ++v) header.push_back("phi" + std::to_string(v));
  std::ostringstream csv;
  csv.precision(17);
  for (std::size_t c = 0; c < header.size(); ++c) csv << (c ? "," : "") << header[c];
  csv << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    csv << traj.times[i] << ',' << traj.rayleigh[i] << ',' << traj.l1_distance[i];
    for (Eigen::Index v = 0; v < traj.states[i].size(); ++v) csv << ',' << traj.states[i](v);
    csv << '\n';
  }
  write_text(a.common.out, "trajectory.csv", csv.str());
  emit(a.common, report);
  return kOk;
}

// --- cut --------------------------------------------------------------------

struct CutArgs {
  Common common;
  MinimizerOptions min;
  std::string file;
};

int run_cut(CutArgs& a) {
  const Hypergraph h = load_hypergraph(a.file);
  a.min.k = 2;
  Json config = minimizer_config(a.min);
  config["file"] = a.file;
  config["seed"] = a.common.seed;
  Json report = envelope("cut", config);
  report["hypergraph"] = graph_summary(h);

  const MinimizerSet f = acquire(h, a.min, derive_seed(a.common.seed, "cut"));
  const bool exact = f.method == MinimizerMethod::Oracle;
  const double gamma2 = f.ratios[1];
  report[exact ? "gamma2" : "gamma2_upper"] = gamma2;
  const CutResult sweep = sweep_cut(h, weighted(f.vectors[1]), SweepMode::Balanced);
  report["sweep_cut"] = to_json(sweep);

  int code = kOk;
  if (h.num_vertices() <= 20) {
    const ExpansionValue phi = hypergraph_expansion_bruteforce(h);
    report["expansion"] = {{"value", phi.value}, {"subset", phi.subset}};
    if (exact) {
      const double tol = 1e-9;
      const double upper = 2.0 * std::sqrt(gamma2);
      const double refined = gamma2 + 2.0 * std::sqrt(gamma2 / h.min_rank());
      const bool lower_ok = gamma2 / 2.0 <= phi.value + tol;
      const bool upper_ok = phi.value <= upper + tol;
      const bool refined_ok = phi.value <= refined + tol;
      report["sandwich"] = {{"lower", gamma2 / 2.0},  {"expansion", phi.value}, {"upper", upper},
                            {"refined_upper", refined}, {"lower_holds", lower_ok}, {"upper_holds", upper_ok},
                            {"refined_holds", refined_ok}};
      if (!(lower_ok && upper_ok && refined_ok)) code = kVerificationFailure;
    }
  }
  emit(a.common, report);
  return code;
}

// --- sse / multiway ---------------------------------------------------------

struct PartitionArgs {
  Common common;
  MinimizerOptions min;
  std::string file;
  double eps = 0.0;
  double fail_prob = 0.01;
};

std::string sets_csv(const std::vector<CutResult>& sets, const std::vector<double>& mu) {
  std::ostringstream out;
  out.precision(17);
  out << "index,size,expansion,cut_weight,subset_weight" << (mu.empty() ? "" : ",mu") << '\n';
  for (std::size_t i = 0; i < sets.size(); ++i) {
    out << i << ',' << sets[i].subset.size() << ',' << sets[i].expansion << ',' << sets[i].cut_weight << ','
        << sets[i].subset_weight;
    if (!mu.empty()) out << ',' << mu[i];
    out << '\n';
  }
  return out.str();
}

int run_sse(PartitionArgs& a) {
  const Hypergraph h = load_hypergraph(a.file);
  if (a.min.k < 2 || a.min.k > h.num_vertices()) throw DomainError("k must lie in [2, n]");
  Json config = minimizer_config(a.min);
  config["file"] = a.file;
  config["seed"] = a.common.seed;
  config["failure_probability"] = a.fail_prob;
  Json report = envelope("sse", config);
  report["hypergraph"] = graph_summary(h);
  const MinimizerSet f = acquire(h, a.min, derive_seed(a.common.seed, "sse-minimizers"));
  report["minimizer_ratios"] = f.ratios;
  const SseResult r = small_set_expansion(h, f, derive_seed(a.common.seed, "sse"), a.fail_prob);
  int accepted = 0;
  for (const auto& round : r.rounds) accepted += round.accepted ? 1 : 0;
  report["sets"] = Json::array({to_json(r.cut)});
  report["summary"] = {{"alpha", r.alpha},
                       {"support_limit", r.support_limit},
                       {"mass_threshold", r.mass_threshold},
                       {"rounds", r.rounds.size()},
                       {"accepted_rounds", accepted},
                       {"size", r.cut.subset.size()},
                       {"size_within_limit", static_cast<double>(r.cut.subset.size()) <= r.support_limit}};
  write_text(a.common.out, "sets.csv", sets_csv({r.cut}, {}));
  emit(a.common, report);
  return kOk;
}

int run_multiway(PartitionArgs& a) {
  const Hypergraph h = load_hypergraph(a.file);
  if (a.min.k > h.num_vertices()) throw DomainError("k exceeds the number of vertices");
  const double eps = a.eps > 0.0 ? a.eps : 1.0 / a.min.k;
  Json config = minimizer_config(a.min);
  config["file"] = a.file;
  config["seed"] = a.common.seed;
  config["eps"] = eps;
  Json report = envelope("multiway", config);
  report["hypergraph"] = graph_summary(h);
  const MinimizerSet f = acquire(h, a.min, derive_seed(a.common.seed, "multiway-minimizers"));
  report["minimizer_ratios"] = f.ratios;
  const MultiwayResult r = multiway_partition(h, f, eps, derive_seed(a.common.seed, "multiway"));
  Json sets = Json::array();
  for (const auto& s : r.sets) sets.push_back(to_json(s));
  report["sets"] = sets;
  double worst = 0.0;
  for (const auto& s : r.sets) worst = std::max(worst, s.expansion);
  report["summary"] = {{"required", r.required}, {"returned", r.sets.size()}, {"attempts", r.attempts},
                       {"samples_per_attempt", r.samples_per_attempt}, {"alpha", r.alpha}, {"beta", r.beta},
                       {"tau", r.tau}, {"max_expansion", worst}, {"merged_mu", r.merged_mu}};
  write_text(a.common.out, "sets.csv", sets_csv(r.sets, r.merged_mu));
  emit(a.common, report);
  return kOk;
}

// --- demands ----------------------------------------------------------------

struct DemandsArgs {
  Common common;
  std::string file;
  std::string demands;
  int trials = kDemandRoundingTrials;
};

int run_demands(DemandsArgs& a) {
  DemandInstance inst{load_hypergraph(a.file), {}};
  inst.pairs = load_demands(a.demands, inst.h.num_vertices());
  inst.validate();
  Json config{{"file", a.file}, {"demands", a.demands}, {"trials", a.trials}, {"seed", a.common.seed}};
  Json report = envelope("demands", config);
  report["hypergraph"] = graph_summary(inst.h);
  report["pairs"] = inst.pairs.size();
  const DemandsResult r = sparsest_cut_demands(inst, derive_seed(a.common.seed, "demands"), {}, a.trials);
  report["cut"] = {{"subset", r.cut.subset},
                   {"sparsity", r.cut.sparsity},
                   {"cut_weight", r.cut.cut_weight},
                   {"separated_demand", r.cut.demand}};
  report["sdp"] = {{"value", r.sdp_value}, {"max_triangle_violation", r.max_triangle_violation}};
  report["embedding_distortion"] = r.distortion;
  report["line_ratio"] = r.line_ratio;
  report["sweep_bound_holds"] = r.sweep_bound_holds;
  report["trials"] = r.trials;
  int code = r.sweep_bound_holds ? kOk : kVerificationFailure;
  if (inst.h.num_vertices() <= 20) {
    const DemandCut best = sparsest_cut_bruteforce(inst);
    const double ratio = r.cut.sparsity / best.sparsity;
    const bool relaxation = r.sdp_value <= best.sparsity * (1.0 + 1e-6) + 1e-12;
    report["bruteforce"] = {{"sparsity", best.sparsity},
                            {"subset", best.subset},
                            {"approximation_ratio", ratio},
                            {"sdp_below_optimum", relaxation}};
    if (!relaxation || r.cut.sparsity < best.sparsity * (1.0 - 1e-9)) code = kVerificationFailure;
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "sparsity,cut_weight,separated_demand,sdp_value,distortion,line_ratio\n"
      << r.cut.sparsity << ',' << r.cut.cut_weight << ',' << r.cut.demand << ',' << r.sdp_value << ','
      << r.distortion << ',' << r.line_ratio << '\n';
  write_text(a.common.out, "summary.csv", csv.str());
  emit(a.common, report);
  return code;
}

// --- verify-examples --------------------------------------------------------

struct VerifyArgs {
  Common common;
  VerifyOptions options;
};

int run_verify(VerifyArgs& a) {
  const VerifyReport r = verify_examples(a.options);
  Json config{{"tolerance", a.options.tolerance}, {"four_vertex_e3_weight", a.options.four_vertex_e3_weight}};
  Json report = envelope("verify-examples", config);
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"fixture", c.fixture},
                      {"check", c.name},
                      {"ok", c.ok},
                      {"error", c.error},
                      {"expected", c.expected},
                      {"actual", c.actual}});
  report["checks"] = checks;
  report["ok"] = r.ok();
  for (const auto* c : r.failures()) {
    std::cerr << "FAIL " << c->fixture << '/' << c->name << ": error " << c->error << "\n  expected";
    for (double x : c->expected) std::cerr << ' ' << x;
    std::cerr << "\n  actual  ";
    for (double x : c->actual) std::cerr << ' ' << x;
    std::cerr << '\n';
  }
  emit(a.common, report);
  return r.ok() ? kOk : kVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral tools for hypergraphs: Laplacian diffusion, minimizers and partitioning"};
  app.set_version_flag("--version", std::string(HYPERLAP_VERSION));
  app.require_subcommand(1);

  SpectralArgs spectral;
  auto* sp = app.add_subcommand("spectral", "Procedural minimizers by exact oracle or SDP rounding");
  sp->add_option("file", spectral.file, "Hypergraph file")->required();
  sp->add_flag("--oracle", spectral.oracle, "Exact oracle (n <= 8)");
  sp->add_flag("--sdp", spectral.sdp, "SDP relaxation with Gaussian rounding");
  add_minimizer_options(sp, spectral.min);
  add_common(sp, spectral.common);

  DiffuseArgs diffuse;
  auto* df = app.add_subcommand("diffuse", "Simulate the diffusion process");
  df->add_option("file", diffuse.file, "Hypergraph file")->required();
  df->add_option("--horizon", diffuse.horizon, "Time horizon T")->check(CLI::NonNegativeNumber);
  df->add_option("--step", diffuse.step, "Euler step h (default 0.01 / gamma2)");
  df->add_option("--eta", diffuse.eta, "Noise rate for the stochastic process")->check(CLI::NonNegativeNumber);
  df->add_option("--start", diffuse.start, "vertex:<i>, random or stationary");
  df->add_flag("--slow-start", diffuse.slow_start, "Start from the slow-mixing measure built from f2");
  df->add_flag("--cut", diffuse.cut, "Extract a cut from the trajectory");
  df->add_option("--delta", diffuse.delta, "Mixing threshold on the l1 distance");
  df->add_option("--gamma2", diffuse.gamma2, "Spectral gap (computed by the oracle when n <= 8)");
  add_common(df, diffuse.common);

  CutArgs cut;
  auto* ct = app.add_subcommand("cut", "Sweep cut, exact expansion and Cheeger sandwich");
  ct->add_option("file", cut.file, "Hypergraph file")->required();
  add_minimizer_options(ct, cut.min);
  add_common(ct, cut.common);

  PartitionArgs sse;
  auto* ss = app.add_subcommand("sse", "Small-set expansion via orthogonal separators");
  ss->add_option("file", sse.file, "Hypergraph file")->required();
  ss->add_option("--failure-probability", sse.fail_prob, "Target failure probability")->check(CLI::Range(1e-12, 0.5));
  add_minimizer_options(ss, sse.min);
  add_common(ss, sse.common);

  PartitionArgs multiway;
  auto* mw = app.add_subcommand("multiway", "Disjoint sets of small expansion");
  mw->add_option("file", multiway.file, "Hypergraph file")->required();
  mw->add_option("--eps", multiway.eps, "Slack eps in [1/k, 1) (default 1/k)");
  add_minimizer_options(mw, multiway.min);
  add_common(mw, multiway.common);

  DemandsArgs demands;
  auto* dm = app.add_subcommand("demands", "Sparsest cut with general demands");
  dm->add_option("file", demands.file, "Hypergraph file")->required();
  dm->add_option("demands", demands.demands, "Demand pairs file (\"s t D\" per line)")->required();
  dm->add_option("--trials", demands.trials, "Gaussian projections")->check(CLI::Range(1, 1 << 30));
  add_common(dm, demands.common);

  VerifyArgs verify;
  auto* vf = app.add_subcommand("verify-examples", "Check the embedded worked examples");
  vf->add_option("--tolerance", verify.options.tolerance, "Absolute tolerance")->check(CLI::PositiveNumber);
  vf->add_option("--perturb-e3", verify.options.four_vertex_e3_weight, "Weight of e3 in the four-vertex example")
      ->check(CLI::PositiveNumber);
  add_common(vf, verify.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sp) return run_spectral(spectral);
    if (*df) return run_diffuse(diffuse);
    if (*ct) return run_cut(cut);
    if (*ss) return run_sse(sse);
    if (*mw) return run_multiway(multiway);
    if (*dm) return run_demands(demands);
    if (*vf) return run_verify(verify);
  } catch (const Error& e) {
    std::cerr << "hyperlap: " << kind_name(e.kind()) << " error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "hyperlap: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
