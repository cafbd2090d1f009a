#include "report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hyperlap::cli {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Convergence:
    case ErrorKind::Divergence: return kConvergence;
    case ErrorKind::StochasticFailure: return kStochastic;
    default: return kUsage;
  }
}

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::StochasticFailure: return "stochastic-failure";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Io: return "io";
  }
  return "error";
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const CutResult& cut) {
  return Json{{"subset", cut.subset},
              {"expansion", cut.expansion},
              {"cut_weight", cut.cut_weight},
              {"subset_weight", cut.subset_weight}};
}

Json to_json(const MinimizerSet& set) {
  Json vectors = Json::array();
  for (const auto& v : set.vectors) vectors.push_back(to_json(v));
  Json out{{"method", method_name(set.method)}, {"ratios", set.ratios}, {"vectors", vectors}};
  if (!set.sdp_values.empty()) out["sdp_values"] = set.sdp_values;
  if (!set.seeds.empty()) out["seeds"] = set.seeds;
  if (!set.residuals.empty()) out["orthogonality_residuals"] = set.residuals;
  return out;
}

Json envelope(const std::string& command, const Json& config) {
  return Json{{"tool", "hyperlap"}, {"version", HYPERLAP_VERSION}, {"command", command}, {"config", config}};
}

void write_text(const std::string& out_dir, const std::string& name, const std::string& text) {
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const auto path = std::filesystem::path(out_dir) / name;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string csv_vectors(const std::vector<std::string>& header, const std::vector<Vector>& columns) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  const Eigen::Index rows = columns.empty() ? 0 : columns.front().size();
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c](r);
    out << '\n';
  }
  return out.str();
}

}  // namespace hyperlap::cli
