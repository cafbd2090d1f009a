#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperlap/hypergraph.hpp"
#include "hyperlap/spectral.hpp"

namespace hyperlap::cli {

using Json = nlohmann::ordered_json;

enum ExitCode {
  kOk = 0,
  kVerificationFailure = 1,
  kUsage = 2,
  kConvergence = 3,
  kStochastic = 4,
};

int exit_code_for(const Error& e);
const char* kind_name(ErrorKind kind);

Json to_json(const Vector& v);
Json to_json(const CutResult& cut);
Json to_json(const MinimizerSet& set);

// Common envelope: tool version, command and resolved configuration.
Json envelope(const std::string& command, const Json& config);

// Writes next to out_dir when it is non-empty; creates the directory.
void write_text(const std::string& out_dir, const std::string& name, const std::string& text);

std::string csv_vectors(const std::vector<std::string>& header, const std::vector<Vector>& columns);

}  // namespace hyperlap::cli
