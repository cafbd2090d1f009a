#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace hyperlap {

using Rng = std::mt19937_64;

// Deterministic stream for (seed, tag, index).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);
Rng make_rng(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index n);

// Worker cap from HYPERLAP_THREADS (defaults to hardware concurrency).
unsigned worker_count();

}  // namespace hyperlap
