#include "hyperlap/random.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace hyperlap {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  // FNV-1a over the tag keeps streams stable across platforms.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return splitmix(splitmix(seed ^ hash) + index);
}

Rng make_rng(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return Rng(derive_seed(seed, tag, index));
}

Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HYPERLAP_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
    } catch (...) {
    }
  }
  return hw;
}

}  // namespace hyperlap
