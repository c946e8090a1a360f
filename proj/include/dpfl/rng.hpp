#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace dpfl {

// splitmix64 finalizer; bijective mixing of a 64-bit word.
std::uint64_t mix_seed(std::uint64_t x);

// Derives an independent substream seed from (master, tag0, tag1, ...).
// Used for per-(round, client) streams so that results never depend on
// client visit order or thread count.
template <class... Tags>
std::uint64_t derive_seed(std::uint64_t master, Tags... tags) {
  std::uint64_t h = mix_seed(master + 0x9e3779b97f4a7c15ULL);
  ((h = mix_seed(h ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(tags) + 0x2545f4914f6cdd1dULL)))),
   ...);
  return h;
}

// Deterministic random stream. The engine (std::mt19937_64) is pinned by the
// standard; the distribution transforms are implemented here because the
// standard library's distributions are implementation-defined and would break
// bit-reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();
  // Standard normal (Box-Muller).
  double normal();
  // Unbiased uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  // Gamma(shape, 1) via Marsaglia-Tsang; shape must be positive.
  double gamma(double shape);

  Eigen::VectorXd normal_vector(Eigen::Index d);
  // Dirichlet draw with symmetric concentration alpha over k categories.
  Eigen::VectorXd dirichlet(double alpha, int k);
  // First k entries of a uniform random permutation of [0, n), unsorted.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dpfl
