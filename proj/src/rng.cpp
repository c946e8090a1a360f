#include "dpfl/rng.hpp"

#include <cmath>
#include <numbers>

#include "dpfl/errors.hpp"

namespace dpfl {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::uniform() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

double Rng::uniform_pos() {
  return std::ldexp(static_cast<double>((next_u64() >> 11) + 1), -53);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::below: n must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("Rng::gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape+1, then scale by U^(1/shape).
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index d) {
  Eigen::VectorXd out(d);
  for (Eigen::Index i = 0; i < d; ++i) out[i] = normal();
  return out;
}

Eigen::VectorXd Rng::dirichlet(double alpha, int k) {
  Eigen::VectorXd out(k);
  for (int i = 0; i < k; ++i) out[i] = gamma(alpha);
  const double total = out.sum();
  if (total <= 0.0) {
    // All gamma draws underflowed (tiny alpha); fall back to a point mass.
    out.setZero();
    out[static_cast<int>(below(static_cast<std::uint64_t>(k)))] = 1.0;
    return out;
  }
  return out / total;
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k < 0 || k > n) throw DomainError("sample_without_replacement: need 0 <= k <= n");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace dpfl
