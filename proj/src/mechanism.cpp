#include "dpfl/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dpfl/errors.hpp"

namespace dpfl {

double clip_factor(const ParamVector& delta, double clip_threshold) {
  if (!(clip_threshold > 0.0))
    throw DomainError("clip_factor: clip threshold must be positive");
  const double norm = delta.norm();
  if (norm == 0.0) return 1.0;
  return std::min(1.0, clip_threshold / norm);
}

ParamVector clip_update(const ParamVector& delta, double clip_threshold) {
  return delta * clip_factor(delta, clip_threshold);
}

ParamVector add_noise(const ParamVector& delta, double clip_threshold,
                      double noise_multiplier, int sampled_clients, Rng& rng) {
  if (sampled_clients < 1)
    throw DomainError("add_noise: sampled_clients must be >= 1");
  if (noise_multiplier < 0.0)
    throw DomainError("add_noise: noise_multiplier must be >= 0");
  if (noise_multiplier == 0.0) return delta;
  const double stddev = noise_multiplier * clip_threshold /
                        std::sqrt(static_cast<double>(sampled_clients));
  return delta + stddev * rng.normal_vector(delta.size());
}

SparsifyResult topk_sparsify(const ParamVector& delta, Eigen::Index k) {
  const Eigen::Index d = delta.size();
  if (k < 1 || k > d) throw DomainError("topk_sparsify: k out of range");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     const double ma = std::abs(delta[a]);
                     const double mb = std::abs(delta[b]);
                     if (ma != mb) return ma > mb;
                     return a < b;
                   });

  SparsifyResult result;
  result.sparse = ParamVector::Zero(d);
  result.mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(d, false);
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index idx = order[static_cast<std::size_t>(i)];
    result.sparse[idx] = delta[idx];
    result.mask[idx] = true;
  }
  return result;
}

SparsifyResult randk_sparsify(const ParamVector& delta, Eigen::Index k,
                              Rng& rng) {
  const Eigen::Index d = delta.size();
  if (k < 1 || k > d) throw DomainError("randk_sparsify: k out of range");

  const std::vector<int> kept =
      rng.sample_without_replacement(static_cast<int>(d), static_cast<int>(k));
  SparsifyResult result;
  result.sparse = ParamVector::Zero(d);
  result.mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(d, false);
  for (int idx : kept) {
    result.sparse[idx] = delta[idx];
    result.mask[idx] = true;
  }
  return result;
}

}  // namespace dpfl
