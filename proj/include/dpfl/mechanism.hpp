#pragma once

#include <Eigen/Dense>

#include "dpfl/model.hpp"
#include "dpfl/rng.hpp"

namespace dpfl {

// min(1, C/||delta||); 1 for the zero update.
double clip_factor(const ParamVector& delta, double clip_threshold);

// delta * clip_factor(delta, C): norm capped at C, direction preserved.
ParamVector clip_update(const ParamVector& delta, double clip_threshold);

// Adds i.i.d. Gaussian noise with per-coordinate variance
// (noise_multiplier * C)^2 / sampled_clients to every coordinate.
// Identity when noise_multiplier is 0.
ParamVector add_noise(const ParamVector& delta, double clip_threshold,
                      double noise_multiplier, int sampled_clients, Rng& rng);

struct SparsifyResult {
  ParamVector sparse;
  Eigen::Array<bool, Eigen::Dynamic, 1> mask;
};

// Keeps the k largest-magnitude coordinates, zeroing the rest. Ties broken
// toward the lower index.
SparsifyResult topk_sparsify(const ParamVector& delta, Eigen::Index k);

// Keeps k uniformly chosen coordinates (without replacement).
SparsifyResult randk_sparsify(const ParamVector& delta, Eigen::Index k,
                              Rng& rng);

}  // namespace dpfl
