#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dpfl/data.hpp"
#include "dpfl/model.hpp"

namespace dpfl {

enum class OptimizerKind { kSgd, kSam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgd;
  double learning_rate = 0.1;
  double perturbation_radius = 0.0;  // ignored for sgd
  int local_steps = 1;
  int batch_size = 32;
  // Optional extras, off by default; the analyzed update rule has neither.
  double momentum = 0.0;
  double lr_decay = 0.0;  // per-step multiplicative decay eta_k = eta/(1 + k*decay)
};

void validate(const OptimizerConfig& cfg);

// Ascent direction of norm exactly `radius`: radius * g / ||g||.
// Zero when ||g|| = 0 or radius = 0 (the only continuous extension).
ParamVector sam_perturbation(const ParamVector& grad, double radius);

// Gradient evaluated at the perturbed point w + sam_perturbation(grad(w)).
// Generic over the gradient oracle so toy objectives can reuse it.
template <class GradFn>
ParamVector sam_gradient_with(GradFn&& grad_fn, const ParamVector& params,
                              double radius) {
  ParamVector g = grad_fn(params);
  if (radius <= 0.0) return g;
  const ParamVector shift = sam_perturbation(g, radius);
  if (shift.isZero(0.0)) return g;
  return grad_fn(params + shift);
}

ParamVector sam_gradient(const ParamVector& params, const Batch& batch,
                         double radius, const ModelSpec& spec);

struct LocalRoundResult {
  ParamVector delta;              // final local params - global params
  std::vector<double> loss_trace; // pre-step batch loss, one entry per step
};

// One client's local round: exactly cfg.local_steps steps from the round's
// global parameters, each on a batch sampled uniformly with replacement from
// the shard (the whole shard, in order, when batch_size covers it).
// Deterministic for a fixed rng_seed.
LocalRoundResult run_local_round(const ParamVector& global_params,
                                 const Dataset& data, const ClientShard& shard,
                                 const OptimizerConfig& cfg,
                                 const ModelSpec& spec,
                                 std::uint64_t rng_seed);

}  // namespace dpfl
