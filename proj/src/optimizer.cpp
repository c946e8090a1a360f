#include "dpfl/optimizer.hpp"

#include "dpfl/errors.hpp"
#include "dpfl/rng.hpp"

namespace dpfl {

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0))
    throw DomainError("OptimizerConfig: learning_rate must be >= 0");
  if (cfg.local_steps < 1)
    throw DomainError("OptimizerConfig: local_steps must be >= 1");
  if (cfg.batch_size < 1)
    throw DomainError("OptimizerConfig: batch_size must be >= 1");
  if (cfg.perturbation_radius < 0.0)
    throw DomainError("OptimizerConfig: perturbation_radius must be >= 0");
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
    throw DomainError("OptimizerConfig: momentum must be in [0,1)");
  if (cfg.lr_decay < 0.0)
    throw DomainError("OptimizerConfig: lr_decay must be >= 0");
}

ParamVector sam_perturbation(const ParamVector& grad, double radius) {
  if (radius < 0.0) throw DomainError("sam_perturbation: radius must be >= 0");
  const double norm = grad.norm();
  if (radius == 0.0 || norm == 0.0) return ParamVector::Zero(grad.size());
  return (radius / norm) * grad;
}

ParamVector sam_gradient(const ParamVector& params, const Batch& batch,
                         double radius, const ModelSpec& spec) {
  return sam_gradient_with(
      [&](const ParamVector& w) { return loss_and_grad(w, batch, spec).grad; },
      params, radius);
}

LocalRoundResult run_local_round(const ParamVector& global_params,
                                 const Dataset& data, const ClientShard& shard,
                                 const OptimizerConfig& cfg,
                                 const ModelSpec& spec,
                                 std::uint64_t rng_seed) {
  validate(cfg);
  if (shard.examples.empty())
    throw DomainError("run_local_round: empty shard");

  Rng rng(rng_seed);
  const int shard_size = static_cast<int>(shard.examples.size());
  const bool full_batch = cfg.batch_size >= shard_size;

  ParamVector params = global_params;
  ParamVector velocity = ParamVector::Zero(params.size());
  LocalRoundResult result;
  result.loss_trace.reserve(cfg.local_steps);

  std::vector<int> batch_indices(full_batch ? shard_size : cfg.batch_size);
  for (int k = 0; k < cfg.local_steps; ++k) {
    if (full_batch) {
      batch_indices = shard.examples;
    } else {
      for (int& idx : batch_indices)
        idx = shard.examples[rng.below(static_cast<std::uint64_t>(shard_size))];
    }
    const Batch batch = make_batch(data, batch_indices);

    const LossGrad at_params = loss_and_grad(params, batch, spec);
    result.loss_trace.push_back(at_params.loss);

    ParamVector step_grad;
    if (cfg.kind == OptimizerKind::kSam && cfg.perturbation_radius > 0.0) {
      const ParamVector shift =
          sam_perturbation(at_params.grad, cfg.perturbation_radius);
      step_grad = shift.isZero(0.0)
                      ? at_params.grad
                      : loss_and_grad(params + shift, batch, spec).grad;
    } else {
      step_grad = at_params.grad;
    }

    const double eta = cfg.learning_rate / (1.0 + cfg.lr_decay * k);
    if (cfg.momentum > 0.0) {
      velocity = cfg.momentum * velocity + step_grad;
      params -= eta * velocity;
    } else {
      params -= eta * step_grad;
    }
  }

  result.delta = params - global_params;
  return result;
}

}  // namespace dpfl
