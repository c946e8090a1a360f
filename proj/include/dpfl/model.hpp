#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace dpfl {

// Flat model parameter / update vector of dimension d; the common currency
// between the model, the optimizer, and the privacy mechanism.
using ParamVector = Eigen::VectorXd;

enum class Activation { kRelu, kTanh };

// Fully-connected classifier architecture: input dim, hidden dims..., class
// count. Parameters are stored flat, per layer, as the column-major weight
// matrix followed by the bias vector.
struct ModelSpec {
  std::vector<int> layer_sizes;
  Activation activation = Activation::kRelu;
};

struct Batch {
  Eigen::MatrixXd features;  // n x input_dim
  Eigen::VectorXi labels;    // values in [0, class_count)
};

// Throws DomainError if the spec has fewer than 2 layers or a non-positive
// layer size.
void validate(const ModelSpec& spec);

Eigen::Index param_count(const ModelSpec& spec);

// Scaled-uniform initialization: each layer's entries are uniform on
// [-1/sqrt(fan_in), 1/sqrt(fan_in)]. Deterministic for a fixed seed.
ParamVector init_params(const ModelSpec& spec, std::uint64_t seed);

struct LossGrad {
  double loss = 0.0;
  ParamVector grad;
};

// Mean softmax cross-entropy over the batch and its exact analytic gradient.
// Throws NumericError naming the offending layer if activations overflow.
LossGrad loss_and_grad(const ParamVector& params, const Batch& batch,
                       const ModelSpec& spec);

// Loss-only forward pass (used by finite-difference checks and landscape
// scans where the gradient is not needed).
double batch_loss(const ParamVector& params, const Batch& batch,
                  const ModelSpec& spec);

// Argmax class per row; ties broken toward the lowest class index.
Eigen::VectorXi predict(const ParamVector& params,
                        const Eigen::MatrixXd& features,
                        const ModelSpec& spec);

struct EvalResult {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

// Example-weighted accuracy and mean loss over a nonempty batch sequence.
EvalResult evaluate(const ParamVector& params, std::span<const Batch> dataset,
                    const ModelSpec& spec);

}  // namespace dpfl
