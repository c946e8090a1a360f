#include "dpfl/model.hpp"

#include <cmath>
#include <string>

#include "dpfl/errors.hpp"
#include "dpfl/rng.hpp"

namespace dpfl {
namespace {

Eigen::MatrixXd apply_activation(const Eigen::MatrixXd& z, Activation act) {
  if (act == Activation::kRelu) return z.cwiseMax(0.0);
  return z.array().tanh().matrix();
}

Eigen::MatrixXd activation_derivative(const Eigen::MatrixXd& z, Activation act) {
  if (act == Activation::kRelu)
    return (z.array() > 0.0).cast<double>().matrix();
  return (1.0 - z.array().tanh().square()).matrix();
}

void check_finite(const Eigen::MatrixXd& m, int layer, const char* what) {
  if (!m.allFinite())
    throw NumericError(std::string("non-finite ") + what + " at layer " +
                       std::to_string(layer));
}

// Row-wise softmax with max subtraction.
Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd shifted =
      logits.colwise() - logits.rowwise().maxCoeff();
  Eigen::MatrixXd expz = shifted.array().exp().matrix();
  return expz.array().colwise() / expz.rowwise().sum().array();
}

}  // namespace

void validate(const ModelSpec& spec) {
  if (spec.layer_sizes.size() < 2)
    throw DomainError("ModelSpec: need at least 2 layer sizes");
  for (int s : spec.layer_sizes)
    if (s < 1) throw DomainError("ModelSpec: layer sizes must be >= 1");
}

Eigen::Index param_count(const ModelSpec& spec) {
  validate(spec);
  Eigen::Index d = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l)
    d += static_cast<Eigen::Index>(spec.layer_sizes[l]) * spec.layer_sizes[l + 1] +
         spec.layer_sizes[l + 1];
  return d;
}

ParamVector init_params(const ModelSpec& spec, std::uint64_t seed) {
  const Eigen::Index d = param_count(spec);
  ParamVector params(d);
  Rng rng(derive_seed(seed, 0xd00dULL));
  Eigen::Index at = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const Eigen::Index n = static_cast<Eigen::Index>(spec.layer_sizes[l]) * spec.layer_sizes[l + 1] +
                           spec.layer_sizes[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.layer_sizes[l]));
    for (Eigen::Index i = 0; i < n; ++i)
      params[at + i] = scale * (2.0 * rng.uniform() - 1.0);
    at += n;
  }
  return params;
}

LossGrad loss_and_grad(const ParamVector& params, const Batch& batch,
                       const ModelSpec& spec) {
  validate(spec);
  if (params.size() != param_count(spec))
    throw DomainError("loss_and_grad: params length does not match spec");
  if (batch.features.rows() != batch.labels.size() || batch.features.rows() < 1)
    throw DomainError("loss_and_grad: batch features/labels mismatch");

  const int num_layers = static_cast<int>(spec.layer_sizes.size()) - 1;
  const Eigen::Index n = batch.features.rows();

  // Forward pass, keeping pre-activations for backprop.
  std::vector<Eigen::MatrixXd> acts(num_layers + 1);
  std::vector<Eigen::MatrixXd> preacts(num_layers);
  acts[0] = batch.features;
  Eigen::Index at = 0;
  for (int l = 0; l < num_layers; ++l) {
    const Eigen::Index in = spec.layer_sizes[l];
    const Eigen::Index out = spec.layer_sizes[l + 1];
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + at, in, out);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + at + in * out, out);
    preacts[l] = (acts[l] * w).rowwise() + b.transpose();
    check_finite(preacts[l], l, "pre-activation");
    acts[l + 1] = (l + 1 < num_layers)
                      ? apply_activation(preacts[l], spec.activation)
                      : preacts[l];
    at += in * out + out;
  }

  const Eigen::MatrixXd probs = softmax(acts[num_layers]);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = batch.labels[i];
    if (y < 0 || y >= spec.layer_sizes.back())
      throw DomainError("loss_and_grad: label out of range");
    loss -= std::log(std::max(probs(i, y), 1e-300));
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss))
    throw NumericError("non-finite loss at layer " + std::to_string(num_layers - 1));

  // Backward pass.
  LossGrad result;
  result.loss = loss;
  result.grad = ParamVector::Zero(params.size());
  Eigen::MatrixXd dz = probs;
  for (Eigen::Index i = 0; i < n; ++i) dz(i, batch.labels[i]) -= 1.0;
  dz /= static_cast<double>(n);

  for (int l = num_layers - 1; l >= 0; --l) {
    const Eigen::Index in = spec.layer_sizes[l];
    const Eigen::Index out = spec.layer_sizes[l + 1];
    at -= in * out + out;
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + at, in, out);
    Eigen::Map<Eigen::MatrixXd> dw(result.grad.data() + at, in, out);
    Eigen::Map<Eigen::VectorXd> db(result.grad.data() + at + in * out, out);
    dw = acts[l].transpose() * dz;
    db = dz.colwise().sum();
    check_finite(dw, l, "weight gradient");
    if (l > 0)
      dz = (dz * w.transpose()).cwiseProduct(
          activation_derivative(preacts[l - 1], spec.activation));
  }
  return result;
}

double batch_loss(const ParamVector& params, const Batch& batch,
                  const ModelSpec& spec) {
  validate(spec);
  if (params.size() != param_count(spec))
    throw DomainError("batch_loss: params length does not match spec");
  const int num_layers = static_cast<int>(spec.layer_sizes.size()) - 1;
  Eigen::MatrixXd h = batch.features;
  Eigen::Index at = 0;
  for (int l = 0; l < num_layers; ++l) {
    const Eigen::Index in = spec.layer_sizes[l];
    const Eigen::Index out = spec.layer_sizes[l + 1];
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + at, in, out);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + at + in * out, out);
    h = (h * w).rowwise() + b.transpose();
    check_finite(h, l, "pre-activation");
    if (l + 1 < num_layers) h = apply_activation(h, spec.activation);
    at += in * out + out;
  }
  const Eigen::MatrixXd probs = softmax(h);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < batch.labels.size(); ++i)
    loss -= std::log(std::max(probs(i, batch.labels[i]), 1e-300));
  return loss / static_cast<double>(batch.labels.size());
}

Eigen::VectorXi predict(const ParamVector& params,
                        const Eigen::MatrixXd& features,
                        const ModelSpec& spec) {
  const int num_layers = static_cast<int>(spec.layer_sizes.size()) - 1;
  Eigen::MatrixXd h = features;
  Eigen::Index at = 0;
  for (int l = 0; l < num_layers; ++l) {
    const Eigen::Index in = spec.layer_sizes[l];
    const Eigen::Index out = spec.layer_sizes[l + 1];
    Eigen::Map<const Eigen::MatrixXd> w(params.data() + at, in, out);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + at + in * out, out);
    h = (h * w).rowwise() + b.transpose();
    if (l + 1 < num_layers) h = apply_activation(h, spec.activation);
    at += in * out + out;
  }
  Eigen::VectorXi out(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < h.cols(); ++j)
      if (h(i, j) > h(i, best)) best = static_cast<int>(j);
    out[i] = best;
  }
  return out;
}

EvalResult evaluate(const ParamVector& params, std::span<const Batch> dataset,
                    const ModelSpec& spec) {
  if (dataset.empty()) throw DomainError("evaluate: empty dataset");
  double correct = 0.0;
  double loss_sum = 0.0;
  Eigen::Index total = 0;
  for (const Batch& batch : dataset) {
    const Eigen::Index n = batch.labels.size();
    const Eigen::VectorXi pred = predict(params, batch.features, spec);
    for (Eigen::Index i = 0; i < n; ++i)
      if (pred[i] == batch.labels[i]) correct += 1.0;
    loss_sum += batch_loss(params, batch, spec) * static_cast<double>(n);
    total += n;
  }
  return {correct / static_cast<double>(total),
          loss_sum / static_cast<double>(total)};
}

}  // namespace dpfl
