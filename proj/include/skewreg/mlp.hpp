#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewreg/dataset.hpp"
#include "skewreg/reweight.hpp"
#include "skewreg/rng.hpp"

namespace skewreg {

/// Feed-forward regressor configuration. Hidden layers use ReLU; the output
/// is a single linear unit. Training is plain mini-batch descent with
/// Adam-style adaptive steps, deterministic for a fixed seed.
struct MlpConfig {
  std::vector<std::size_t> hidden_sizes{64, 64};
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  bool output_clamp = true;  // clamp predictions to [0, 100] at inference
};

inline void validate(const MlpConfig& cfg) {
  if (cfg.epochs == 0) {
    throw std::invalid_argument("MlpConfig: epochs must be >= 1");
  }
  if (cfg.batch_size == 0) {
    throw std::invalid_argument("MlpConfig: batch_size must be >= 1");
  }
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw std::invalid_argument("MlpConfig: learning_rate must be > 0");
  }
  for (std::size_t h : cfg.hidden_sizes) {
    if (h == 0) {
      throw std::invalid_argument("MlpConfig: hidden sizes must be >= 1");
    }
  }
}

/// One dense layer, weights row-major [out][in].
struct Layer {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct MlpParams {
  std::vector<Layer> layers;

  std::size_t input_dim() const {
    return layers.empty() ? 0 : layers.front().in;
  }

  void set_zero() {
    for (Layer& l : layers) {
      std::fill(l.weights.begin(), l.weights.end(), 0.0);
      std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
  }

  MlpParams zero_like() const {
    MlpParams g = *this;
    g.set_zero();
    return g;
  }

  bool all_finite() const {
    for (const Layer& l : layers) {
      for (double w : l.weights) {
        if (!std::isfinite(w)) return false;
      }
      for (double b : l.bias) {
        if (!std::isfinite(b)) return false;
      }
    }
    return true;
  }

  /// Max absolute componentwise difference; shapes must match.
  double l_inf_distance(const MlpParams& other) const {
    if (layers.size() != other.layers.size()) {
      throw std::invalid_argument("l_inf_distance: shape mismatch");
    }
    double d = 0.0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const Layer& a = layers[l];
      const Layer& b = other.layers[l];
      if (a.in != b.in || a.out != b.out) {
        throw std::invalid_argument("l_inf_distance: shape mismatch");
      }
      for (std::size_t i = 0; i < a.weights.size(); ++i) {
        d = std::max(d, std::abs(a.weights[i] - b.weights[i]));
      }
      for (std::size_t i = 0; i < a.bias.size(); ++i) {
        d = std::max(d, std::abs(a.bias[i] - b.bias[i]));
      }
    }
    return d;
  }
};

/// He-style seeded initialization: W ~ N(0, 2/fan_in), biases zero. Draw
/// order is layer-by-layer in row-major index order, so parameters are a
/// pure function of (dims, seed).
inline MlpParams init_params(std::size_t input_dim,
                             const std::vector<std::size_t>& hidden_sizes,
                             Rng& rng) {
  if (input_dim == 0) {
    throw std::invalid_argument("init_params: input_dim must be >= 1");
  }
  std::vector<std::size_t> widths;
  widths.push_back(input_dim);
  for (std::size_t h : hidden_sizes) {
    widths.push_back(h);
  }
  widths.push_back(1);

  MlpParams params;
  params.layers.resize(widths.size() - 1);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer& layer = params.layers[l];
    layer.in = widths[l];
    layer.out = widths[l + 1];
    layer.weights.resize(layer.in * layer.out);
    layer.bias.assign(layer.out, 0.0);
    const double scale = std::sqrt(2.0 / static_cast<double>(layer.in));
    for (double& w : layer.weights) {
      w = rng.normal() * scale;
    }
  }
  return params;
}

/// Scalar forward pass (unclamped).
inline double forward(const MlpParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim()) {
    throw std::invalid_argument("forward: feature length " +
                                std::to_string(x.size()) + " != input dim " +
                                std::to_string(params.input_dim()));
  }
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const Layer& layer = params.layers[l];
    const bool is_last = (l + 1 == params.layers.size());
    next.assign(layer.out, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      const double* row = layer.weights.data() + o * layer.in;
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < layer.in; ++i) {
        acc += row[i] * cur[i];
      }
      next[o] = is_last ? acc : std::max(acc, 0.0);
    }
    cur.swap(next);
  }
  return cur[0];
}

/// Batched forward/backward engine with reusable buffers. backward() must be
/// fed the same params/rows/indices as the immediately preceding forward().
class Backprop {
 public:
  /// Forward pass over the selected rows; returns one prediction per index.
  std::span<const double> forward(const MlpParams& params,
                                  const std::vector<std::vector<double>>& rows,
                                  std::span<const std::size_t> idx) {
    const std::size_t n_layers = params.layers.size();
    const std::size_t batch = idx.size();
    act_.resize(n_layers + 1);
    act_[0].resize(batch * params.input_dim());
    for (std::size_t s = 0; s < batch; ++s) {
      const std::vector<double>& row = rows[idx[s]];
      std::copy(row.begin(), row.end(),
                act_[0].begin() + static_cast<std::ptrdiff_t>(
                                      s * params.input_dim()));
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
      const Layer& layer = params.layers[l];
      const bool is_last = (l + 1 == n_layers);
      act_[l + 1].assign(batch * layer.out, 0.0);
      const double* in_base = act_[l].data();
      double* out_base = act_[l + 1].data();
      for (std::size_t s = 0; s < batch; ++s) {
        const double* in = in_base + s * layer.in;
        double* out = out_base + s * layer.out;
        for (std::size_t o = 0; o < layer.out; ++o) {
          const double* row = layer.weights.data() + o * layer.in;
          double acc = layer.bias[o];
          for (std::size_t i = 0; i < layer.in; ++i) {
            acc += row[i] * in[i];
          }
          out[o] = is_last ? acc : std::max(acc, 0.0);
        }
      }
    }
    preds_.resize(batch);
    const double* out_base = act_[n_layers].data();
    for (std::size_t s = 0; s < batch; ++s) {
      preds_[s] = out_base[s];
    }
    return preds_;
  }

  /// Backpropagates per-sample output gradients `coef` (one per batch slot)
  /// and accumulates parameter gradients into `grad` in fixed index order.
  void backward(const MlpParams& params, std::span<const double> coef,
                MlpParams& grad) {
    const std::size_t n_layers = params.layers.size();
    const std::size_t batch = coef.size();
    for (std::size_t s = 0; s < batch; ++s) {
      delta_.assign(1, coef[s]);
      for (std::size_t l = n_layers; l-- > 0;) {
        const Layer& layer = params.layers[l];
        Layer& g = grad.layers[l];
        const double* a_prev = act_[l].data() + s * layer.in;
        prev_delta_.assign(layer.in, 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
          const double d = delta_[o];
          if (d == 0.0) {
            continue;
          }
          g.bias[o] += d;
          double* grow = g.weights.data() + o * layer.in;
          const double* wrow = layer.weights.data() + o * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) {
            grow[i] += d * a_prev[i];
            prev_delta_[i] += wrow[i] * d;
          }
        }
        if (l > 0) {
          // ReLU mask: a zero activation means the unit was off (or exactly
          // at the kink, where the subgradient 0 is used).
          const double* a = act_[l].data() + s * params.layers[l - 1].out;
          delta_.assign(params.layers[l - 1].out, 0.0);
          for (std::size_t i = 0; i < params.layers[l - 1].out; ++i) {
            delta_[i] = (a[i] > 0.0) ? prev_delta_[i] : 0.0;
          }
        }
      }
    }
  }

 private:
  std::vector<std::vector<double>> act_;
  std::vector<double> preds_;
  std::vector<double> delta_;
  std::vector<double> prev_delta_;
};

/// Mean weighted L1 loss over a batch and its exact subgradient with respect
/// to every parameter (d|r|/dr = sign(r), sign(0) = 0). `grad` must be
/// shaped like `params`; it is overwritten. Returns the loss.
inline double weighted_l1_gradient(const MlpParams& params,
                                   const std::vector<std::vector<double>>& rows,
                                   std::span<const double> labels,
                                   const WeightVector& weights,
                                   MlpParams& grad) {
  if (rows.size() != labels.size() || rows.size() != weights.size()) {
    throw std::invalid_argument("weighted_l1_gradient: length mismatch");
  }
  if (rows.empty()) {
    throw std::invalid_argument("weighted_l1_gradient: empty batch");
  }
  std::vector<std::size_t> idx(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    idx[i] = i;
  }
  Backprop bp;
  const auto preds = bp.forward(params, rows, idx);

  const auto n = static_cast<double>(rows.size());
  std::vector<double> coef(rows.size());
  double loss = 0.0;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const double r = preds[s] - labels[s];
    loss += weights.values[s] * std::abs(r);
    const double sign = (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    coef[s] = weights.values[s] * sign / n;
  }
  grad.set_zero();
  bp.backward(params, coef, grad);
  return loss / n;
}

/// Adam optimizer state (beta1 0.9, beta2 0.999, eps 1e-8). Updates are
/// applied in a fixed parameter order, so training is bit-reproducible.
class AdamState {
 public:
  explicit AdamState(const MlpParams& shape)
      : m_(shape.zero_like()), v_(shape.zero_like()) {}

  void step(MlpParams& params, const MlpParams& grad, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      update_span(params.layers[l].weights, grad.layers[l].weights,
                  m_.layers[l].weights, v_.layers[l].weights, lr, bc1, bc2);
      update_span(params.layers[l].bias, grad.layers[l].bias,
                  m_.layers[l].bias, v_.layers[l].bias, lr, bc1, bc2);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  static void update_span(std::vector<double>& p, const std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v,
                          double lr, double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
    }
  }

  MlpParams m_;
  MlpParams v_;
  std::uint64_t t_ = 0;
};

/// Per-dimension affine feature normalization fitted on the training split.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> inv_sd;

  static Standardizer fit(const Dataset& data) {
    if (data.empty()) {
      throw std::invalid_argument("Standardizer::fit: empty dataset");
    }
    const std::size_t dim = data.dim();
    const auto n = static_cast<double>(data.size());
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.inv_sd.assign(dim, 1.0);
    for (const Sample& sample : data.samples()) {
      for (std::size_t j = 0; j < dim; ++j) {
        s.mean[j] += sample.features[j];
      }
    }
    for (std::size_t j = 0; j < dim; ++j) {
      s.mean[j] /= n;
    }
    std::vector<double> var(dim, 0.0);
    for (const Sample& sample : data.samples()) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = sample.features[j] - s.mean[j];
        var[j] += d * d;
      }
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const double sd = std::sqrt(var[j] / n);
      s.inv_sd[j] = (sd > 1e-12) ? 1.0 / sd : 1.0;  // constant feature
    }
    return s;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean.size()) {
      throw std::invalid_argument("Standardizer: feature length mismatch");
    }
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      out[j] = (x[j] - mean[j]) * inv_sd[j];
    }
    return out;
  }
};

}  // namespace skewreg
