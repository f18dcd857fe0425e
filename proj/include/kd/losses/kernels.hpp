#pragma once

// Scalar loss kernels, templated on the accumulation element type.
// Training instantiates these with float (matching tensor storage); the
// oracle and finite-difference suites instantiate with double so the checks
// are not limited by float rounding. All reductions accumulate in double
// regardless of the element type.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "kd/core/error.hpp"
#include "kd/core/types.hpp"
#include "kd/losses/loss_value.hpp"

namespace kd::losses {

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    fail(ErrorCategory::dimension,
         std::string(what) + ": length mismatch (" + std::to_string(a) +
             " vs " + std::to_string(b) + ")");
}

inline double clamp_prob(double p) {
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

// sum_i [-y_i log p_i - (1-y_i) log(1-p_i)], probabilities clamped before the
// logarithms. mask may be empty (all classes counted) or 0/1 per class.
template <typename S>
double bce_sum(std::span<const S> targets, std::span<const S> probs,
               std::span<const S> mask = {}) {
  require_same_length(targets.size(), probs.size(), "bce");
  if (!mask.empty()) require_same_length(mask.size(), probs.size(), "bce mask");
  double acc = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!mask.empty() && mask[i] == S(0)) continue;
    const double y = static_cast<double>(targets[i]);
    const double p = clamp_prob(static_cast<double>(probs[i]));
    acc += -y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
  }
  return acc;
}

// Temperature-regulated activation. softmax mode: exp(z_i/T) / sum_j
// exp(z_j/T) with max subtraction; sigmoid mode: sigma(z_i/T) per class.
template <typename S>
void soften(std::span<const S> logits, double temperature, SoftLabelMode mode,
            std::span<S> out) {
  require_same_length(logits.size(), out.size(), "soften");
  if (!(temperature > 0.0))
    fail(ErrorCategory::config, "temperature must be > 0");
  if (mode == SoftLabelMode::softmax) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (auto z : logits) zmax = std::max(zmax, static_cast<double>(z) / temperature);
    double denom = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i)
      denom += std::exp(static_cast<double>(logits[i]) / temperature - zmax);
    for (std::size_t i = 0; i < logits.size(); ++i)
      out[i] = static_cast<S>(
          std::exp(static_cast<double>(logits[i]) / temperature - zmax) / denom);
  } else {
    for (std::size_t i = 0; i < logits.size(); ++i)
      out[i] = static_cast<S>(
          1.0 / (1.0 + std::exp(-static_cast<double>(logits[i]) / temperature)));
  }
}

// Vector-Jacobian product of soften: grad_logits = J^T upstream.
template <typename S>
void soften_vjp(std::span<const S> logits, double temperature,
                SoftLabelMode mode, std::span<const S> upstream,
                std::span<S> grad_logits) {
  require_same_length(logits.size(), upstream.size(), "soften_vjp");
  std::vector<S> s(logits.size());
  soften(logits, temperature, mode, std::span<S>(s));
  if (mode == SoftLabelMode::softmax) {
    double dot = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      dot += static_cast<double>(upstream[i]) * static_cast<double>(s[i]);
    for (std::size_t k = 0; k < s.size(); ++k)
      grad_logits[k] = static_cast<S>(static_cast<double>(s[k]) *
                                      (static_cast<double>(upstream[k]) - dot) /
                                      temperature);
  } else {
    for (std::size_t k = 0; k < s.size(); ++k) {
      const double sk = static_cast<double>(s[k]);
      grad_logits[k] = static_cast<S>(static_cast<double>(upstream[k]) * sk *
                                      (1.0 - sk) / temperature);
    }
  }
}

// d/dlogits of bce_sum(targets, act(logits / temperature)). The clamped
// region contributes zero gradient, matching the clamped loss.
template <typename S>
void bce_grad_logits(std::span<const S> targets, std::span<const S> logits,
                     SoftLabelMode mode, double temperature,
                     std::span<const S> mask, std::span<S> grad_out) {
  require_same_length(targets.size(), logits.size(), "bce_grad");
  std::vector<S> p(logits.size());
  soften(logits, temperature, mode, std::span<S>(p));
  if (mode == SoftLabelMode::sigmoid) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double pi = static_cast<double>(p[i]);
      const bool masked = !mask.empty() && mask[i] == S(0);
      const bool clamped = pi <= kProbEps || pi >= 1.0 - kProbEps;
      grad_out[i] = (masked || clamped)
                        ? S(0)
                        : static_cast<S>((pi - static_cast<double>(targets[i])) /
                                         temperature);
    }
  } else {
    // dL/dp_i through the softmax Jacobian: dL/dz_k = (1/T) p_k (g_k - <g, p>)
    std::vector<double> gp(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double pi = static_cast<double>(p[i]);
      const bool masked = !mask.empty() && mask[i] == S(0);
      const bool clamped = pi <= kProbEps || pi >= 1.0 - kProbEps;
      if (!masked && !clamped)
        gp[i] = (pi - static_cast<double>(targets[i])) / (pi * (1.0 - pi));
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      dot += gp[i] * static_cast<double>(p[i]);
    for (std::size_t k = 0; k < p.size(); ++k)
      grad_out[k] = static_cast<S>(static_cast<double>(p[k]) * (gp[k] - dot) /
                                   temperature);
  }
}

// D_KL(P || Q) over explicit distributions; terms with p_i = 0 contribute 0.
template <typename S>
double kl_of_distributions(std::span<const S> p, std::span<const S> q) {
  require_same_length(p.size(), q.size(), "kl");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = static_cast<double>(p[i]);
    if (pi <= 0.0) continue;
    acc += pi * (std::log(pi) - std::log(static_cast<double>(q[i])));
  }
  return acc;
}

// KL between softmax distributions of two flattened aligned maps. Gradient
// (optional) is with respect to the learner's raw aligned values; the
// reference is a constant. dKL/db_k = q_k - p_k.
template <typename S>
double kl_aligned(std::span<const S> ref_raw, std::span<const S> learner_raw,
                  std::span<S> grad_learner = {}) {
  require_same_length(ref_raw.size(), learner_raw.size(), "kl_aligned");
  std::vector<S> p(ref_raw.size()), q(ref_raw.size());
  soften(ref_raw, 1.0, SoftLabelMode::softmax, std::span<S>(p));
  soften(learner_raw, 1.0, SoftLabelMode::softmax, std::span<S>(q));
  if (!grad_learner.empty()) {
    for (std::size_t k = 0; k < q.size(); ++k)
      grad_learner[k] = static_cast<S>(static_cast<double>(q[k]) -
                                       static_cast<double>(p[k]));
  }
  return kl_of_distributions(std::span<const S>(p), std::span<const S>(q));
}

// Ranks of values with ties broken by index, i.e. a stable argsort.
template <typename S>
std::vector<int> stable_argsort(std::span<const S> v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  return idx;
}

// One-dimensional Wasserstein-p between equal-size samples a and b:
// (mean_k |a_(k) - b_(k)|^p)^(1/p) over sorted values. For equal-size 1D
// empirical distributions this is the exact optimal-transport distance.
// Optional gradient with respect to b (subgradient 0 at kinks).
template <typename S>
double wasserstein_1d(std::span<const S> a, std::span<const S> b, int p,
                      std::span<S> grad_b = {}) {
  require_same_length(a.size(), b.size(), "wasserstein");
  if (p < 1) fail(ErrorCategory::config, "wasserstein order p must be >= 1");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  const std::vector<int> ia = stable_argsort(a);
  const std::vector<int> ib = stable_argsort(b);
  double mean_pow = 0.0;
  std::vector<double> diffs(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = static_cast<double>(b[ib[k]]) - static_cast<double>(a[ia[k]]);
    diffs[k] = d;
    mean_pow += std::pow(std::abs(d), p);
  }
  mean_pow /= static_cast<double>(n);
  const double w = std::pow(mean_pow, 1.0 / p);
  if (!grad_b.empty()) {
    std::fill(grad_b.begin(), grad_b.end(), S(0));
    if (w > 0.0) {
      // dW/db_j = W^(1-p) * |d_k|^(p-1) * sign(d_k) / n, k = rank of b_j
      const double scale = std::pow(w, 1.0 - p) / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        const double d = diffs[k];
        const double g =
            scale * std::pow(std::abs(d), p - 1) * (d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0));
        grad_b[ib[k]] = static_cast<S>(g);
      }
    }
  }
  return w;
}

// Mean over channels of the per-channel 1D Wasserstein-p distance between
// two aligned maps laid out as (channels, spatial).
template <typename S>
double wasserstein_aligned(std::span<const S> ref, std::span<const S> learner,
                           int channels, int spatial, int p,
                           std::span<S> grad_learner = {}) {
  require_same_length(ref.size(), learner.size(), "wasserstein_aligned");
  if (static_cast<std::size_t>(channels) * spatial != ref.size())
    fail(ErrorCategory::dimension, "wasserstein_aligned: bad channel/spatial split");
  double acc = 0.0;
  for (int c = 0; c < channels; ++c) {
    auto a = ref.subspan(static_cast<std::size_t>(c) * spatial, spatial);
    auto b = learner.subspan(static_cast<std::size_t>(c) * spatial, spatial);
    std::span<S> g;
    if (!grad_learner.empty())
      g = grad_learner.subspan(static_cast<std::size_t>(c) * spatial, spatial);
    acc += wasserstein_1d(a, b, p, g);
  }
  const double inv_c = 1.0 / static_cast<double>(channels);
  if (!grad_learner.empty())
    for (auto& g : grad_learner) g = static_cast<S>(static_cast<double>(g) * inv_c);
  return acc * inv_c;
}

// Adaptive average pooling of a (c, h, w) map to (c, oh, ow). Window k of an
// axis of extent n covers [floor(k*n/o), ceil((k+1)*n/o)); windows are never
// empty, also when o > n.
template <typename S>
void adaptive_avg_pool(const S* in, int c, int h, int w, int oh, int ow, S* out) {
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < oh; ++i) {
      const int h0 = (i * h) / oh;
      const int h1 = ((i + 1) * h + oh - 1) / oh;
      for (int j = 0; j < ow; ++j) {
        const int w0 = (j * w) / ow;
        const int w1 = ((j + 1) * w + ow - 1) / ow;
        double acc = 0.0;
        for (int y = h0; y < h1; ++y)
          for (int x = w0; x < w1; ++x)
            acc += static_cast<double>(in[(static_cast<std::size_t>(ch) * h + y) * w + x]);
        out[(static_cast<std::size_t>(ch) * oh + i) * ow + j] =
            static_cast<S>(acc / ((h1 - h0) * (w1 - w0)));
      }
    }
  }
}

template <typename S>
void adaptive_avg_pool_backward(const S* grad_out, int c, int h, int w, int oh,
                                int ow, S* grad_in) {
  std::fill(grad_in, grad_in + static_cast<std::size_t>(c) * h * w, S(0));
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < oh; ++i) {
      const int h0 = (i * h) / oh;
      const int h1 = ((i + 1) * h + oh - 1) / oh;
      for (int j = 0; j < ow; ++j) {
        const int w0 = (j * w) / ow;
        const int w1 = ((j + 1) * w + ow - 1) / ow;
        const double g =
            static_cast<double>(grad_out[(static_cast<std::size_t>(ch) * oh + i) * ow + j]) /
            ((h1 - h0) * (w1 - w0));
        for (int y = h0; y < h1; ++y)
          for (int x = w0; x < w1; ++x)
            grad_in[(static_cast<std::size_t>(ch) * h + y) * w + x] +=
                static_cast<S>(g);
      }
    }
  }
}

// Fixed random projection matrix (to_ch x from_ch), row-major, entries
// N(0, 1/from_ch), fully determined by (seed, from_ch, to_ch).
std::vector<double> projection_matrix(std::uint64_t seed, int from_ch, int to_ch);

// out[t, s] = sum_f M[t, f] * in[f, s]
template <typename S>
void project_channels(const S* in, int from_ch, int spatial, const double* m,
                      int to_ch, S* out) {
  for (int t = 0; t < to_ch; ++t) {
    for (int s = 0; s < spatial; ++s) {
      double acc = 0.0;
      for (int f = 0; f < from_ch; ++f)
        acc += m[static_cast<std::size_t>(t) * from_ch + f] *
               static_cast<double>(in[static_cast<std::size_t>(f) * spatial + s]);
      out[static_cast<std::size_t>(t) * spatial + s] = static_cast<S>(acc);
    }
  }
}

// Feature-map alignment: both maps are adaptively average-pooled to a common
// target_hw x target_hw grid; if the channel counts differ, the reference is
// additionally projected to the learner's channel count with a fixed seeded
// random matrix. The learner side is only pooled, so the gradient path back
// to the learner map is adaptive_avg_pool_backward.
template <typename S>
struct AlignedMaps {
  int channels = 0;
  int spatial = 0;  // target_hw * target_hw
  std::vector<S> ref;
  std::vector<S> learner;
};

template <typename S>
AlignedMaps<S> align_feature_maps(const S* ref, int rc, int rh, int rw,
                                  const S* learner, int lc, int lh, int lw,
                                  int target_hw, std::uint64_t projection_seed) {
  if (target_hw < 1) fail(ErrorCategory::config, "align: target size must be >= 1");
  AlignedMaps<S> out;
  out.channels = lc;
  out.spatial = target_hw * target_hw;
  out.learner.resize(static_cast<std::size_t>(lc) * out.spatial);
  adaptive_avg_pool(learner, lc, lh, lw, target_hw, target_hw, out.learner.data());
  std::vector<S> ref_pooled(static_cast<std::size_t>(rc) * out.spatial);
  adaptive_avg_pool(ref, rc, rh, rw, target_hw, target_hw, ref_pooled.data());
  if (rc == lc) {
    out.ref = std::move(ref_pooled);
  } else {
    out.ref.resize(static_cast<std::size_t>(lc) * out.spatial);
    const std::vector<double> m = projection_matrix(projection_seed, rc, lc);
    project_channels(ref_pooled.data(), rc, out.spatial, m.data(), lc,
                     out.ref.data());
  }
  return out;
}

struct CompositeOptions {
  int align_hw = 4;
  std::uint64_t projection_seed = 0;
  // Apply the soft-label temperature to the learner's logits inside the
  // soft-target BCE (standard distillation practice; the source is silent).
  bool scale_learner_logits = true;
};

enum class FeatureTerm { kl, wasserstein };

template <typename S>
struct CompositeGrads {
  std::vector<S> wrt_logits;       // length C
  std::vector<S> wrt_learner_map;  // learner raw layout (c*h*w)
};

// Shared body of the assistant (KL) and student (Wasserstein) objectives:
//   total = BCE(hard, act(z)) + lambda * featterm(f_ref, f_learner)
//         + BCE(soft, act(z / T_eff))
template <typename S>
LossValue composite_loss(std::span<const S> hard, std::span<const S> soft_targets,
                         double soft_temperature, SoftLabelMode soft_mode,
                         std::span<const S> logits, SoftLabelMode pred_mode,
                         std::span<const S> mask, const S* f_ref, int rc, int rh,
                         int rw, const S* f_learner, int lc, int lh, int lw,
                         double lambda, FeatureTerm term, int wasserstein_p,
                         const CompositeOptions& opt,
                         CompositeGrads<S>* grads = nullptr) {
  require_same_length(hard.size(), logits.size(), "composite hard targets");
  require_same_length(soft_targets.size(), logits.size(), "composite soft targets");
  if (lambda < 0.0) fail(ErrorCategory::config, "lambda must be >= 0");

  LossValue lv;
  std::vector<S> probs(logits.size());
  soften(logits, 1.0, pred_mode, std::span<S>(probs));
  lv.hard_bce = bce_sum(hard, std::span<const S>(probs), mask);

  const double t_eff = opt.scale_learner_logits ? soft_temperature : 1.0;
  std::vector<S> soft_probs(logits.size());
  soften(logits, t_eff, soft_mode, std::span<S>(soft_probs));
  lv.soft_bce = bce_sum(soft_targets, std::span<const S>(soft_probs));

  AlignedMaps<S> aligned = align_feature_maps(
      f_ref, rc, rh, rw, f_learner, lc, lh, lw, opt.align_hw, opt.projection_seed);
  std::vector<S> grad_aligned;
  std::span<S> grad_span;
  if (grads) {
    grad_aligned.assign(aligned.learner.size(), S(0));
    grad_span = std::span<S>(grad_aligned);
  }
  double feat = 0.0;
  if (term == FeatureTerm::kl) {
    feat = kl_aligned(std::span<const S>(aligned.ref),
                      std::span<const S>(aligned.learner), grad_span);
    lv.kl_term = lambda * feat;
  } else {
    feat = wasserstein_aligned(std::span<const S>(aligned.ref),
                               std::span<const S>(aligned.learner),
                               aligned.channels, aligned.spatial, wasserstein_p,
                               grad_span);
    lv.wasserstein_term = lambda * feat;
  }
  lv.total = lv.hard_bce + lv.soft_bce + lv.kl_term + lv.wasserstein_term;

  if (grads) {
    grads->wrt_logits.assign(logits.size(), S(0));
    std::vector<S> g(logits.size());
    bce_grad_logits(hard, logits, pred_mode, 1.0, mask, std::span<S>(g));
    for (std::size_t i = 0; i < g.size(); ++i) grads->wrt_logits[i] += g[i];
    bce_grad_logits(soft_targets, logits, soft_mode, t_eff, {}, std::span<S>(g));
    for (std::size_t i = 0; i < g.size(); ++i) grads->wrt_logits[i] += g[i];

    for (auto& v : grad_aligned) v = static_cast<S>(static_cast<double>(v) * lambda);
    grads->wrt_learner_map.assign(static_cast<std::size_t>(lc) * lh * lw, S(0));
    adaptive_avg_pool_backward(grad_aligned.data(), lc, lh, lw, opt.align_hw,
                               opt.align_hw, grads->wrt_learner_map.data());
  }
  return lv;
}

}  // namespace kd::losses
