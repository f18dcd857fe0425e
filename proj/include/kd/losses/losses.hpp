#pragma once

// Training objectives: multi-label BCE, temperature softening, the KL and
// Wasserstein feature-matching terms, and the assistant/student composites.
// The scalar math lives in kernels.hpp; this is the float-typed surface used
// by the training stack.

#include <vector>

#include "kd/core/tensor.hpp"
#include "kd/core/types.hpp"
#include "kd/losses/kernels.hpp"
#include "kd/losses/loss_value.hpp"

namespace kd::losses {

// Gradients of a composite objective for one sample.
struct LossGrads {
  std::vector<float> wrt_logits;
  Tensor wrt_learner_map;  // same shape as the learner feature map
};

// Eq.-style per-class BCE, summed over classes. The hard overload reports
// the value under hard_bce, the soft overload under soft_bce.
LossValue bce_multilabel(const LabelVector& targets, const PredictionVector& pred);
LossValue bce_multilabel(const SoftLabelVector& targets, const PredictionVector& pred);

// Temperature-regulated softening of logits.
SoftLabelVector temperature_soften(const std::vector<float>& logits, float temperature,
                                   SoftLabelMode mode);

// KL divergence between the softmax distributions of the two maps after
// alignment. The reference map is treated as a constant.
double kl_feature_divergence(const FeatureMap& ref, const FeatureMap& learner,
                             const CompositeOptions& opt = {});

// Mean per-channel 1D Wasserstein-p distance after alignment.
double wasserstein_feature_distance(const FeatureMap& ref, const FeatureMap& learner,
                                    int p, const CompositeOptions& opt = {});

// total = BCE(hard, pred) + lambda1 * KL(f_ref, f_learner) + BCE(soft, pred)
LossValue assistant_loss(const LabelVector& hard, const SoftLabelVector& teacher_soft,
                         const PredictionVector& pred, const FeatureMap& f_teacher,
                         const FeatureMap& f_assistant, double lambda1,
                         const CompositeOptions& opt = {}, LossGrads* grads = nullptr);

// total = BCE(hard, pred) + lambda2 * W_p(f_ref, f_learner) + BCE(soft, pred)
LossValue student_loss(const LabelVector& hard, const SoftLabelVector& assistant_soft,
                       const PredictionVector& pred, const FeatureMap& f_assistant,
                       const FeatureMap& f_student, double lambda2, int wasserstein_p,
                       const CompositeOptions& opt = {}, LossGrads* grads = nullptr);

}  // namespace kd::losses
