#include "kd/losses/losses.hpp"

#include "kd/core/rng.hpp"

namespace kd::losses {

std::vector<double> projection_matrix(std::uint64_t seed, int from_ch, int to_ch) {
  Rng rng(mix64(seed ^ mix64(static_cast<std::uint64_t>(from_ch) * 65537u +
                             static_cast<std::uint64_t>(to_ch))));
  std::vector<double> m(static_cast<std::size_t>(to_ch) * from_ch);
  const double scale = 1.0 / std::sqrt(static_cast<double>(from_ch));
  for (auto& v : m) v = rng.normal() * scale;
  return m;
}

namespace {

std::span<const float> span_of(const std::vector<float>& v) {
  return {v.data(), v.size()};
}

LossValue bce_impl(std::span<const float> t, const PredictionVector& pred, bool hard) {
  LossValue lv;
  const double v = bce_sum(t, span_of(pred.probabilities));
  (hard ? lv.hard_bce : lv.soft_bce) = v;
  lv.total = v;
  return lv;
}

}  // namespace

LossValue bce_multilabel(const LabelVector& targets, const PredictionVector& pred) {
  return bce_impl(span_of(targets.values), pred, /*hard=*/true);
}

LossValue bce_multilabel(const SoftLabelVector& targets, const PredictionVector& pred) {
  return bce_impl(span_of(targets.values), pred, /*hard=*/false);
}

SoftLabelVector temperature_soften(const std::vector<float>& logits, float temperature,
                                   SoftLabelMode mode) {
  std::vector<float> out(logits.size());
  soften(span_of(logits), static_cast<double>(temperature), mode,
         std::span<float>(out));
  return SoftLabelVector(std::move(out), temperature, mode);
}

double kl_feature_divergence(const FeatureMap& ref, const FeatureMap& learner,
                             const CompositeOptions& opt) {
  AlignedMaps<float> a = align_feature_maps(
      ref.tensor.data(), ref.channels(), ref.height(), ref.width(),
      learner.tensor.data(), learner.channels(), learner.height(),
      learner.width(), opt.align_hw, opt.projection_seed);
  return kl_aligned(std::span<const float>(a.ref), std::span<const float>(a.learner));
}

double wasserstein_feature_distance(const FeatureMap& ref, const FeatureMap& learner,
                                    int p, const CompositeOptions& opt) {
  AlignedMaps<float> a = align_feature_maps(
      ref.tensor.data(), ref.channels(), ref.height(), ref.width(),
      learner.tensor.data(), learner.channels(), learner.height(),
      learner.width(), opt.align_hw, opt.projection_seed);
  return wasserstein_aligned(std::span<const float>(a.ref),
                             std::span<const float>(a.learner), a.channels,
                             a.spatial, p);
}

namespace {

LossValue composite_public(const LabelVector& hard, const SoftLabelVector& soft,
                           const PredictionVector& pred, const FeatureMap& f_ref,
                           const FeatureMap& f_learner, double lambda,
                           FeatureTerm term, int wp, const CompositeOptions& opt,
                           LossGrads* grads) {
  CompositeGrads<float> kg;
  LossValue lv = composite_loss<float>(
      span_of(hard.values), span_of(soft.values),
      static_cast<double>(soft.temperature), soft.mode, span_of(pred.logits),
      pred.mode, {}, f_ref.tensor.data(), f_ref.channels(), f_ref.height(),
      f_ref.width(), f_learner.tensor.data(), f_learner.channels(),
      f_learner.height(), f_learner.width(), lambda, term, wp, opt,
      grads ? &kg : nullptr);
  if (grads) {
    grads->wrt_logits = std::move(kg.wrt_logits);
    grads->wrt_learner_map = Tensor({f_learner.channels(), f_learner.height(),
                                     f_learner.width()});
    std::copy(kg.wrt_learner_map.begin(), kg.wrt_learner_map.end(),
              grads->wrt_learner_map.data());
  }
  return lv;
}

}  // namespace

LossValue assistant_loss(const LabelVector& hard, const SoftLabelVector& teacher_soft,
                         const PredictionVector& pred, const FeatureMap& f_teacher,
                         const FeatureMap& f_assistant, double lambda1,
                         const CompositeOptions& opt, LossGrads* grads) {
  return composite_public(hard, teacher_soft, pred, f_teacher, f_assistant,
                          lambda1, FeatureTerm::kl, 2, opt, grads);
}

LossValue student_loss(const LabelVector& hard, const SoftLabelVector& assistant_soft,
                       const PredictionVector& pred, const FeatureMap& f_assistant,
                       const FeatureMap& f_student, double lambda2, int wasserstein_p,
                       const CompositeOptions& opt, LossGrads* grads) {
  return composite_public(hard, assistant_soft, pred, f_assistant, f_student,
                          lambda2, FeatureTerm::wasserstein, wasserstein_p, opt,
                          grads);
}

}  // namespace kd::losses
