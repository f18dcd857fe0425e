#include "kd/core/types.hpp"

#include <algorithm>
#include <cmath>

#include "kd/core/error.hpp"

namespace kd {

const char* to_string(Role r) {
  switch (r) {
    case Role::teacher: return "teacher";
    case Role::assistant: return "assistant";
    case Role::student: return "student";
  }
  return "?";
}

const char* to_string(SoftLabelMode m) {
  return m == SoftLabelMode::sigmoid ? "sigmoid" : "softmax";
}

const char* to_string(LabelPolicy p) {
  switch (p) {
    case LabelPolicy::u_zeros: return "u_zeros";
    case LabelPolicy::u_ones: return "u_ones";
    case LabelPolicy::u_ignore: return "u_ignore";
  }
  return "?";
}

const char* to_string(SamplingMode m) {
  switch (m) {
    case SamplingMode::none: return "none";
    case SamplingMode::undersample_majority: return "undersample_majority";
    case SamplingMode::oversample_minority: return "oversample_minority";
    case SamplingMode::both: return "both";
  }
  return "?";
}

const char* to_string(FeatureReference f) {
  return f == FeatureReference::assistant ? "assistant" : "teacher";
}

namespace {

void check_finite(const std::vector<float>& v, const char* what) {
  for (float x : v) {
    if (!std::isfinite(x))
      fail(ErrorCategory::dimension,
           std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

LabelVector::LabelVector(std::vector<float> v) : values(std::move(v)) {
  for (float x : values) {
    if (x != 0.0f && x != 1.0f)
      fail(ErrorCategory::dimension, "hard label must be exactly 0 or 1");
  }
}

SoftLabelVector::SoftLabelVector(std::vector<float> v, float temperature,
                                 SoftLabelMode mode)
    : values(std::move(v)), temperature(temperature), mode(mode) {
  if (!(temperature > 0.0f))
    fail(ErrorCategory::config, "soft-label temperature must be > 0");
  check_finite(values, "soft labels");
  double sum = 0.0;
  for (float x : values) {
    if (x < 0.0f || x > 1.0f)
      fail(ErrorCategory::dimension, "soft label outside [0, 1]");
    sum += x;
  }
  if (mode == SoftLabelMode::softmax && !values.empty() &&
      std::abs(sum - 1.0) > 1e-6)
    fail(ErrorCategory::dimension, "softmax-mode soft labels must sum to 1");
}

FeatureMap::FeatureMap(Tensor t, std::string tap, Role producer)
    : tensor(std::move(t)), tap_name(std::move(tap)), producer_role(producer) {
  if (tensor.ndim() != 3)
    fail(ErrorCategory::dimension, "feature map must be (channels, h, w)");
  if (!tensor.all_finite())
    fail(ErrorCategory::dimension,
         "feature map '" + tap_name + "' contains NaN/Inf");
}

PredictionVector::PredictionVector(std::vector<float> z, SoftLabelMode m)
    : logits(std::move(z)), mode(m) {
  check_finite(logits, "logits");
  probabilities.resize(logits.size());
  if (mode == SoftLabelMode::softmax) {
    float zmax = logits.empty() ? 0.0f : *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (float z_i : logits) denom += std::exp(static_cast<double>(z_i - zmax));
    for (std::size_t i = 0; i < logits.size(); ++i)
      probabilities[i] = static_cast<float>(
          std::exp(static_cast<double>(logits[i] - zmax)) / denom);
  } else {
    for (std::size_t i = 0; i < logits.size(); ++i)
      probabilities[i] =
          static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(logits[i]))));
  }
  for (auto& p : probabilities)
    p = std::clamp(p, static_cast<float>(kProbEps),
                   static_cast<float>(1.0 - kProbEps));
}

PredictionVector clamp_probabilities(PredictionVector p) {
  for (auto& v : p.probabilities) {
    if (std::isnan(v))
      fail(ErrorCategory::dimension,
           "NaN probability: corrupted upstream computation");
    v = std::clamp(v, static_cast<float>(kProbEps),
                   static_cast<float>(1.0 - kProbEps));
  }
  return p;
}

}  // namespace kd
