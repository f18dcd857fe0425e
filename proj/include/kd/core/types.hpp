#pragma once

#include <string>
#include <vector>

#include "kd/core/tensor.hpp"

namespace kd {

enum class Role { teacher, assistant, student };
enum class SoftLabelMode { sigmoid, softmax };
enum class LabelPolicy { u_zeros, u_ones, u_ignore };
enum class SamplingMode { none, undersample_majority, oversample_minority, both };
enum class FeatureReference { assistant, teacher };

const char* to_string(Role r);
const char* to_string(SoftLabelMode m);
const char* to_string(LabelPolicy p);
const char* to_string(SamplingMode m);
const char* to_string(FeatureReference f);

// Probabilities are clamped into [kProbEps, 1 - kProbEps] before any
// logarithm; BCE is undefined at exactly 0 or 1.
inline constexpr double kProbEps = 1e-7;

// Per-sample hard {0,1} targets, one entry per class.
struct LabelVector {
  std::vector<float> values;

  LabelVector() = default;
  explicit LabelVector(std::vector<float> v);

  std::size_t size() const { return values.size(); }
};

// Temperature-softened per-class targets in [0,1]. In softmax mode the
// entries sum to 1; in sigmoid mode each entry is an independent confidence.
struct SoftLabelVector {
  std::vector<float> values;
  float temperature = 1.0f;
  SoftLabelMode mode = SoftLabelMode::sigmoid;

  SoftLabelVector() = default;
  SoftLabelVector(std::vector<float> v, float temperature, SoftLabelMode mode);

  std::size_t size() const { return values.size(); }
};

// One activation tensor (channels, height, width) tapped at a named layer.
struct FeatureMap {
  Tensor tensor;  // shape (c, h, w)
  std::string tap_name;
  Role producer_role = Role::student;

  FeatureMap() = default;
  FeatureMap(Tensor t, std::string tap, Role producer);

  int channels() const { return tensor.dim(0); }
  int height() const { return tensor.dim(1); }
  int width() const { return tensor.dim(2); }
};

// Model output for one sample: raw logits plus probabilities derived from
// them under the configured activation mode, clamped away from {0,1}.
struct PredictionVector {
  std::vector<float> logits;
  std::vector<float> probabilities;
  SoftLabelMode mode = SoftLabelMode::sigmoid;

  PredictionVector() = default;
  PredictionVector(std::vector<float> logits, SoftLabelMode mode);

  std::size_t size() const { return logits.size(); }
};

// Clamps every probability into [1e-7, 1 - 1e-7]; interior values pass
// through unchanged. NaN input signals a corrupted upstream computation.
PredictionVector clamp_probabilities(PredictionVector p);

}  // namespace kd
