#include "kd/core/tensor.hpp"

#include <cmath>

#include "kd/core/error.hpp"

namespace kd {

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (int d : shape_) {
    if (d < 1) fail(ErrorCategory::dimension, "tensor dimensions must be >= 1");
    n *= static_cast<std::size_t>(d);
  }
  data_.assign(n, 0.0f);
}

void Tensor::fill(float v) {
  for (auto& x : data_) x = v;
}

bool Tensor::all_finite() const {
  for (float x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::size_t Tensor::sample_size() const {
  if (shape_.empty()) return 0;
  return data_.size() / static_cast<std::size_t>(shape_[0]);
}

}  // namespace kd
