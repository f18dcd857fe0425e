#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace kd {

// Dense row-major float tensor. Network activations and parameters are
// 32-bit; loss accumulation happens in double on top of these values.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);

  static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return data_.size(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  // 4D (n, c, h, w) accessors for activation batches.
  float& at4(int n, int c, int h, int w) {
    return data_[idx4(n, c, h, w)];
  }
  float at4(int n, int c, int h, int w) const {
    return data_[idx4(n, c, h, w)];
  }
  std::size_t idx4(int n, int c, int h, int w) const {
    return ((static_cast<std::size_t>(n) * shape_[1] + c) * shape_[2] + h) *
               shape_[3] +
           w;
  }

  void fill(float v);
  bool all_finite() const;
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  // Element count of one sample, i.e. size / shape[0].
  std::size_t sample_size() const;

 private:
  std::vector<int> shape_;
  std::vector<float> data_;
};

}  // namespace kd
