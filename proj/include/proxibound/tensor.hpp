#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace proxibound {

// Dense row-major array over small categorical axes. All probability tables in
// this library are Tensors; axis meaning lives in the surrounding Codebook.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> dims, double fill = 0.0);

  int rank() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return v_.size(); }

  double& operator[](std::size_t flat) { return v_[flat]; }
  double operator[](std::size_t flat) const { return v_[flat]; }
  double& at(std::span<const int> idx) { return v_[ravel(idx)]; }
  double at(std::span<const int> idx) const { return v_[ravel(idx)]; }
  double& at(std::initializer_list<int> idx) {
    return v_[ravel(std::span<const int>(idx.begin(), idx.size()))];
  }
  double at(std::initializer_list<int> idx) const {
    return v_[ravel(std::span<const int>(idx.begin(), idx.size()))];
  }

  std::size_t ravel(std::span<const int> idx) const;
  void unravel(std::size_t flat, std::span<int> idx) const;

  double sum() const;
  void scale(double s);

  // Sums out every axis not listed; keep_axes must be strictly increasing so
  // the result keeps the original axis order.
  Tensor marginal(std::span<const int> keep_axes) const;

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<double> v_;
};

}  // namespace proxibound
