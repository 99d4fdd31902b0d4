#include "proxibound/tensor.hpp"

#include <numeric>

#include "proxibound/errors.hpp"

namespace proxibound {

Tensor::Tensor(std::vector<int> dims, double fill) : dims_(std::move(dims)) {
  std::size_t n = 1;
  for (int d : dims_) {
    if (d <= 0) throw SchemaError("tensor axis cardinality must be positive");
    n *= static_cast<std::size_t>(d);
  }
  strides_.assign(dims_.size(), 1);
  for (int i = static_cast<int>(dims_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(dims_[i + 1]);
  v_.assign(n, fill);
}

std::size_t Tensor::ravel(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) flat += strides_[i] * static_cast<std::size_t>(idx[i]);
  return flat;
}

void Tensor::unravel(std::size_t flat, std::span<int> idx) const {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    idx[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
}

double Tensor::sum() const { return std::accumulate(v_.begin(), v_.end(), 0.0); }

void Tensor::scale(double s) {
  for (double& x : v_) x *= s;
}

Tensor Tensor::marginal(std::span<const int> keep_axes) const {
  std::vector<int> kept_dims;
  kept_dims.reserve(keep_axes.size());
  int prev = -1;
  for (int ax : keep_axes) {
    if (ax <= prev || ax >= rank()) throw SchemaError("marginal axes must be strictly increasing and in range");
    kept_dims.push_back(dims_[ax]);
    prev = ax;
  }
  Tensor out(kept_dims);
  std::vector<int> idx(dims_.size());
  std::vector<int> kidx(keep_axes.size());
  for (std::size_t flat = 0; flat < v_.size(); ++flat) {
    unravel(flat, idx);
    for (std::size_t i = 0; i < keep_axes.size(); ++i) kidx[i] = idx[keep_axes[i]];
    out.at(kidx) += v_[flat];
  }
  return out;
}

}  // namespace proxibound
