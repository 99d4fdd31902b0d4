#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "proxibound/codebook.hpp"

namespace proxibound {

// Rectangular table of category indices over the observed variables of a
// codebook, stored row-major. CSV form: header of variable names in codebook
// order, then one 0-based integer index per column per record.
class Dataset {
 public:
  Dataset(Codebook observed_cb, std::vector<int32_t> rows);

  static Dataset from_csv(std::istream& in, const Codebook& observed_cb);
  void to_csv(std::ostream& out) const;

  const Codebook& codebook() const { return cb_; }
  std::size_t n() const { return n_; }
  int n_cols() const { return cols_; }
  std::span<const int32_t> record(std::size_t i) const {
    return {rows_.data() + i * static_cast<std::size_t>(cols_), static_cast<std::size_t>(cols_)};
  }

 private:
  Codebook cb_;
  int cols_ = 0;
  std::size_t n_ = 0;
  std::vector<int32_t> rows_;
};

}  // namespace proxibound
