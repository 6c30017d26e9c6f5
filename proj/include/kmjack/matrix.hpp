#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kmjack {

// Minimal dense row-major matrix, just enough for covariate blocks.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative size");
  }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  std::vector<double> row(int r) const {
    std::vector<double> out(cols_);
    for (int c = 0; c < cols_; ++c) out[c] = (*this)(r, c);
    return out;
  }

  const std::vector<double>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

}  // namespace kmjack
