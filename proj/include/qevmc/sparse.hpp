// Copyright 2026 The QEVMC Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEVMC_SPARSE_HPP
#define QEVMC_SPARSE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qevmc {

/**
 * Real sparse matrix in CSR layout. Rows are kept sorted by column with no
 * duplicates and no explicit zeros.
 */
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim) : dim_(dim), row_ptr_(dim + 1, 0) {}

  /// Builder: collect triplets, then call finalize() exactly once.
  void add(std::size_t row, std::size_t col, double value) {
    triplets_.push_back({row, col, value});
  }

  void finalize() {
    std::sort(triplets_.begin(), triplets_.end(),
              [](const Triplet &a, const Triplet &b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    row_ptr_.assign(dim_ + 1, 0);
    cols_.clear();
    vals_.clear();
    for (std::size_t t = 0; t < triplets_.size();) {
      std::size_t u = t;
      double sum = 0.0;
      while (u < triplets_.size() && triplets_[u].row == triplets_[t].row &&
             triplets_[u].col == triplets_[t].col)
        sum += triplets_[u++].value;
      if (sum != 0.0) {
        cols_.push_back(triplets_[t].col);
        vals_.push_back(sum);
        ++row_ptr_[triplets_[t].row + 1];
      }
      t = u;
    }
    for (std::size_t r = 0; r < dim_; ++r) row_ptr_[r + 1] += row_ptr_[r];
    triplets_.clear();
    triplets_.shrink_to_fit();
  }

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return vals_.size(); }

  template <typename Scalar>
  void apply(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &x,
             Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &y) const {
    if (static_cast<std::size_t>(x.size()) != dim_)
      throw std::invalid_argument("SparseOperator::apply: dim mismatch");
    y.resize(x.size());
    for (std::size_t r = 0; r < dim_; ++r) {
      Scalar acc{};
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        acc += vals_[k] * x[cols_[k]];
      y[r] = acc;
    }
  }

  template <typename Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> operator*(
      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &x) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> y;
    apply(x, y);
    return y;
  }

  /// Left action nu^T M for row-stochastic evolution of distributions.
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd &nu) const {
    if (static_cast<std::size_t>(nu.size()) != dim_)
      throw std::invalid_argument("apply_transpose: dim mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nu.size());
    for (std::size_t r = 0; r < dim_; ++r) {
      double w = nu[r];
      if (w == 0.0) continue;
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        out[cols_[k]] += w * vals_[k];
    }
    return out;
  }

  double entry(std::size_t row, std::size_t col) const {
    for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
      if (cols_[k] == col) return vals_[k];
    return 0.0;
  }

  bool is_diagonal() const {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        if (cols_[k] != r) return false;
    return true;
  }

  Eigen::VectorXd diagonal() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim_);
    for (std::size_t r = 0; r < dim_; ++r) d[r] = entry(r, r);
    return d;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        m(r, cols_[k]) = vals_[k];
    return m;
  }

  /// Row access for analysis code.
  struct RowView {
    const std::size_t *cols;
    const double *vals;
    std::size_t size;
  };
  RowView row(std::size_t r) const {
    return {cols_.data() + row_ptr_[r], vals_.data() + row_ptr_[r],
            row_ptr_[r + 1] - row_ptr_[r]};
  }

 private:
  struct Triplet {
    std::size_t row, col;
    double value;
  };
  std::size_t dim_ = 0;
  std::vector<Triplet> triplets_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

}  // namespace qevmc

#endif  // QEVMC_SPARSE_HPP
