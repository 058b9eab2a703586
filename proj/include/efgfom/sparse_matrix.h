// Copyright 2026 The efgfom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef EFGFOM_SPARSE_MATRIX_H_
#define EFGFOM_SPARSE_MATRIX_H_

#include <span>
#include <vector>

namespace efgfom {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const Triplet&) const = default;
};

// Immutable sparse matrix with row-major and column-major copies so both A*y
// and A^T*x are streaming passes. Each output entry is reduced in a fixed
// order, so products are bit-reproducible.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Throws InvalidParameter on out-of-range or duplicate (row, col) pairs.
  SparseMatrix(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }

  // Entries sorted by (row, col).
  const std::vector<Triplet>& entries() const { return entries_; }

  double MaxAbs() const;

  // out = A * y
  void Multiply(std::span<const double> y, std::span<double> out) const;
  // out = A^T * x
  void MultiplyTransposed(std::span<const double> x,
                          std::span<double> out) const;

  // x^T A y
  double Bilinear(std::span<const double> x, std::span<const double> y) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Triplet> entries_;
  std::vector<int> row_start_;
  std::vector<int> col_start_;
  std::vector<int> col_rows_;
  std::vector<double> col_values_;
};

}  // namespace efgfom

#endif  // EFGFOM_SPARSE_MATRIX_H_
