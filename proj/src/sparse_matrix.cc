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


#include "efgfom/sparse_matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "efgfom/error.h"

namespace efgfom {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0) {
    throw Error(ErrorKind::kInvalidParameter, "negative matrix dimension");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Triplet& t = entries_[k];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw Error(ErrorKind::kInvalidParameter,
                  "matrix entry (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ") out of range");
    }
    if (k > 0 && entries_[k - 1].row == t.row && entries_[k - 1].col == t.col) {
      throw Error(ErrorKind::kInvalidParameter,
                  "duplicate matrix entry (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ")");
    }
  }

  row_start_.assign(rows_ + 1, 0);
  for (const Triplet& t : entries_) ++row_start_[t.row + 1];
  for (int r = 0; r < rows_; ++r) row_start_[r + 1] += row_start_[r];

  col_start_.assign(cols_ + 1, 0);
  for (const Triplet& t : entries_) ++col_start_[t.col + 1];
  for (int c = 0; c < cols_; ++c) col_start_[c + 1] += col_start_[c];
  col_rows_.resize(entries_.size());
  col_values_.resize(entries_.size());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (const Triplet& t : entries_) {
    const int slot = fill[t.col]++;
    col_rows_[slot] = t.row;
    col_values_[slot] = t.value;
  }
}

double SparseMatrix::MaxAbs() const {
  double m = 0.0;
  for (const Triplet& t : entries_) m = std::max(m, std::abs(t.value));
  return m;
}

void SparseMatrix::Multiply(std::span<const double> y,
                            std::span<double> out) const {
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      acc += entries_[k].value * y[entries_[k].col];
    }
    out[r] = acc;
  }
}

void SparseMatrix::MultiplyTransposed(std::span<const double> x,
                                      std::span<double> out) const {
  for (int c = 0; c < cols_; ++c) {
    double acc = 0.0;
    for (int k = col_start_[c]; k < col_start_[c + 1]; ++k) {
      acc += col_values_[k] * x[col_rows_[k]];
    }
    out[c] = acc;
  }
}

double SparseMatrix::Bilinear(std::span<const double> x,
                              std::span<const double> y) const {
  double acc = 0.0;
  for (const Triplet& t : entries_) acc += x[t.row] * t.value * y[t.col];
  return acc;
}

}  // namespace efgfom
