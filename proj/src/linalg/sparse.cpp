// Copyright 2026 The Lumen Authors
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

#include "lumen/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <string>

#include "lumen/error.hpp"
#include "lumen/simd/kernels.hpp"

namespace lumen {

double CsrMatrix::coeff(std::size_t row, std::size_t col) const {
  if (row >= nrows_ || col >= ncols_) {
    throw Error(ErrorCode::kIndexOutOfBounds, "coefficient index out of range");
  }
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(col));
  if (it == last || *it != static_cast<std::int32_t>(col)) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(std::min(nrows_, ncols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = coeff(r, r);
  return d;
}

CsrMatrix assemble_csr(std::span<const Triplet> triplets, std::size_t nrows,
                       std::size_t ncols) {
  if (ncols > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw Error(ErrorCode::kInvalidArgument, "too many columns for CSR indices");
  }
  for (const Triplet& t : triplets) {
    if (t.row >= nrows || t.col >= ncols) {
      throw Error(ErrorCode::kIndexOutOfBounds,
                  "triplet (" + std::to_string(t.row) + "," +
                      std::to_string(t.col) + ") outside " +
                      std::to_string(nrows) + "x" + std::to_string(ncols));
    }
  }
  // Stable order keeps duplicate summation in input order, so assembly is
  // deterministic for a given triplet list.
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (triplets[a].row != triplets[b].row) return triplets[a].row < triplets[b].row;
    return triplets[a].col < triplets[b].col;
  });

  CsrMatrix m;
  m.nrows_ = nrows;
  m.ncols_ = ncols;
  m.row_offsets_.assign(nrows + 1, 0);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Triplet& t = triplets[order[k]];
    const bool same_as_last =
        k > 0 && triplets[order[k - 1]].row == t.row &&
        triplets[order[k - 1]].col == t.col;
    if (same_as_last) {
      m.values_.back() += t.value;
    } else {
      m.col_indices_.push_back(static_cast<std::int32_t>(t.col));
      m.values_.push_back(t.value);
      ++m.row_offsets_[t.row + 1];
    }
  }
  std::partial_sum(m.row_offsets_.begin(), m.row_offsets_.end(),
                   m.row_offsets_.begin());
  return m;
}

void spmv_into(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "spmv: matrix is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + ", x has " +
                    std::to_string(x.size()) + " entries");
  }
  simd::Active().spmv_csr(a.rows(), a.row_offsets().data(),
                          a.col_indices().data(), a.values().data(), x.data(),
                          y.data());
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows());
  spmv_into(a, x, y);
  return y;
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  out << std::setprecision(17);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      out << (r + 1) << ' ' << (cols[k] + 1) << ' ' << vals[k] << '\n';
    }
  }
}

double Norm2(std::span<const double> x) {
  return std::sqrt(simd::Dot(x, x));
}

}  // namespace lumen
