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

#ifndef LUMEN_SPARSE_HPP_
#define LUMEN_SPARSE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace lumen {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Immutable once assembled; column indices
/// are strictly increasing within each row.
class CsrMatrix {
 public:
  CsrMatrix() : row_offsets_(1, 0) {}

  std::size_t rows() const noexcept { return nrows_; }
  std::size_t cols() const noexcept { return ncols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::int32_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Stored value at (row, col), or 0 when the entry is structurally absent.
  double coeff(std::size_t row, std::size_t col) const;
  /// Main diagonal; structurally absent entries read as 0.
  std::vector<double> diagonal() const;

  friend CsrMatrix assemble_csr(std::span<const Triplet> triplets,
                                std::size_t nrows, std::size_t ncols);

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::int32_t> col_indices_;
  std::vector<double> values_;
};

/// Sorts triplets into CSR form, summing duplicates.
/// Throws IndexOutOfBounds for any index outside nrows x ncols.
CsrMatrix assemble_csr(std::span<const Triplet> triplets, std::size_t nrows,
                       std::size_t ncols);

/// y = A x. Throws DimensionMismatch when x.size() != A.cols().
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);
void spmv_into(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

/// Matrix Market coordinate format, 1-based, general real.
void write_matrix_market(const CsrMatrix& a, std::ostream& out);

struct SolveReport {
  int iterations = 0;
  double final_residual_norm = 0.0;  // ||b - A x||_2, recomputed from scratch
  bool converged = false;
};

struct SolverOptions {
  double tol = 1e-10;  // relative: ||b - A x|| <= tol * ||b||
  int max_iter = 10000;
  bool jacobi = false;  // diagonal preconditioning
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// Conjugate gradients for symmetric positive definite A. The initial
/// guess is zero unless `x0` is given.
SolveResult solve_cg(const CsrMatrix& a, std::span<const double> b,
                     const SolverOptions& options,
                     std::optional<std::span<const double>> x0 = std::nullopt);

/// BiCGStab for general nonsingular A. On a breakdown it restarts once from
/// the current iterate; a second breakdown ends the solve.
SolveResult solve_bicgstab(const CsrMatrix& a, std::span<const double> b,
                           const SolverOptions& options,
                           std::optional<std::span<const double>> x0 = std::nullopt);

double Norm2(std::span<const double> x);

}  // namespace lumen

#endif  // LUMEN_SPARSE_HPP_
