#include "gkb/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

void SparseMatrix::validate() const {
  if (row_offsets.size() != n_rows + 1) {
    throw DimensionError("csr: row_offsets must have n_rows+1 entries");
  }
  if (row_offsets.front() != 0 || row_offsets.back() != values.size()) {
    throw DimensionError("csr: row_offsets endpoints inconsistent with values");
  }
  if (col_indices.size() != values.size()) {
    throw DimensionError("csr: col_indices/values length mismatch");
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) {
      throw DimensionError("csr: row_offsets not non-decreasing at row " +
                           std::to_string(i));
    }
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] >= n_cols) {
        throw DimensionError("csr: column index out of range in row " +
                             std::to_string(i));
      }
      if (k > row_offsets[i] && col_indices[k] <= col_indices[k - 1]) {
        throw DimensionError("csr: columns not strictly increasing in row " +
                             std::to_string(i));
      }
    }
  }
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i]);
  auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it != last && *it == j) {
    return values[static_cast<std::size_t>(it - col_indices.begin())];
  }
  return 0.0;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m;
  m.n_rows = m.n_cols = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) m.row_offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) m.col_indices[i] = i;
  return m;
}

SparseMatrix SparseMatrix::from_triplets(
    std::size_t n_rows, std::size_t n_cols,
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets) {
  for (const auto& [i, j, v] : triplets) {
    (void)v;
    if (i >= n_rows || j >= n_cols) {
      throw DimensionError("from_triplets: coordinate out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const auto& a, const auto& b) {
                     if (std::get<0>(a) != std::get<0>(b))
                       return std::get<0>(a) < std::get<0>(b);
                     return std::get<1>(a) < std::get<1>(b);
                   });
  SparseMatrix m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_offsets.assign(n_rows + 1, 0);
  m.col_indices.reserve(triplets.size());
  m.values.reserve(triplets.size());
  std::vector<std::size_t> counts(n_rows, 0);
  std::size_t last_row = SIZE_MAX, last_col = SIZE_MAX;
  for (const auto& [i, j, v] : triplets) {
    if (i == last_row && j == last_col) {
      m.values.back() += v;  // duplicate coordinates are summed
    } else {
      m.col_indices.push_back(j);
      m.values.push_back(v);
      counts[i]++;
      last_row = i;
      last_col = j;
    }
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    m.row_offsets[i + 1] = m.row_offsets[i] + counts[i];
  }
  m.validate();
  return m;
}

Vector spmv(const SparseMatrix& A, const Vector& x) {
  if (A.n_cols != x.size()) {
    throw DimensionError("spmv: matrix has " + std::to_string(A.n_cols) +
                         " columns, vector has " + std::to_string(x.size()));
  }
  Vector y(A.n_rows, 0.0);
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    double s = 0.0;
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      s += A.values[k] * x[A.col_indices[k]];
    }
    y[i] = s;
  }
  return y;
}

Vector spmv_t(const SparseMatrix& A, const Vector& x) {
  if (A.n_rows != x.size()) {
    throw DimensionError("spmv_t: matrix has " + std::to_string(A.n_rows) +
                         " rows, vector has " + std::to_string(x.size()));
  }
  Vector y(A.n_cols, 0.0);
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    const double xi = x[i];
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      y[A.col_indices[k]] += A.values[k] * xi;
    }
  }
  return y;
}

SparseMatrix transpose(const SparseMatrix& A) {
  SparseMatrix t;
  t.n_rows = A.n_cols;
  t.n_cols = A.n_rows;
  t.row_offsets.assign(A.n_cols + 1, 0);
  for (std::size_t k = 0; k < A.nnz(); ++k) t.row_offsets[A.col_indices[k] + 1]++;
  for (std::size_t i = 0; i < A.n_cols; ++i) t.row_offsets[i + 1] += t.row_offsets[i];
  t.col_indices.resize(A.nnz());
  t.values.resize(A.nnz());
  std::vector<std::size_t> next(t.row_offsets.begin(), t.row_offsets.end() - 1);
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const std::size_t j = A.col_indices[k];
      t.col_indices[next[j]] = i;
      t.values[next[j]] = A.values[k];
      ++next[j];
    }
  }
  return t;
}

double weighted_norm(const Vector& x, const SparseMatrix& M) {
  if (M.n_rows != M.n_cols) throw DimensionError("weighted_norm: M not square");
  const Vector mx = spmv(M, x);
  const double q = dot(x, mx);
  if (q >= 0.0) return std::sqrt(q);
  // Tolerate roundoff-scale negatives near zero; anything larger means M
  // is not positive definite for this vector.
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    scale += std::abs(x[i] * mx[i]);
  }
  if (q > -1e-13 * (scale + 1e-300)) return 0.0;
  throw SpdError("weighted_norm: x^T M x = " + std::to_string(q) +
                 " < 0; M is not positive definite");
}

SparseMatrix sparse_add(const SparseMatrix& A, const SparseMatrix& B, double c) {
  if (A.n_rows != B.n_rows || A.n_cols != B.n_cols) {
    throw DimensionError("sparse_add: shape mismatch");
  }
  SparseMatrix r;
  r.n_rows = A.n_rows;
  r.n_cols = A.n_cols;
  r.row_offsets.assign(A.n_rows + 1, 0);
  r.col_indices.reserve(A.nnz() + B.nnz());
  r.values.reserve(A.nnz() + B.nnz());
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    std::size_t ka = A.row_offsets[i], kb = B.row_offsets[i];
    const std::size_t ea = A.row_offsets[i + 1], eb = B.row_offsets[i + 1];
    while (ka < ea || kb < eb) {
      std::size_t ja = ka < ea ? A.col_indices[ka] : SIZE_MAX;
      std::size_t jb = kb < eb ? B.col_indices[kb] : SIZE_MAX;
      if (ja < jb) {
        r.col_indices.push_back(ja);
        r.values.push_back(A.values[ka++]);
      } else if (jb < ja) {
        r.col_indices.push_back(jb);
        r.values.push_back(c * B.values[kb++]);
      } else {
        r.col_indices.push_back(ja);
        r.values.push_back(A.values[ka++] + c * B.values[kb++]);
      }
    }
    r.row_offsets[i + 1] = r.values.size();
  }
  return r;
}

SparseMatrix sparse_matmul(const SparseMatrix& A, const SparseMatrix& B,
                           std::size_t nnz_cap) {
  if (A.n_cols != B.n_rows) throw DimensionError("sparse_matmul: inner dims");
  SparseMatrix r;
  r.n_rows = A.n_rows;
  r.n_cols = B.n_cols;
  r.row_offsets.assign(A.n_rows + 1, 0);
  std::vector<double> acc(B.n_cols, 0.0);
  std::vector<std::size_t> marked;
  marked.reserve(64);
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    marked.clear();
    for (std::size_t ka = A.row_offsets[i]; ka < A.row_offsets[i + 1]; ++ka) {
      const std::size_t j = A.col_indices[ka];
      const double aij = A.values[ka];
      for (std::size_t kb = B.row_offsets[j]; kb < B.row_offsets[j + 1]; ++kb) {
        const std::size_t col = B.col_indices[kb];
        if (acc[col] == 0.0 &&
            std::find(marked.begin(), marked.end(), col) == marked.end()) {
          marked.push_back(col);
        }
        acc[col] += aij * B.values[kb];
      }
    }
    std::sort(marked.begin(), marked.end());
    if (r.values.size() + marked.size() > nnz_cap) {
      throw CapacityError("sparse_matmul: fill exceeds nnz cap of " +
                          std::to_string(nnz_cap));
    }
    for (std::size_t col : marked) {
      r.col_indices.push_back(col);
      r.values.push_back(acc[col]);
      acc[col] = 0.0;
    }
    r.row_offsets[i + 1] = r.values.size();
  }
  return r;
}

double symmetry_defect(const SparseMatrix& A) {
  if (A.n_rows != A.n_cols) throw DimensionError("symmetry_defect: not square");
  double max_abs = 0.0;
  for (double v : A.values) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs == 0.0) return 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < A.n_rows; ++i) {
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const std::size_t j = A.col_indices[k];
      defect = std::max(defect, std::abs(A.values[k] - A.at(j, i)));
    }
  }
  return defect / max_abs;
}

}  // namespace gkb
