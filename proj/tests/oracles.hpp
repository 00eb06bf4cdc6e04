// Test-side oracles. Everything here goes through Eigen so that the
// quantities we assert against are computed on an independent path from
// the library under test.
#ifndef GKB_TESTS_ORACLES_HPP
#define GKB_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "gkb/saddle_system.hpp"
#include "gkb/sparse.hpp"
#include "gkb/vector_ops.hpp"

namespace oracles {

inline Eigen::MatrixXd to_eigen(const gkb::SparseMatrix& a) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.n_rows),
                                            static_cast<Eigen::Index>(a.n_cols));
  for (std::size_t i = 0; i < a.n_rows; ++i) {
    for (std::size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a.col_indices[k])) =
          a.values[k];
    }
  }
  return d;
}

inline Eigen::VectorXd to_eigen(const gkb::Vector& v) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

inline gkb::Vector from_eigen(const Eigen::VectorXd& e) {
  gkb::Vector v(static_cast<std::size_t>(e.size()));
  for (Eigen::Index i = 0; i < e.size(); ++i) v[static_cast<std::size_t>(i)] = e(i);
  return v;
}

/// Dense solve of the full block system [M A; A^T 0][w; p] = [g; r]
/// by LU with partial pivoting on the assembled matrix.
inline std::pair<gkb::Vector, gkb::Vector> solve_block(const gkb::SaddleSystem& sys) {
  const Eigen::Index m = static_cast<Eigen::Index>(sys.primal_dim());
  const Eigen::Index n = static_cast<Eigen::Index>(sys.dual_dim());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m + n, m + n);
  k.topLeftCorner(m, m) = to_eigen(sys.M);
  k.topRightCorner(m, n) = to_eigen(sys.A);
  k.bottomLeftCorner(n, m) = to_eigen(sys.A).transpose();
  Eigen::VectorXd rhs(m + n);
  rhs.head(m) = to_eigen(sys.g);
  rhs.tail(n) = to_eigen(sys.r);
  const Eigen::VectorXd sol = k.partialPivLu().solve(rhs);
  return {from_eigen(sol.head(m)), from_eigen(sol.tail(n))};
}

/// Exact solution of the zero-upper-rhs system [M A; A^T 0][u; p] = [0; b].
inline std::pair<gkb::Vector, gkb::Vector> solve_transformed(
    const gkb::SaddleSystem& sys, const gkb::Vector& b) {
  gkb::SaddleSystem copy = sys;
  copy.g = gkb::Vector(sys.primal_dim(), 0.0);
  copy.r = b;
  return solve_block(copy);
}

/// Seeded random sparse matrix with a given fill fraction (tests only).
inline gkb::SparseMatrix random_sparse(std::size_t rows, std::size_t cols,
                                       double fill, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (pick(gen) < fill) trip.emplace_back(i, j, val(gen));
    }
  }
  // keep the diagonal populated so no row is empty
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) {
    trip.emplace_back(i, i, val(gen) + 2.0);
  }
  return gkb::SparseMatrix::from_triplets(rows, cols, std::move(trip));
}

/// Seeded random SPD matrix built as L L^T + diagonal shift (tests only).
inline gkb::SparseMatrix random_spd(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) l(i, j) = val(gen);
    l(i, i) += 2.0;
  }
  const Eigen::MatrixXd m = l * l.transpose();
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      trip.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                        m(i, j));
    }
  }
  return gkb::SparseMatrix::from_triplets(n, n, std::move(trip));
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double rel_err(const gkb::Vector& got, const gkb::Vector& want) {
  const double denom = gkb::norm2(want);
  return denom == 0.0 ? gkb::norm2(got) : gkb::norm2(gkb::sub(got, want)) / denom;
}

}  // namespace oracles

#endif
