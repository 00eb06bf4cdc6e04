#ifndef GKB_PROBLEMS_HPP
#define GKB_PROBLEMS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "gkb/saddle_system.hpp"

namespace gkb {

struct GeneratedProblem {
  SaddleSystem system;
  /// Exact primal solution in the physical variable (the w of the block
  /// system), when the generator knows one.
  std::optional<Vector> u_exact;
  std::optional<Vector> p_exact;
  std::string description;
  double h = 0.0;  // mesh parameter; 0 for algebraic problems
  /// Residual bound the exact interpolant is declared to satisfy on the
  /// block system (discretization consistency).
  double consistency_tol = 0.0;
};

/// Staggered-grid (MAC) finite-difference Stokes channel on
/// [-1, length] x [-1, 1]: Poiseuille inflow, no-slip walls, natural
/// outflow. M is the volume-scaled vector Laplacian (SPD), A the discrete
/// gradient. The analytic Poiseuille interpolant (u_x = 1 - y^2, u_y = 0,
/// p = 2*length - 2x) is attached for error measurement.
GeneratedProblem gen_mac_stokes_channel(std::size_t nx, std::size_t ny, double length);

/// Lowest-order Raviart-Thomas / piecewise-constant discretization of the
/// mixed Poisson problem on the unit square with n x n cells, homogeneous
/// Dirichlet data, and a cell-wise random forcing drawn uniformly from
/// (0,1) with the given seed.
GeneratedProblem gen_mixed_poisson_rt0(std::size_t n, std::uint64_t seed);

/// Random dense saddle problem: M = Q D Q^T with a log-spaced spectrum
/// reaching cond_target, A random with verified full column rank, exact
/// solution from a direct solve.
GeneratedProblem gen_random_saddle(std::size_t m, std::size_t n, double cond_target,
                                   std::uint64_t seed);

/// Writes M.mtx, A.mtx, g.mtx, r.mtx and meta.txt ("eta=<value>") into
/// dir_path (created if missing).
void save_system(const std::string& dir_path, const SaddleSystem& system);

/// Loads and validates a system saved by save_system (or produced by any
/// tool following the same layout).
SaddleSystem load_system(const std::string& dir_path);

}  // namespace gkb

#endif
