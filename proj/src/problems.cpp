#include "gkb/problems.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <tuple>
#include <vector>

#include "gkb/dense.hpp"
#include "gkb/errors.hpp"
#include "gkb/matrix_market.hpp"
#include "gkb/transforms.hpp"

namespace gkb {

namespace {

using Triplets = std::vector<std::tuple<std::size_t, std::size_t, double>>;

/// Deterministic scalar streams on top of the standard mt19937_64 engine.
/// The distributions are hand-rolled because the standard library ones are
/// not bit-reproducible across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

GeneratedProblem gen_mac_stokes_channel(std::size_t nx, std::size_t ny, double length) {
  if (nx < 4 || ny < 4) throw ConfigError("mac channel: nx and ny must be >= 4");
  if (!(length > 0.0)) throw ConfigError("mac channel: length must be positive");
  const double hx = (length + 1.0) / static_cast<double>(nx);
  const double hy = 2.0 / static_cast<double>(ny);
  const double cx = hy / hx;  // volume-scaled x coupling
  const double cy = hx / hy;  // volume-scaled y coupling

  const std::size_t n_ux = nx * ny;            // u_x faces i = 1..nx
  const std::size_t n_uy = nx * (ny - 1);      // u_y faces j = 1..ny-1
  const std::size_t m = n_ux + n_uy;
  const std::size_t n_cells = nx * ny;

  const auto ux_id = [&](std::size_t i, std::size_t j) { return j * nx + (i - 1); };
  const auto uy_id = [&](std::size_t i, std::size_t j) {
    return n_ux + (j - 1) * nx + i;
  };
  const auto cell_id = [&](std::size_t i, std::size_t j) { return j * nx + i; };
  const auto y_mid = [&](std::size_t j) {
    return -1.0 + (static_cast<double>(j) + 0.5) * hy;
  };
  const auto inflow = [&](double y) { return 1.0 - y * y; };

  Triplets m_trip, a_trip;
  Vector g(m, 0.0);
  Vector r(n_cells, 0.0);

  // u_x momentum rows; the outflow column i = nx carries half quadrature
  // weight in y (half control volume) and no coupling past the boundary.
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 1; i <= nx; ++i) {
      const std::size_t row = ux_id(i, j);
      const double wy = (i == nx) ? 0.5 : 1.0;
      double diag = 0.0;
      if (i - 1 >= 1) {
        m_trip.emplace_back(row, ux_id(i - 1, j), -cx);
        diag += cx;
      } else {
        diag += cx;  // Dirichlet inflow face
        g[row] += cx * inflow(y_mid(j));
      }
      if (i + 1 <= nx) {
        m_trip.emplace_back(row, ux_id(i + 1, j), -cx);
        diag += cx;
      }
      if (j >= 1) {
        m_trip.emplace_back(row, ux_id(i, j - 1), -wy * cy);
        diag += wy * cy;
      } else {
        diag += 2.0 * wy * cy;  // no-slip wall, half-cell gradient
      }
      if (j + 1 <= ny - 1) {
        m_trip.emplace_back(row, ux_id(i, j + 1), -wy * cy);
        diag += wy * cy;
      } else {
        diag += 2.0 * wy * cy;
      }
      m_trip.emplace_back(row, row, diag);

      if (i <= nx - 1) a_trip.emplace_back(row, cell_id(i, j), hy);
      a_trip.emplace_back(row, cell_id(i - 1, j), -hy);
    }
  }

  // u_y momentum rows
  for (std::size_t j = 1; j <= ny - 1; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t row = uy_id(i, j);
      double diag = 0.0;
      if (j - 1 >= 1) {
        m_trip.emplace_back(row, uy_id(i, j - 1), -cy);
        diag += cy;
      } else {
        diag += cy;  // wall face value is zero
      }
      if (j + 1 <= ny - 1) {
        m_trip.emplace_back(row, uy_id(i, j + 1), -cy);
        diag += cy;
      } else {
        diag += cy;
      }
      if (i >= 1) {
        m_trip.emplace_back(row, uy_id(i - 1, j), -cx);
        diag += cx;
      } else {
        diag += 2.0 * cx;  // inflow, u_y = 0, half-cell gradient
      }
      if (i + 1 <= nx - 1) {
        m_trip.emplace_back(row, uy_id(i + 1, j), -cx);
        diag += cx;
      }
      // natural outflow: no term past i = nx-1
      m_trip.emplace_back(row, row, diag);

      a_trip.emplace_back(row, cell_id(i, j), hx);
      a_trip.emplace_back(row, cell_id(i, j - 1), -hx);
    }
  }

  // continuity rhs from the known inflow profile
  for (std::size_t j = 0; j < ny; ++j) {
    r[cell_id(0, j)] = -hy * inflow(y_mid(j));
  }

  GeneratedProblem out;
  out.system.M = SparseMatrix::from_triplets(m, m, std::move(m_trip));
  out.system.A = SparseMatrix::from_triplets(m, n_cells, std::move(a_trip));
  out.system.eta = 1.0;
  out.system.g = std::move(g);
  out.system.r = std::move(r);
  out.system.validate();

  Vector u_exact(m, 0.0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 1; i <= nx; ++i) u_exact[ux_id(i, j)] = inflow(y_mid(j));
  }
  Vector p_exact(n_cells, 0.0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double xc = -1.0 + (static_cast<double>(i) + 0.5) * hx;
      p_exact[cell_id(i, j)] = 2.0 * length - 2.0 * xc;
    }
  }
  out.u_exact = std::move(u_exact);
  out.p_exact = std::move(p_exact);
  out.h = std::max(hx, hy);
  // interpolant residual lives on the wall rows only, one O(h^2) entry per
  // wall face
  out.consistency_tol = 2.0 * out.h * out.h * std::sqrt(static_cast<double>(2 * nx));
  out.description = "mac-stokes-channel nx=" + std::to_string(nx) +
                    " ny=" + std::to_string(ny) + " L=" + std::to_string(length);
  return out;
}

GeneratedProblem gen_mixed_poisson_rt0(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("mixed poisson: n must be >= 2");
  const double h = 1.0 / static_cast<double>(n);
  const std::size_t n_v = (n + 1) * n;  // vertical edges
  const std::size_t m = 2 * n_v;        // plus horizontal edges, same count
  const std::size_t n_cells = n * n;

  const auto ve = [&](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  const auto he = [&](std::size_t i, std::size_t j) { return n_v + j * n + i; };
  const auto cell = [&](std::size_t i, std::size_t j) { return j * n + i; };

  Triplets m_trip, a_trip;
  const double d2 = h * h / 3.0;  // local mass diagonal
  const double o2 = h * h / 6.0;  // local mass off-diagonal
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t left = ve(i, j), right = ve(i + 1, j);
      m_trip.emplace_back(left, left, d2);
      m_trip.emplace_back(right, right, d2);
      m_trip.emplace_back(left, right, o2);
      m_trip.emplace_back(right, left, o2);
      const std::size_t bottom = he(i, j), top = he(i, j + 1);
      m_trip.emplace_back(bottom, bottom, d2);
      m_trip.emplace_back(top, top, d2);
      m_trip.emplace_back(bottom, top, o2);
      m_trip.emplace_back(top, bottom, o2);

      const std::size_t c = cell(i, j);
      a_trip.emplace_back(left, c, -h);
      a_trip.emplace_back(right, c, h);
      a_trip.emplace_back(bottom, c, -h);
      a_trip.emplace_back(top, c, h);
    }
  }

  Rng rng(seed);
  Vector r(n_cells, 0.0);
  for (std::size_t c = 0; c < n_cells; ++c) r[c] = -rng.uniform01() * h * h;

  GeneratedProblem out;
  out.system.M = SparseMatrix::from_triplets(m, m, std::move(m_trip));
  out.system.A = SparseMatrix::from_triplets(m, n_cells, std::move(a_trip));
  out.system.eta = 1.0;
  out.system.g = Vector(m, 0.0);
  out.system.r = std::move(r);
  out.system.validate();
  out.h = h;
  out.description = "mixed-poisson-rt0 n=" + std::to_string(n) +
                    " seed=" + std::to_string(seed);
  return out;
}

GeneratedProblem gen_random_saddle(std::size_t m, std::size_t n, double cond_target,
                                   std::uint64_t seed) {
  if (!(m > n && n >= 1)) throw ConfigError("random saddle: need m > n >= 1");
  if (!(cond_target >= 1.0)) throw ConfigError("random saddle: cond_target >= 1");

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));

    // orthonormal Q by modified Gram-Schmidt on a random Gaussian matrix
    std::vector<Vector> q(m, Vector(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < m; ++k) q[i][k] = rng.gaussian();
    }
    bool degenerate = false;
    for (std::size_t i = 0; i < m && !degenerate; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        axpy_inplace(-dot(q[j], q[i]), q[j], q[i]);
      }
      const double nrm = norm2(q[i]);
      if (nrm < 1e-8) {
        degenerate = true;
        break;
      }
      scale_inplace(1.0 / nrm, q[i]);
    }
    if (degenerate) continue;

    // M = Q D Q^T with log-spaced spectrum in [1, cond_target]
    Vector lambda(m, 1.0);
    if (m > 1) {
      for (std::size_t i = 0; i < m; ++i) {
        lambda[i] = std::pow(cond_target,
                             static_cast<double>(i) / static_cast<double>(m - 1));
      }
    }
    Triplets m_trip;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < m; ++k) v += lambda[k] * q[k][i] * q[k][j];
        m_trip.emplace_back(i, j, v);
        if (i != j) m_trip.emplace_back(j, i, v);
      }
    }

    Triplets a_trip;
    DenseMatrix a_dense(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = rng.gaussian();
        a_dense.at(i, j) = v;
        a_trip.emplace_back(i, j, v);
      }
    }
    // full column rank check via the Gram matrix spectrum
    DenseMatrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < m; ++k) v += a_dense.at(k, i) * a_dense.at(k, j);
        gram.at(i, j) = v;
        gram.at(j, i) = v;
      }
    }
    const EigenDecomposition ge = jacobi_eigen(gram);
    if (!(ge.eigenvalues.front() > 1e-12 * ge.eigenvalues.back())) continue;

    GeneratedProblem out;
    out.system.M = SparseMatrix::from_triplets(m, m, std::move(m_trip));
    out.system.A = SparseMatrix::from_triplets(m, n, std::move(a_trip));
    out.system.eta = 1.0;
    out.system.g.resize(m);
    out.system.r.resize(n);
    for (std::size_t i = 0; i < m; ++i) out.system.g[i] = rng.uniform(-1.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) out.system.r[j] = rng.uniform(-1.0, 1.0);
    out.system.validate();

    auto [w, p] = solve_saddle_dense(out.system);
    out.u_exact = std::move(w);
    out.p_exact = std::move(p);
    out.consistency_tol = 1e-10;
    out.description = "random-saddle m=" + std::to_string(m) +
                      " n=" + std::to_string(n) + " seed=" + std::to_string(seed);
    return out;
  }
  throw RankError("random saddle: failed to draw a full-rank A in 5 attempts");
}

void save_system(const std::string& dir_path, const SaddleSystem& system) {
  namespace fs = std::filesystem;
  fs::create_directories(dir_path);
  const fs::path dir(dir_path);
  mm_write((dir / "M.mtx").string(), system.M);
  mm_write((dir / "A.mtx").string(), system.A);
  mm_write((dir / "g.mtx").string(), system.g);
  mm_write((dir / "r.mtx").string(), system.r);
  std::FILE* f = std::fopen((dir / "meta.txt").string().c_str(), "w");
  if (!f) throw IoError("cannot write " + (dir / "meta.txt").string());
  std::fprintf(f, "eta=%.17g\n", system.eta);
  std::fclose(f);
}

SaddleSystem load_system(const std::string& dir_path) {
  namespace fs = std::filesystem;
  const fs::path dir(dir_path);
  for (const char* name : {"M.mtx", "A.mtx", "g.mtx", "r.mtx", "meta.txt"}) {
    if (!fs::exists(dir / name)) {
      throw IoError("load_system: missing file '" + (dir / name).string() + "'");
    }
  }
  SaddleSystem s;
  s.M = mm_read_matrix((dir / "M.mtx").string());
  s.A = mm_read_matrix((dir / "A.mtx").string());
  s.g = mm_read_vector((dir / "g.mtx").string());
  s.r = mm_read_vector((dir / "r.mtx").string());

  std::ifstream meta((dir / "meta.txt").string());
  std::string line;
  bool have_eta = false;
  while (std::getline(meta, line)) {
    if (line.rfind("eta=", 0) == 0) {
      try {
        s.eta = std::stod(line.substr(4));
        have_eta = true;
      } catch (const std::exception&) {
        throw ParseError((dir / "meta.txt").string() + ": bad eta value '" +
                         line.substr(4) + "'");
      }
    }
  }
  if (!have_eta) {
    throw ParseError((dir / "meta.txt").string() + ": missing 'eta=<real>' line");
  }
  s.validate();
  return s;
}

}  // namespace gkb
