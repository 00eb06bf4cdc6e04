#include "gkb/saddle_system.hpp"

#include <cmath>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

void SaddleSystem::validate() const {
  M.validate();
  A.validate();
  if (M.n_rows != M.n_cols) throw DimensionError("saddle system: M must be square");
  if (A.n_rows != M.n_rows) {
    throw DimensionError("saddle system: A has " + std::to_string(A.n_rows) +
                         " rows but M is " + std::to_string(M.n_rows) + "x" +
                         std::to_string(M.n_cols));
  }
  if (g.size() != M.n_rows) {
    throw DimensionError("saddle system: g has length " + std::to_string(g.size()) +
                         ", expected " + std::to_string(M.n_rows));
  }
  if (r.size() != A.n_cols) {
    throw DimensionError("saddle system: r has length " + std::to_string(r.size()) +
                         ", expected " + std::to_string(A.n_cols));
  }
  if (!(eta > 0.0)) throw ConfigError("saddle system: eta must be positive");
  const double defect = symmetry_defect(M);
  if (defect > 1e-12) {
    throw SpdError("saddle system: M is not symmetric (relative defect " +
                   std::to_string(defect) + ")");
  }
}

double n_norm(const Vector& q, double eta) { return norm2(q) / std::sqrt(eta); }

double n_inv_norm(const Vector& b, double eta) { return std::sqrt(eta) * norm2(b); }

}  // namespace gkb
