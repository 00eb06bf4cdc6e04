#ifndef GKB_VECTOR_OPS_HPP
#define GKB_VECTOR_OPS_HPP

#include <cstddef>
#include <vector>

namespace gkb {

using Vector = std::vector<double>;

// All reductions run sequentially in index order so that repeated runs
// produce bit-identical results.

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);

/// y := a*x + y, returned as a new vector.
Vector axpy(double a, const Vector& x, const Vector& y);
/// In-place y += a*x.
void axpy_inplace(double a, const Vector& x, Vector& y);

Vector scale(double a, const Vector& x);
void scale_inplace(double a, Vector& x);

Vector sub(const Vector& x, const Vector& y);
Vector add(const Vector& x, const Vector& y);

Vector zeros(std::size_t n);

bool all_finite(const Vector& x);

/// Throws BreakdownError if any entry is NaN or Inf.
void require_finite(const Vector& x, const char* what);

}  // namespace gkb

#endif
