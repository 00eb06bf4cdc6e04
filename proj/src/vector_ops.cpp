#include "gkb/vector_ops.hpp"

#include <cmath>
#include <string>

#include "gkb/errors.hpp"

namespace gkb {

namespace {
void check_same_size(const Vector& x, const Vector& y, const char* op) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
}
}  // namespace

double dot(const Vector& x, const Vector& y) {
  check_same_size(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

Vector axpy(double a, const Vector& x, const Vector& y) {
  check_same_size(x, y, "axpy");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
  return r;
}

void axpy_inplace(double a, const Vector& x, Vector& y) {
  check_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector scale(double a, const Vector& x) {
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

void scale_inplace(double a, Vector& x) {
  for (double& v : x) v *= a;
}

Vector sub(const Vector& x, const Vector& y) {
  check_same_size(x, y, "sub");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

Vector add(const Vector& x, const Vector& y) {
  check_same_size(x, y, "add");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

Vector zeros(std::size_t n) { return Vector(n, 0.0); }

bool all_finite(const Vector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_finite(const Vector& x, const char* what) {
  if (!all_finite(x)) {
    throw BreakdownError(std::string(what) + ": non-finite entry");
  }
}

}  // namespace gkb
