#include "fid/algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace fid {
namespace {

void check_level(int level) {
  if (level < 0 || level > CDElement::kMaxLevel)
    throw std::invalid_argument("CDElement: level must be in [0,3]");
}

// out = a * b, recursive doubling on raw coordinate halves.
void mul_rec(int dim, const double* a, const double* b, double* out) {
  if (dim == 1) {
    out[0] = a[0] * b[0];
    return;
  }
  const int h = dim / 2;
  const double* a1 = a;       // (a1, a2)
  const double* a2 = a + h;
  const double* b1 = b;       // (b1, b2)
  const double* b2 = b + h;

  // conj of the half element: negate all but coordinate 0
  auto conj_rec = [h](const double* x, double* y) {
    y[0] = x[0];
    for (int i = 1; i < h; ++i) y[i] = -x[i];
  };

  double t1[4], t2[4], c1[4], c2[4];
  // first half: a1*b1 - conj(b2)*a2
  conj_rec(b2, c1);
  mul_rec(h, a1, b1, t1);
  mul_rec(h, c1, a2, t2);
  for (int i = 0; i < h; ++i) out[i] = t1[i] - t2[i];
  // second half: b2*a1 + a2*conj(b1)
  conj_rec(b1, c2);
  mul_rec(h, b2, a1, t1);
  mul_rec(h, a2, c2, t2);
  for (int i = 0; i < h; ++i) out[h + i] = t1[i] + t2[i];
}

}  // namespace

CDElement::CDElement(int level) : level_(level) { check_level(level); }

CDElement::CDElement(int level, std::span<const double> coords)
    : level_(level) {
  check_level(level);
  if (coords.size() != static_cast<std::size_t>(dim()))
    throw std::invalid_argument("CDElement: coordinate count mismatch");
  for (int i = 0; i < dim(); ++i) c_[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
}

CDElement CDElement::unit(int level) { return real(level, 1.0); }

CDElement CDElement::real(int level, double c) {
  CDElement e(level);
  e[0] = c;
  return e;
}

CDElement CDElement::basis(int level, int i) {
  CDElement e(level);
  if (i < 0 || i >= e.dim())
    throw std::invalid_argument("CDElement::basis: index out of range");
  e[i] = 1.0;
  return e;
}

CDElement CDElement::operator+(const CDElement& o) const {
  if (level_ != o.level_)
    throw std::invalid_argument("CDElement: level mismatch");
  CDElement r(level_);
  for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] + o[i];
  return r;
}

CDElement CDElement::operator-(const CDElement& o) const {
  if (level_ != o.level_)
    throw std::invalid_argument("CDElement: level mismatch");
  CDElement r(level_);
  for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] - o[i];
  return r;
}

CDElement CDElement::operator*(double s) const {
  CDElement r(level_);
  for (int i = 0; i < dim(); ++i) r[i] = (*this)[i] * s;
  return r;
}

CDElement cd_mul(const CDElement& a, const CDElement& b) {
  if (a.level() != b.level())
    throw std::invalid_argument("cd_mul: level mismatch");
  CDElement out(a.level());
  double res[8];
  mul_rec(a.dim(), a.coords().data(), b.coords().data(), res);
  for (int i = 0; i < a.dim(); ++i) out[i] = res[i];
  return out;
}

CDElement cd_conj(const CDElement& a) {
  CDElement r(a.level());
  r[0] = a[0];
  for (int i = 1; i < a.dim(); ++i) r[i] = -a[i];
  return r;
}

double cd_norm_sq(const CDElement& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * a[i];
  return s;
}

CDElement cd_inv(const CDElement& a) {
  const double n2 = cd_norm_sq(a);
  if (n2 <= 0.0) throw std::domain_error("cd_inv: zero element");
  return cd_conj(a) * (1.0 / n2);
}

CDElement right_divide(const CDElement& x, const CDElement& u) {
  if (cd_norm_sq(u) <= 0.0) throw std::domain_error("right_divide: zero divisor");
  return cd_mul(x, cd_inv(u));
}

double cd_dist(const CDElement& a, const CDElement& b) {
  return std::sqrt(cd_norm_sq(a - b));
}

LoopOps cd_loop(int level) {
  LoopOps ops{
      [](const CDElement& a, const CDElement& b) { return cd_mul(a, b); },
      CDElement::unit(level),
      [](const CDElement& x, const CDElement& u) { return right_divide(x, u); }};
  return ops;
}

}  // namespace fid
