#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace fid {

/// Element of a Cayley-Dickson algebra level: level 0 is the reals, 1 the
/// complex numbers, 2 the quaternions, 3 the octonions. Coordinates are
/// stored in a fixed array of 8; only the first 2^level entries are used.
class CDElement {
 public:
  static constexpr int kMaxLevel = 3;

  explicit CDElement(int level);
  CDElement(int level, std::span<const double> coords);

  static CDElement unit(int level);
  static CDElement real(int level, double c);
  /// i-th standard basis element (coordinate i set to 1).
  static CDElement basis(int level, int i);

  int level() const { return level_; }
  int dim() const { return 1 << level_; }

  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim())}; }

  CDElement operator+(const CDElement& o) const;
  CDElement operator-(const CDElement& o) const;
  CDElement operator*(double s) const;

 private:
  int level_;
  std::array<double, 8> c_{};
};

/// Cayley-Dickson product (a,b)(c,d) = (ac - d*b, da + bc*); level 0 is real
/// multiplication. Throws std::invalid_argument on level mismatch.
CDElement cd_mul(const CDElement& a, const CDElement& b);

/// Involution (a,b)* = (a*, -b): fixes the real coordinate, negates the rest.
CDElement cd_conj(const CDElement& a);

/// Squared norm, equal to the real part of conj(a) * a and to the coordinate
/// sum of squares.
double cd_norm_sq(const CDElement& a);

/// Multiplicative inverse conj(a) / |a|^2; throws std::domain_error at zero.
CDElement cd_inv(const CDElement& a);

/// Solves theta * u = x for theta as x * inv(u), valid in the octonion loop
/// by the inverse property. Throws std::domain_error for zero u.
CDElement right_divide(const CDElement& x, const CDElement& u);

double cd_dist(const CDElement& a, const CDElement& b);

/// Quasigroup-with-unit interface over a Cayley-Dickson level.
struct LoopOps {
  std::function<CDElement(const CDElement&, const CDElement&)> mul;
  CDElement unit;
  std::function<CDElement(const CDElement&, const CDElement&)> right_divide;
};

LoopOps cd_loop(int level);

}  // namespace fid
