#include "fid/random.hpp"

#include <cmath>

namespace fid {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Stafford mix13).
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RandomStream RandomStream::substream(std::uint64_t child) const {
  RandomStream s;
  s.seed = seed;
  s.stream_id = mix64(stream_id ^ mix64(child + kGolden));
  s.counter = 0;
  return s;
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t key = mix64(seed ^ mix64(stream_id + kGolden));
  return mix64(key + kGolden * ++counter);
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_pos() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RandomStream::normal() {
  // Box-Muller; the sine branch is discarded so each call consumes exactly
  // two uniforms.
  const double u1 = uniform_pos();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RandomStream::exponential() { return -std::log(uniform_pos()); }

double RandomStream::gamma(double shape) {
  if (!(shape > 0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double RandomStream::chi_squared(double df) {
  if (!(df > 0)) throw std::invalid_argument("chi_squared: df must be > 0");
  return 2.0 * gamma(0.5 * df);
}

double RandomStream::chi(double df) { return std::sqrt(chi_squared(df)); }

double RandomStream::student_t(double df) {
  if (!(df > 0)) throw std::invalid_argument("student_t: df must be > 0");
  const double z = normal();
  const double c2 = chi_squared(df);
  return z / std::sqrt(c2 / df);
}

double draw(RandomStream& stream, const DistSpec& dist) {
  switch (dist.kind) {
    case DistSpec::kUniform01:
      return stream.uniform01();
    case DistSpec::kStdNormal:
      return stream.normal();
    case DistSpec::kGamma:
      return stream.gamma(dist.param);
    case DistSpec::kStudentT:
      return stream.student_t(dist.param);
    case DistSpec::kChi:
      return stream.chi(dist.param);
  }
  throw std::invalid_argument("draw: unknown distribution");
}

}  // namespace fid
