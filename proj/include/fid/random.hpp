#pragma once

#include <cstdint>
#include <stdexcept>

namespace fid {

/// Counter-based random stream. The output at a given (seed, stream_id,
/// counter) is a pure function of those three values, so identical streams
/// reproduce bitwise-identical sequences on any host, and substreams can be
/// handed to workers without shared state.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t counter = 0;

  RandomStream() = default;
  RandomStream(std::uint64_t s, std::uint64_t id) : seed(s), stream_id(id) {}

  /// Derived stream with an independent sequence; the child id is mixed so
  /// nested derivations do not collide for practical workloads.
  RandomStream substream(std::uint64_t child) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  /// Uniform on (0, 1], never zero (safe for logs).
  double uniform_pos();

  double normal();                 // standard normal, Box-Muller
  double exponential();            // standard exponential
  double gamma(double shape);      // gamma(shape, scale 1), Marsaglia-Tsang
  double chi_squared(double df);   // 2 * gamma(df/2)
  double chi(double df);           // sqrt of chi-squared
  double student_t(double df);
};

struct DistSpec {
  enum Kind { kUniform01, kStdNormal, kGamma, kStudentT, kChi };
  Kind kind = kUniform01;
  double param = 0;  // shape for gamma, df for t and chi

  static DistSpec uniform01() { return {kUniform01, 0}; }
  static DistSpec std_normal() { return {kStdNormal, 0}; }
  static DistSpec gamma(double shape) { return {kGamma, shape}; }
  static DistSpec student_t(double df) { return {kStudentT, df}; }
  static DistSpec chi(double df) { return {kChi, df}; }
};

/// Single draw from the named law; throws std::invalid_argument on bad
/// distribution parameters.
double draw(RandomStream& stream, const DistSpec& dist);

}  // namespace fid
