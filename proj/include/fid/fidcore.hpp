#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "fid/random.hpp"

namespace fid {

using Vec = std::vector<double>;

/// Inversion strategy for a fiducial model whose relation can be solved for
/// the parameter directly from (z, u).
struct SimpleSolver {
  std::function<Vec(const Vec& z, const Vec& u)> solve;
};

/// Inversion strategy that conditions the Monte Carlo variable on a maximal
/// invariant of the data and then selects a solution on the shared orbit.
struct GroupConditional {
  std::function<Vec(const Vec& z)> maximal_invariant;
  std::function<Vec(const Vec& y, RandomStream&)> conditional_u;
  std::function<Vec(const Vec& z, const Vec& u)> selection;
};

/// A fiducial model: a Monte Carlo variable sampler plus a relation
/// z = relation(u, theta) reproducing the statistical model, together with
/// an inversion strategy for solving the relation at observed data.
struct FiducialModel {
  std::string id;
  int param_dim = 1;
  int data_dim = 1;
  std::function<Vec(RandomStream&)> draw_u;
  std::function<Vec(const Vec& u, const Vec& theta)> relation;
  std::variant<SimpleSolver, GroupConditional> inversion;
};

/// Weighted collection of parameter draws representing the conditional law
/// of the solved parameter given observed data.
struct FiducialDraws {
  std::vector<Vec> draws;
  std::vector<double> weights;  // nonnegative, sums to 1
  // provenance
  std::string model_id;
  Vec data;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::size_t size() const { return draws.size(); }
};

FiducialDraws make_equal_weight_draws(std::vector<Vec> draws);

/// Worker-thread cap for the chunked samplers. Output is chunk-ordered and
/// therefore identical for every thread count.
void set_max_threads(int threads);
int max_threads();

/// Deterministic chunked loop: body(chunk_index, first, count) is invoked for
/// consecutive chunks of the given size; chunks may run on worker threads.
void run_chunked(std::size_t total, std::size_t chunk_size,
                 const std::function<void(std::size_t, std::size_t,
                                          std::size_t)>& body);

/// m independent data draws from the statistical model at theta.
std::vector<Vec> forward_simulate(const FiducialModel& model, const Vec& theta,
                                  RandomStream stream, std::size_t m);

/// Fiducial sampler for SimpleSolver models; every returned draw satisfies
/// relation(u, theta) = z within kFidResidualTol (max-norm, relative).
FiducialDraws fiducial_sample_simple(const FiducialModel& model, const Vec& z,
                                     RandomStream stream, std::size_t m);

/// Fiducial sampler for GroupConditional models: u is drawn conditionally on
/// the maximal invariant of z, theta by measurable selection.
FiducialDraws fiducial_sample_group(const FiducialModel& model, const Vec& z,
                                    RandomStream stream, std::size_t m);

/// Dispatches on the model's inversion strategy.
FiducialDraws fiducial_sample(const FiducialModel& model, const Vec& z,
                              RandomStream stream, std::size_t m);

/// Weighted empirical quantile of one coordinate of the draws.
double fiducial_quantile(const FiducialDraws& d, int coordinate, double p);

/// Weighted fraction of draws with coordinate value <= t.
double fiducial_cdf_at(const FiducialDraws& d, int coordinate, double t);

inline constexpr double kFidResidualTol = 1e-9;

}  // namespace fid
