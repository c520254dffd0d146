#pragma once

#include <utility>

#include "fid/algebra.hpp"
#include "fid/fidcore.hpp"

namespace fid {

// ---------------------------------------------------------------------------
// Model factories. Data layouts:
//   exponential scale:     z = [ybar]
//   uniform interval:      z = [min, max]
//   location (d, n):       z = n*d coords, observation-major
//   normal location-scale: z = [xbar, s], theta = [mu, sigma]
//   octonion:              z = 8 coords
// ---------------------------------------------------------------------------

/// Scale model for the mean of n exponential observations: z = beta * U with
/// U ~ gamma(shape n, scale 1/n). Simple inversion.
FiducialModel exponential_scale_model(int n);

/// Location model for (min, max) of n uniforms on (theta, theta + 1).
/// Group-conditional: maximal invariant is the range, the conditional law of
/// the minimum given range y is uniform on (0, 1 - y).
FiducialModel uniform_interval_model(int n);

/// Location model in R^d with n iid Gaussian observations x_i = theta + u_i.
/// Group-conditional on the differences (x_2 - x_1, ..., x_n - x_1).
FiducialModel location_model(int d, int n);

/// Location-scale model on the sufficient statistic (xbar, s) of n normal
/// observations. Group-conditional; the group acts transitively on the
/// statistic space so the maximal invariant is trivial.
FiducialModel normal_location_scale_model(int n);

/// Octonion relation x = theta * u with a spherically symmetric U (iid
/// standard normal coordinates by default). Simple inversion by right
/// division.
FiducialModel octonion_model();
FiducialModel octonion_model(std::function<Vec(RandomStream&)> u_sampler);

CDElement to_octonion(const Vec& v);
Vec from_octonion(const CDElement& e);

// ---------------------------------------------------------------------------
// Closed-form fiducial summaries
// ---------------------------------------------------------------------------

/// Fiducial interval support for the uniform model: (x_max - 1, x_min).
/// Requires 0 <= x_max - x_min <= 1.
std::pair<double, double> uniform_fiducial_interval(double x_min,
                                                    double x_max);

/// Inverse-gamma (scale, shape) of the exponential-scale fiducial:
/// (xbar * n, n).
std::pair<double, double> exp_fiducial_params(double xbar, int n);

/// CDF of the inverse-gamma law with the given scale and shape.
double inverse_gamma_cdf(double t, double scale, double shape);

/// Ray-conditioning weights for the exponential model without sufficiency
/// reduction: w_i proportional to f_V(alpha_i * y/|y|) * alpha_i^(n-1) on the
/// grid, normalized to sum 1.
Vec exp_ray_conditional_weights(const Vec& y, const Vec& alpha_grid);

// ---------------------------------------------------------------------------
// Two-parameter gamma
// ---------------------------------------------------------------------------

/// Geometric mean over arithmetic mean of a positive sample; in (0, 1].
double bartlett_statistic(const Vec& y);

struct GammaConfig {
  int inner_mc = 4000;       // forward draws per CDF evaluation
  double alpha_lo = 0.05;    // root bracket
  double alpha_hi = 50.0;
  int max_expand = 8;        // geometric bracket widenings before giving up
  double tol = 1e-3;         // |F_hat - v2| target (floor; see solver)
};

/// Monte Carlo estimate of the Bartlett-statistic CDF at shape alpha, using a
/// fixed matrix of uniforms so evaluations at different alpha share common
/// random numbers.
class BartlettCdfEstimator {
 public:
  BartlettCdfEstimator(int n, int inner_mc, RandomStream stream);

  /// F_hat_W(w; alpha): fraction of simulated Bartlett statistics <= w.
  double cdf(double w, double alpha) const;

  /// Per-inner-draw roots of W_j(alpha) = w, sorted ascending. Inverting the
  /// step function F_hat under common random numbers reduces to quantiles of
  /// these roots.
  std::vector<double> alpha_roots(double w, const GammaConfig& cfg) const;

  int n() const { return n_; }
  int inner_mc() const { return inner_mc_; }

 private:
  double bartlett_at(std::size_t j, double alpha) const;

  int n_;
  int inner_mc_;
  std::vector<double> uniforms_;  // inner_mc x n
};

/// Solves F_hat_W(w; alpha) = v2 for alpha by bracketed bisection with common
/// random numbers. Throws std::runtime_error if no sign change exists after
/// widening, or if F_hat is detected non-monotone across the bracket.
double gamma_alpha_solve(double w, double v2, int n, int inner_mc,
                         RandomStream stream,
                         std::pair<double, double> bracket);

/// Joint fiducial draws of (alpha, beta) for a positive sample:
/// alpha from inversion of the Bartlett CDF, beta = ybar / qgamma(v1; n*alpha,
/// 1/n).
FiducialDraws gamma_fiducial_sample(const Vec& data, std::size_t m,
                                    RandomStream stream,
                                    const GammaConfig& cfg = {});

// ---------------------------------------------------------------------------
// Behrens-Fisher
// ---------------------------------------------------------------------------

struct BehrensFisherData {
  double xbar1, s1;
  int n1;
  double xbar2, s2;
  int n2;
};

/// Fiducial draws of mu1 - mu2 by composing the two normal location-scale
/// fiducials: mu_i = xbar_i + (s_i / sqrt(n_i)) * T_{n_i - 1}, independent.
FiducialDraws behrens_fisher_draws(const BehrensFisherData& d, std::size_t m,
                                   RandomStream stream);

}  // namespace fid
