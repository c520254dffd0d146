#pragma once

#include <span>
#include <vector>

namespace fid {

/// Digamma function, absolute error below 1e-10 on [1e-3, 1e6].
/// Throws std::domain_error for x <= 0.
double digamma(double x);

/// Natural log of the gamma function for x > 0 (Lanczos).
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x), and its complement Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// CDF and inverse CDF of the gamma(shape, scale) law.
double gamma_cdf(double x, double shape, double scale);
double gamma_inv_cdf(double p, double shape, double scale);

double normal_cdf(double x);
double normal_quantile(double p);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

double student_t_cdf(double t, double df);

/// Kolmogorov-Smirnov sup-distance of sorted samples in [0,1] against the
/// uniform CDF. Throws std::invalid_argument on an empty sample.
double ks_statistic(std::span<const double> sorted_samples);

/// Weighted variant; weights must be nonnegative and sum to ~1, samples
/// sorted ascending.
double ks_statistic_weighted(std::span<const double> sorted_samples,
                             std::span<const double> weights);

/// Asymptotic KS critical value at significance alpha for n samples.
double ks_critical_value(std::size_t n, double alpha);

/// Kolmogorov limit distribution tail: P(sqrt(n) D_n > lambda).
double kolmogorov_tail(double lambda);

}  // namespace fid
