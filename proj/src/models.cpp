#include "fid/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fid/special.hpp"

namespace fid {
namespace {

// uniform draw strictly inside (0, 1)
double uniform_open(RandomStream& s) {
  return std::min(s.uniform_pos(), 1.0 - 1e-16);
}

void require_positive_sample(const Vec& y, const char* who) {
  if (y.empty()) throw std::invalid_argument(std::string(who) + ": empty sample");
  for (double v : y)
    if (!(v > 0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(who) +
                                  ": observations must be positive finite");
}

}  // namespace

FiducialModel exponential_scale_model(int n) {
  if (n < 1) throw std::invalid_argument("exponential_scale_model: n >= 1");
  FiducialModel m;
  m.id = "exponential";
  m.param_dim = 1;
  m.data_dim = 1;
  const double dn = n;
  m.draw_u = [dn](RandomStream& s) -> Vec { return {s.gamma(dn) / dn}; };
  m.relation = [](const Vec& u, const Vec& theta) -> Vec {
    if (!(theta[0] > 0))
      throw std::domain_error("exponential: scale must be > 0");
    return {theta[0] * u[0]};
  };
  m.inversion = SimpleSolver{
      [](const Vec& z, const Vec& u) -> Vec { return {z[0] / u[0]}; }};
  return m;
}

FiducialModel uniform_interval_model(int n) {
  if (n < 2) throw std::invalid_argument("uniform_interval_model: n >= 2");
  FiducialModel m;
  m.id = "uniform-interval";
  m.param_dim = 1;
  m.data_dim = 2;
  m.draw_u = [n](RandomStream& s) -> Vec {
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = s.uniform01();
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    return {lo, hi};
  };
  m.relation = [](const Vec& u, const Vec& theta) -> Vec {
    return {theta[0] + u[0], theta[0] + u[1]};
  };
  m.inversion = GroupConditional{
      [](const Vec& z) -> Vec {
        const double y = z[1] - z[0];
        if (y < 0 || y > 1)
          throw std::invalid_argument(
              "uniform-interval: data range must lie in [0, 1]");
        return {y};
      },
      [](const Vec& y, RandomStream& s) -> Vec {
        // (U_min | range = y) is uniform on (0, 1 - y); y = 1 collapses to a
        // point mass at 0.
        const double u1 = (1.0 - y[0]) * s.uniform01();
        return {u1, u1 + y[0]};
      },
      [](const Vec& z, const Vec& u) -> Vec { return {z[0] - u[0]}; }};
  return m;
}

FiducialModel location_model(int d, int n) {
  if (d < 1 || n < 1) throw std::invalid_argument("location_model: d, n >= 1");
  FiducialModel m;
  m.id = "location";
  m.param_dim = d;
  m.data_dim = d * n;
  m.draw_u = [d, n](RandomStream& s) -> Vec {
    Vec u(static_cast<std::size_t>(d) * n);
    for (double& v : u) v = s.normal();
    return u;
  };
  m.relation = [d, n](const Vec& u, const Vec& theta) -> Vec {
    Vec z(static_cast<std::size_t>(d) * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k)
        z[static_cast<std::size_t>(i * d + k)] =
            theta[static_cast<std::size_t>(k)] +
            u[static_cast<std::size_t>(i * d + k)];
    return z;
  };
  m.inversion = GroupConditional{
      [d, n](const Vec& z) -> Vec {
        Vec y(static_cast<std::size_t>(d) * (n - 1));
        for (int j = 1; j < n; ++j)
          for (int k = 0; k < d; ++k)
            y[static_cast<std::size_t>((j - 1) * d + k)] =
                z[static_cast<std::size_t>(j * d + k)] -
                z[static_cast<std::size_t>(k)];
        return y;
      },
      [d, n](const Vec& y, RandomStream& s) -> Vec {
        // Gaussian conditioning: (U_1 | differences = y) is normal with mean
        // -mean(y) and variance 1/n, per coordinate; remaining observations
        // follow from the differences.
        Vec u(static_cast<std::size_t>(d) * n);
        const double sd = 1.0 / std::sqrt(static_cast<double>(n));
        for (int k = 0; k < d; ++k) {
          double sum = 0.0;
          for (int j = 0; j < n - 1; ++j)
            sum += y[static_cast<std::size_t>(j * d + k)];
          const double mean = -sum / n;
          u[static_cast<std::size_t>(k)] = mean + sd * s.normal();
        }
        for (int j = 1; j < n; ++j)
          for (int k = 0; k < d; ++k)
            u[static_cast<std::size_t>(j * d + k)] =
                u[static_cast<std::size_t>(k)] +
                y[static_cast<std::size_t>((j - 1) * d + k)];
        return u;
      },
      [d](const Vec& z, const Vec& u) -> Vec {
        Vec theta(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k)
          theta[static_cast<std::size_t>(k)] =
              z[static_cast<std::size_t>(k)] - u[static_cast<std::size_t>(k)];
        return theta;
      }};
  return m;
}

FiducialModel normal_location_scale_model(int n) {
  if (n < 2) throw std::invalid_argument("normal_location_scale_model: n >= 2");
  FiducialModel m;
  m.id = "normal";
  m.param_dim = 2;
  m.data_dim = 2;
  const double dn = n;
  m.draw_u = [dn](RandomStream& s) -> Vec {
    const double ubar = s.normal() / std::sqrt(dn);
    const double su = s.chi(dn - 1.0) / std::sqrt(dn - 1.0);
    return {ubar, su};
  };
  m.relation = [](const Vec& u, const Vec& theta) -> Vec {
    if (theta[1] < 0)
      throw std::domain_error("normal: sigma must be >= 0");
    return {theta[0] + theta[1] * u[0], theta[1] * u[1]};
  };
  // The location-scale group acts transitively on {(xbar, s) : s > 0}, so the
  // maximal invariant is trivial and the conditional sampler is the marginal.
  auto marginal_u = m.draw_u;
  m.inversion = GroupConditional{
      [](const Vec&) -> Vec { return {}; },
      [marginal_u](const Vec&, RandomStream& s) -> Vec { return marginal_u(s); },
      [](const Vec& z, const Vec& u) -> Vec {
        const double sigma = z[1] / u[1];
        return {z[0] - sigma * u[0], sigma};
      }};
  return m;
}

CDElement to_octonion(const Vec& v) {
  return CDElement(3, std::span<const double>(v.data(), v.size()));
}

Vec from_octonion(const CDElement& e) {
  return Vec(e.coords().begin(), e.coords().end());
}

FiducialModel octonion_model(std::function<Vec(RandomStream&)> u_sampler) {
  FiducialModel m;
  m.id = "octonion";
  m.param_dim = 8;
  m.data_dim = 8;
  m.draw_u = std::move(u_sampler);
  m.relation = [](const Vec& u, const Vec& theta) -> Vec {
    return from_octonion(cd_mul(to_octonion(theta), to_octonion(u)));
  };
  m.inversion = SimpleSolver{[](const Vec& z, const Vec& u) -> Vec {
    return from_octonion(right_divide(to_octonion(z), to_octonion(u)));
  }};
  return m;
}

FiducialModel octonion_model() {
  // iid standard normal coordinates: chi(8) radius, uniform direction
  return octonion_model([](RandomStream& s) -> Vec {
    Vec u(8);
    for (double& v : u) v = s.normal();
    return u;
  });
}

std::pair<double, double> uniform_fiducial_interval(double x_min,
                                                    double x_max) {
  const double range = x_max - x_min;
  if (range < 0 || range > 1)
    throw std::invalid_argument(
        "uniform_fiducial_interval: need 0 <= x_max - x_min <= 1");
  return {x_max - 1.0, x_min};
}

std::pair<double, double> exp_fiducial_params(double xbar, int n) {
  if (!(xbar > 0))
    throw std::invalid_argument("exp_fiducial_params: mean must be > 0");
  if (n < 1) throw std::invalid_argument("exp_fiducial_params: n >= 1");
  return {xbar * n, static_cast<double>(n)};
}

double inverse_gamma_cdf(double t, double scale, double shape) {
  if (t <= 0) return 0.0;
  return gamma_q(shape, scale / t);
}

Vec exp_ray_conditional_weights(const Vec& y, const Vec& alpha_grid) {
  require_positive_sample(y, "exp_ray_conditional_weights");
  if (alpha_grid.empty())
    throw std::invalid_argument("exp_ray_conditional_weights: empty grid");
  const double norm = std::sqrt(
      std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
  double s = 0.0;
  for (double v : y) s += v;
  s /= norm;  // sum of the unit-direction coordinates
  const double n = static_cast<double>(y.size());
  // log f_V(alpha * phi(y)) = -alpha * s for the standard exponential sample
  Vec logw(alpha_grid.size());
  double best = -1e300;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    const double a = alpha_grid[i];
    if (!(a > 0))
      throw std::invalid_argument(
          "exp_ray_conditional_weights: grid must be positive");
    logw[i] = -a * s + (n - 1.0) * std::log(a);
    best = std::max(best, logw[i]);
  }
  Vec w(alpha_grid.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(logw[i] - best);
    total += w[i];
  }
  if (!(total > 0))
    throw std::runtime_error(
        "exp_ray_conditional_weights: grid misses the mass");
  for (double& v : w) v /= total;
  return w;
}

double bartlett_statistic(const Vec& y) {
  require_positive_sample(y, "bartlett_statistic");
  double am = 0.0, lg = 0.0;
  for (double v : y) {
    am += v;
    lg += std::log(v);
  }
  const double n = static_cast<double>(y.size());
  return std::exp(lg / n) / (am / n);
}

BartlettCdfEstimator::BartlettCdfEstimator(int n, int inner_mc,
                                           RandomStream stream)
    : n_(n), inner_mc_(inner_mc) {
  if (n < 2) throw std::invalid_argument("BartlettCdfEstimator: n >= 2");
  if (inner_mc < 2)
    throw std::invalid_argument("BartlettCdfEstimator: inner_mc >= 2");
  uniforms_.resize(static_cast<std::size_t>(n) * inner_mc);
  for (double& u : uniforms_) u = uniform_open(stream);
}

double BartlettCdfEstimator::bartlett_at(std::size_t j, double alpha) const {
  const double* u = uniforms_.data() + j * static_cast<std::size_t>(n_);
  double am = 0.0, lg = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double y = gamma_inv_cdf(u[i], alpha, 1.0);
    am += y;
    lg += std::log(y);
  }
  const double n = static_cast<double>(n_);
  return std::exp(lg / n) / (am / n);
}

double BartlettCdfEstimator::cdf(double w, double alpha) const {
  if (!(alpha > 0))
    throw std::invalid_argument("BartlettCdfEstimator::cdf: alpha > 0");
  int count = 0;
  for (int j = 0; j < inner_mc_; ++j)
    if (bartlett_at(static_cast<std::size_t>(j), alpha) <= w) ++count;
  return static_cast<double>(count) / inner_mc_;
}

std::vector<double> BartlettCdfEstimator::alpha_roots(
    double w, const GammaConfig& cfg) const {
  std::vector<double> roots(static_cast<std::size_t>(inner_mc_));
  for (int j = 0; j < inner_mc_; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    double lo = cfg.alpha_lo, hi = cfg.alpha_hi;
    double wlo = bartlett_at(sj, lo), whi = bartlett_at(sj, hi);
    // W_j increases with alpha; widen the bracket geometrically if needed
    int expand = 0;
    while (wlo > w && expand < cfg.max_expand && lo > 1e-4) {
      lo *= 0.5;
      wlo = bartlett_at(sj, lo);
      ++expand;
    }
    while (whi < w && expand < cfg.max_expand) {
      hi *= 2.0;
      whi = bartlett_at(sj, hi);
      ++expand;
    }
    if (wlo > whi + 1e-9)
      throw std::runtime_error(
          "BartlettCdfEstimator: W_j non-monotone across bracket");
    if (wlo >= w) {
      roots[sj] = lo;  // clamped at the bracket end
      continue;
    }
    if (whi <= w) {
      roots[sj] = hi;
      continue;
    }
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (bartlett_at(sj, mid) <= w)
        lo = mid;
      else
        hi = mid;
    }
    roots[sj] = 0.5 * (lo + hi);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double gamma_alpha_solve(double w, double v2, int n, int inner_mc,
                         RandomStream stream,
                         std::pair<double, double> bracket) {
  if (!(w > 0) || !(w < 1))
    throw std::invalid_argument("gamma_alpha_solve: w must be in (0,1)");
  if (!(v2 > 0) || !(v2 < 1))
    throw std::invalid_argument("gamma_alpha_solve: v2 must be in (0,1)");
  BartlettCdfEstimator est(n, inner_mc, stream.substream(0));
  double lo = bracket.first, hi = bracket.second;
  if (!(lo > 0) || !(hi > lo))
    throw std::invalid_argument("gamma_alpha_solve: bad bracket");
  // F_hat(w; alpha) decreases in alpha
  double flo = est.cdf(w, lo), fhi = est.cdf(w, hi);
  const double slack = 3.0 / std::sqrt(static_cast<double>(inner_mc));
  int expand = 0;
  while ((flo < v2 || fhi > v2) && expand < 8) {
    if (flo < v2 && lo > 1e-4) {
      lo *= 0.5;
      flo = est.cdf(w, lo);
    } else if (fhi > v2) {
      hi *= 2.0;
      fhi = est.cdf(w, hi);
    } else {
      break;
    }
    ++expand;
  }
  if (flo + slack < fhi)
    throw std::runtime_error("gamma_alpha_solve: F_hat non-monotone across bracket");
  if (flo < v2 || fhi > v2)
    throw std::runtime_error("gamma_alpha_solve: no sign change in bracket");
  const double se = std::sqrt(std::max(v2 * (1.0 - v2), 0.25 / inner_mc) /
                              inner_mc);
  const double tol = std::max(2.0 * se, 1e-3);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = est.cdf(w, mid);
    if (std::fabs(f - v2) <= tol && (hi - lo) <= 1e-3 * mid) return mid;
    if (f > v2)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

FiducialDraws gamma_fiducial_sample(const Vec& data, std::size_t m,
                                    RandomStream stream,
                                    const GammaConfig& cfg) {
  require_positive_sample(data, "gamma_fiducial_sample");
  const int n = static_cast<int>(data.size());
  if (n < 2) throw std::invalid_argument("gamma_fiducial_sample: n >= 2");
  const double w = bartlett_statistic(data);
  double ybar = 0.0;
  for (double v : data) ybar += v;
  ybar /= n;

  BartlettCdfEstimator est(n, cfg.inner_mc, stream.substream(0));
  const std::vector<double> roots =
      est.alpha_roots(w, cfg);  // sorted; quantiles invert F_hat under CRN
  const auto count = roots.size();

  RandomStream vs = stream.substream(1);
  std::vector<Vec> draws(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double v1 = uniform_open(vs);
    const double v2 = uniform_open(vs);
    auto k = static_cast<std::size_t>(
        std::floor((1.0 - v2) * static_cast<double>(count)));
    k = std::min(k, count - 1);
    const double alpha = roots[k];
    const double ubar = gamma_inv_cdf(v1, n * alpha, 1.0 / n);
    const double beta = ybar / ubar;
    draws[j] = {alpha, beta};
  }
  FiducialDraws d = make_equal_weight_draws(std::move(draws));
  d.model_id = "gamma";
  d.data = data;
  d.seed = stream.seed;
  d.stream_id = stream.stream_id;
  return d;
}

FiducialDraws behrens_fisher_draws(const BehrensFisherData& bf, std::size_t m,
                                   RandomStream stream) {
  if (bf.n1 < 2 || bf.n2 < 2)
    throw std::invalid_argument("behrens_fisher_draws: group sizes >= 2");
  if (bf.s1 < 0 || bf.s2 < 0)
    throw std::invalid_argument("behrens_fisher_draws: s >= 0");
  RandomStream s = stream.substream(0);
  const double c1 = bf.s1 / std::sqrt(static_cast<double>(bf.n1));
  const double c2 = bf.s2 / std::sqrt(static_cast<double>(bf.n2));
  std::vector<Vec> draws(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double mu1 = bf.xbar1 + c1 * (c1 > 0 ? s.student_t(bf.n1 - 1) : 0.0);
    const double mu2 = bf.xbar2 + c2 * (c2 > 0 ? s.student_t(bf.n2 - 1) : 0.0);
    draws[j] = {mu1 - mu2};
  }
  FiducialDraws d = make_equal_weight_draws(std::move(draws));
  d.model_id = "behrens-fisher";
  d.data = {bf.xbar1, bf.s1, static_cast<double>(bf.n1),
            bf.xbar2, bf.s2, static_cast<double>(bf.n2)};
  d.seed = stream.seed;
  d.stream_id = stream.stream_id;
  return d;
}

}  // namespace fid
