#include "fid/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fid/special.hpp"

namespace fid {
namespace {

double sq(double x) { return x * x; }

void require_dim(const Vec& theta, const Vec& a) {
  if (theta.size() != a.size() || theta.empty())
    throw std::invalid_argument("loss: dimension mismatch");
}

}  // namespace

double bernoulli_arc_distance(double p, double a) {
  if (p < 0 || p > 1 || a < 0 || a > 1)
    throw std::domain_error("bernoulli_arc_distance: arguments in [0,1]");
  return std::fabs(std::asin(std::sqrt(p)) - std::asin(std::sqrt(a)));
}

double hellinger_distance(double affinity) {
  if (affinity < -1e-12 || affinity > 1.0 + 1e-12)
    throw std::domain_error("hellinger_distance: affinity outside [0,1]");
  return std::acos(std::clamp(affinity, 0.0, 1.0));
}

double InvariantLoss::operator()(const Vec& theta, const Vec& a) const {
  require_dim(theta, a);
  switch (kind) {
    case LossKind::squared_error: {
      double s = 0;
      for (std::size_t i = 0; i < theta.size(); ++i) s += sq(theta[i] - a[i]);
      return s;
    }
    case LossKind::log_squared: {
      double s = 0;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        if (!(theta[i] > 0) || !(a[i] > 0))
          throw std::domain_error("log_squared: arguments must be positive");
        s += sq(std::log(theta[i]) - std::log(a[i]));
      }
      return s;
    }
    case LossKind::octonion_relative: {
      double num = 0, den = 0;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        num += sq(theta[i] - a[i]);
        den += sq(theta[i]);
      }
      if (!(den > 0))
        throw std::domain_error("octonion_relative: theta must be nonzero");
      return num / den;
    }
    case LossKind::bernoulli_arc_sq:
      return sq(bernoulli_arc_distance(theta[0], a[0]));
    case LossKind::hellinger_sq: {
      if (!(theta[0] > 0) || !(a[0] > 0))
        throw std::domain_error("hellinger_sq: scales must be positive");
      // affinity of Exp(theta) vs Exp(a): 2 sqrt(theta a) / (theta + a)
      const double aff =
          2.0 * std::sqrt(theta[0] * a[0]) / (theta[0] + a[0]);
      return sq(hellinger_distance(std::min(aff, 1.0)));
    }
  }
  throw std::invalid_argument("loss: unknown kind");
}

double loss_eval(const InvariantLoss& loss, const Vec& theta, const Vec& a) {
  return loss(theta, a);
}

double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Vec optimal_action(const InvariantLoss& loss, const FiducialDraws& d) {
  if (d.draws.empty()) throw std::invalid_argument("optimal_action: empty draws");
  const std::size_t dim = d.draws[0].size();
  if (d.draws.size() == 1) return d.draws[0];

  if (loss.kind == LossKind::squared_error) {
    Vec a(dim, 0.0);
    for (std::size_t j = 0; j < d.draws.size(); ++j)
      for (std::size_t k = 0; k < dim; ++k)
        a[k] += d.weights[j] * d.draws[j][k];
    return a;
  }
  if (loss.kind == LossKind::log_squared) {
    Vec a(dim, 0.0);
    for (std::size_t j = 0; j < d.draws.size(); ++j)
      for (std::size_t k = 0; k < dim; ++k) {
        if (!(d.draws[j][k] > 0))
          throw std::domain_error("optimal_action: log_squared needs "
                                  "positive draws");
        a[k] += d.weights[j] * std::log(d.draws[j][k]);
      }
    for (double& v : a) v = std::exp(v);
    return a;
  }

  // derivative-free: coordinatewise golden section over the draw range
  Vec lo(dim, std::numeric_limits<double>::infinity());
  Vec hi(dim, -std::numeric_limits<double>::infinity());
  Vec a(dim, 0.0);
  for (std::size_t j = 0; j < d.draws.size(); ++j)
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], d.draws[j][k]);
      hi[k] = std::max(hi[k], d.draws[j][k]);
      a[k] += d.weights[j] * d.draws[j][k];
    }
  auto avg_loss = [&](const Vec& cand) {
    double s = 0;
    for (std::size_t j = 0; j < d.draws.size(); ++j)
      s += d.weights[j] * loss(d.draws[j], cand);
    return s;
  };
  const int sweeps = dim == 1 ? 1 : 3;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (hi[k] - lo[k] <= 0) {
        a[k] = lo[k];
        continue;
      }
      Vec cand = a;
      a[k] = golden_section_minimize(
          [&](double v) {
            cand[k] = v;
            return avg_loss(cand);
          },
          lo[k], hi[k], 1e-8);
    }
  }
  return a;
}

double exp_optimal_estimator(double xbar, int n) {
  if (!(xbar > 0))
    throw std::invalid_argument("exp_optimal_estimator: mean must be > 0");
  if (n < 1) throw std::invalid_argument("exp_optimal_estimator: n >= 1");
  return xbar * std::exp(std::log(static_cast<double>(n)) -
                         digamma(static_cast<double>(n)));
}

double uniform_optimal_estimator(double x_min, double x_max) {
  const double range = x_max - x_min;
  if (range < 0 || range > 1)
    throw std::invalid_argument(
        "uniform_optimal_estimator: need 0 <= x_max - x_min <= 1");
  return 0.5 * (x_min + x_max) - 0.5;
}

Vec gamma_log_estimator(const FiducialDraws& d,
                        const std::function<Vec(const Vec&)>& h) {
  if (d.draws.empty())
    throw std::invalid_argument("gamma_log_estimator: empty draws");
  Vec acc;
  for (std::size_t j = 0; j < d.draws.size(); ++j) {
    const Vec hv = h(d.draws[j]);
    if (acc.empty()) acc.assign(hv.size(), 0.0);
    for (std::size_t k = 0; k < hv.size(); ++k) {
      if (!(hv[k] > 0))
        throw std::domain_error(
            "gamma_log_estimator: h must be positive at every draw");
      acc[k] += d.weights[j] * std::log(hv[k]);
    }
  }
  for (double& v : acc) v = std::exp(v);
  return acc;
}

double octonion_optimal_action(const FiducialDraws& draws_at_unit) {
  if (draws_at_unit.draws.empty())
    throw std::invalid_argument("octonion_optimal_action: empty draws");
  // minimize E |T - c 1|^2 / |T|^2 over real c: quadratic in c
  double num = 0, den = 0;
  for (std::size_t j = 0; j < draws_at_unit.draws.size(); ++j) {
    const Vec& t = draws_at_unit.draws[j];
    double n2 = 0;
    for (double v : t) n2 += sq(v);
    if (!(n2 > 0))
      throw std::domain_error("octonion_optimal_action: zero draw");
    num += draws_at_unit.weights[j] * t[0] / n2;
    den += draws_at_unit.weights[j] / n2;
  }
  return num / den;
}

RiskEstimate risk_direct(const FiducialModel& model, const Vec& theta,
                         const DecisionRule& rule, const InvariantLoss& loss,
                         std::size_t reps, RandomStream stream) {
  if (reps < 2) throw std::invalid_argument("risk_direct: reps >= 2");
  const std::size_t chunk = 4096;
  const std::size_t nchunks = (reps + chunk - 1) / chunk;
  std::vector<double> sums(nchunks, 0.0), sumsq(nchunks, 0.0);
  run_chunked(reps, chunk, [&](std::size_t c, std::size_t, std::size_t count) {
    RandomStream s = stream.substream(c);
    double acc = 0, acc2 = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const Vec x = model.relation(model.draw_u(s), theta);
      const double l = loss(theta, rule.estimate(x));
      acc += l;
      acc2 += l * l;
    }
    sums[c] = acc;
    sumsq[c] = acc2;
  });
  double sum = 0, sum2 = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    sum += sums[c];
    sum2 += sumsq[c];
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

RiskEstimate risk_fiducial(const FiducialModel& model, const Vec& theta,
                           const DecisionRule& rule, const InvariantLoss& loss,
                           std::size_t reps, std::size_t m,
                           RandomStream stream) {
  if (reps < 2) throw std::invalid_argument("risk_fiducial: reps >= 2");
  if (m < 1) throw std::invalid_argument("risk_fiducial: m >= 1");
  const std::size_t chunk = 64;
  const std::size_t nchunks = (reps + chunk - 1) / chunk;
  std::vector<double> sums(nchunks, 0.0), sumsq(nchunks, 0.0);
  run_chunked(reps, chunk, [&](std::size_t c, std::size_t first,
                               std::size_t count) {
    double acc = 0, acc2 = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t r = first + i;
      RandomStream data_s = stream.substream(2 * r);
      const Vec x = model.relation(model.draw_u(data_s), theta);
      const FiducialDraws fd =
          fiducial_sample(model, x, stream.substream(2 * r + 1), m);
      const Vec a = rule.estimate(x);
      double inner = 0;
      for (std::size_t j = 0; j < fd.draws.size(); ++j)
        inner += fd.weights[j] * loss(fd.draws[j], a);
      acc += inner;
      acc2 += inner * inner;
    }
    sums[c] = acc;
    sumsq[c] = acc2;
  });
  double sum = 0, sum2 = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    sum += sums[c];
    sum2 += sumsq[c];
  }
  const double n = static_cast<double>(reps);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

double equivariance_check(const DecisionRule& rule,
                          const GroupActionSampler& action,
                          const std::function<Vec(RandomStream&)>& data_sampler,
                          std::size_t trials, RandomStream stream) {
  if (trials < 1) throw std::invalid_argument("equivariance_check: trials >= 1");
  double worst = 0.0;
  RandomStream s = stream.substream(0);
  for (std::size_t t = 0; t < trials; ++t) {
    const Vec g = action.draw_g(s);
    const Vec x = data_sampler(s);
    const Vec lhs = rule.estimate(action.act_data(g, x));
    const Vec rhs = action.act_action(g, rule.estimate(x));
    double scale = 1.0, diff = 0.0;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      scale = std::max(scale, std::fabs(rhs[k]));
      diff = std::max(diff, std::fabs(lhs[k] - rhs[k]));
    }
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

}  // namespace fid
