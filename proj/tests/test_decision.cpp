#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "fid/decision.hpp"
#include "fid/models.hpp"
#include "fid/special.hpp"

using namespace fid;

TEST_SUITE("decision") {

TEST_CASE("loss oracles") {
  const InvariantLoss sq{LossKind::squared_error};
  CHECK(sq({1.0, 2.0}, {0.0, 4.0}) == doctest::Approx(5.0));
  const InvariantLoss ls{LossKind::log_squared};
  CHECK(ls({std::exp(1.0)}, {1.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ls({-1.0}, {1.0}), std::domain_error);
  const InvariantLoss oc{LossKind::octonion_relative};
  CHECK(oc({2.0, 0.0}, {1.0, 0.0}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(sq({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("bernoulli arc distance") {
  CHECK(bernoulli_arc_distance(0.0, 1.0) ==
        doctest::Approx(std::asin(1.0)).epsilon(1e-14));  // pi/2
  CHECK(bernoulli_arc_distance(0.5, 0.5) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(bernoulli_arc_distance(-0.1, 0.5), std::domain_error);
}

TEST_CASE("Hellinger distance for exponential scales via numeric affinity") {
  // affinity of Exp(1) and Exp(2) by trapezoid integration of
  // sqrt(f g) = sqrt(1/2) exp(-3x/4): closed value 2 sqrt(2) / 3
  const int steps = 400000;
  const double hi = 60.0, h = hi / steps;
  double aff = 0;
  for (int i = 0; i < steps; ++i) {
    const double x0 = i * h, x1 = x0 + h;
    auto g = [](double x) {
      return std::sqrt(std::exp(-x) * 0.5 * std::exp(-x / 2.0));
    };
    aff += 0.5 * (g(x0) + g(x1)) * h;
  }
  CHECK(aff == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-6));
  const InvariantLoss hl{LossKind::hellinger_sq};
  const double d = hl({1.0}, {2.0});
  CHECK(std::sqrt(d) == doctest::Approx(std::acos(aff)).epsilon(1e-6));
  // invariance under common rescaling
  CHECK(hl({3.0}, {6.0}) == doctest::Approx(d).epsilon(1e-12));
  CHECK(hellinger_distance(1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(hellinger_distance(1.5), std::domain_error);
}

TEST_CASE("optimal action closed forms on hand-built draws") {
  FiducialDraws d;
  d.draws = {{1.0}, {2.0}, {4.0}};
  d.weights = {0.25, 0.5, 0.25};
  CHECK(optimal_action({LossKind::squared_error}, d)[0] ==
        doctest::Approx(2.25));
  // weighted geometric mean: exp(0.25 ln1 + 0.5 ln2 + 0.25 ln4) = 2
  CHECK(optimal_action({LossKind::log_squared}, d)[0] == doctest::Approx(2.0));
  FiducialDraws single;
  single.draws = {{7.0}};
  single.weights = {1.0};
  CHECK(optimal_action({LossKind::hellinger_sq}, single)[0] ==
        doctest::Approx(7.0));
}

TEST_CASE("derivative-free minimizer agrees with a grid search") {
  FiducialDraws d;
  RandomStream s(41, 0);
  for (int j = 0; j < 400; ++j) d.draws.push_back({0.2 + s.gamma(3.0)});
  d.weights.assign(d.draws.size(), 1.0 / d.draws.size());
  const InvariantLoss loss{LossKind::hellinger_sq};
  const double a = optimal_action(loss, d)[0];
  // brute-force oracle
  double best = 1e300, best_x = 0;
  for (int i = 1; i < 20000; ++i) {
    const double x = 0.2 + i * (12.0 / 20000);
    double acc = 0;
    for (std::size_t j = 0; j < d.draws.size(); ++j)
      acc += d.weights[j] * loss(d.draws[j], {x});
    if (acc < best) {
      best = acc;
      best_x = x;
    }
  }
  CHECK(a == doctest::Approx(best_x).epsilon(1e-2));
}

TEST_CASE("exponential optimal estimator closed form") {
  // n = 1: x * e^gamma; n = 2: x * 2 exp(-psi(2))
  CHECK(exp_optimal_estimator(1.0, 1) ==
        doctest::Approx(std::exp(0.5772156649015329)).epsilon(1e-10));
  CHECK(exp_optimal_estimator(2.0, 5) ==
        doctest::Approx(2.0 * std::exp(std::log(5.0) - digamma(5.0)))
            .epsilon(1e-12));
  CHECK(exp_optimal_estimator(1.0, 100) == doctest::Approx(1.0050125).epsilon(1e-5));
  CHECK_THROWS_AS(exp_optimal_estimator(-1.0, 5), std::invalid_argument);
}

TEST_CASE("uniform optimal estimator closed form") {
  CHECK(uniform_optimal_estimator(0.3, 0.9) == doctest::Approx(0.1));
  CHECK_THROWS_AS(uniform_optimal_estimator(0.0, 1.2), std::invalid_argument);
}

TEST_CASE("optimal_action(log_squared) matches the closed form on the "
          "exponential fiducial") {
  const int n = 5;
  const double xbar = 2.0;
  const FiducialModel m = exponential_scale_model(n);
  const FiducialDraws d = fiducial_sample(m, {xbar}, RandomStream(42, 0),
                                          200000);
  const double mc = optimal_action({LossKind::log_squared}, d)[0];
  CHECK(mc == doctest::Approx(exp_optimal_estimator(xbar, n)).epsilon(3e-3));
}

TEST_CASE("gamma log estimator is the componentwise geometric mean") {
  FiducialDraws d;
  d.draws = {{1.0, 8.0}, {4.0, 2.0}};
  d.weights = {0.5, 0.5};
  const Vec est = gamma_log_estimator(d, [](const Vec& t) { return t; });
  CHECK(est[0] == doctest::Approx(2.0));
  CHECK(est[1] == doctest::Approx(4.0));
  // h can reparametrize, e.g. the mean alpha * beta
  const Vec mean = gamma_log_estimator(
      d, [](const Vec& t) { return Vec{t[0] * t[1]}; });
  CHECK(mean[0] == doctest::Approx(std::sqrt(8.0 * 8.0)));
}

TEST_CASE("octonion closed-form action matches brute force") {
  FiducialDraws d;
  RandomStream s(43, 0);
  for (int j = 0; j < 200; ++j) {
    Vec t(8);
    for (double& v : t) v = s.normal();
    t[0] += 2.0;  // keep away from zero
    d.draws.push_back(t);
  }
  d.weights.assign(d.draws.size(), 1.0 / d.draws.size());
  const double c = octonion_optimal_action(d);
  const InvariantLoss loss{LossKind::octonion_relative};
  auto obj = [&](double cand) {
    Vec a(8, 0.0);
    a[0] = cand;
    double acc = 0;
    for (std::size_t j = 0; j < d.draws.size(); ++j)
      acc += d.weights[j] * loss(d.draws[j], a);
    return acc;
  };
  const double brute = golden_section_minimize(obj, -5.0, 5.0, 1e-10);
  CHECK(c == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("golden section finds a quadratic minimum") {
  const double x = golden_section_minimize(
      [](double v) { return (v - 2.0) * (v - 2.0); }, -10.0, 10.0, 1e-9);
  CHECK(x == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("risk of the sample mean under the location model is 1/n") {
  const int n = 3;
  const FiducialModel m = location_model(1, n);
  const DecisionRule mean{[n](const Vec& x) -> Vec {
                            return {std::accumulate(x.begin(), x.end(), 0.0) /
                                    n};
                          },
                          "mean"};
  const RiskEstimate r = risk_direct(m, {0.7}, mean,
                                     {LossKind::squared_error}, 40000,
                                     RandomStream(44, 0));
  CHECK(std::fabs(r.value - 1.0 / n) < 4.0 * r.se);
  CHECK(r.se < 0.01);
}

TEST_CASE("fiducial risk agrees with direct risk for an equivariant rule") {
  const int n = 5;
  const FiducialModel m = exponential_scale_model(n);
  const double factor = std::exp(std::log(double(n)) - digamma(double(n)));
  const DecisionRule opt{[factor](const Vec& x) -> Vec {
                           return {x[0] * factor};
                         },
                         "optimal"};
  const InvariantLoss loss{LossKind::log_squared};
  const RiskEstimate rd =
      risk_direct(m, {1.0}, opt, loss, 20000, RandomStream(45, 0));
  const RiskEstimate rf =
      risk_fiducial(m, {1.0}, opt, loss, 5000, 200, RandomStream(46, 0));
  CHECK(std::fabs(rd.value - rf.value) <
        4.0 * std::sqrt(rd.se * rd.se + rf.se * rf.se));
}

TEST_CASE("equivariance check separates equivariant from offset rules") {
  const int n = 5;
  const FiducialModel m = exponential_scale_model(n);
  GroupActionSampler scaling{
      [](RandomStream& s) -> Vec { return {std::exp(s.normal())}; },
      [](const Vec& g, const Vec& x) -> Vec { return {g[0] * x[0]}; },
      [](const Vec& g, const Vec& a) -> Vec { return {g[0] * a[0]}; }};
  auto sampler = [](RandomStream& s) -> Vec { return {0.1 + s.gamma(2.0)}; };
  const double factor = std::exp(std::log(double(n)) - digamma(double(n)));
  const DecisionRule good{[factor](const Vec& x) -> Vec {
                            return {x[0] * factor};
                          },
                          "optimal"};
  const DecisionRule bad{[](const Vec& x) -> Vec { return {x[0] + 0.5}; },
                         "offset"};
  CHECK(equivariance_check(good, scaling, sampler, 200, RandomStream(47, 0)) <
        kEquivarianceTol);
  CHECK(equivariance_check(bad, scaling, sampler, 200, RandomStream(47, 0)) >
        1e-2);
}

}  // TEST_SUITE
