#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fid/random.hpp"
#include "fid/special.hpp"

using namespace fid;

TEST_SUITE("numerics") {

TEST_CASE("digamma matches reference values") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-10));
  CHECK(digamma(10.0) == doctest::Approx(2.2517525890667211).epsilon(1e-10));
  CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-10));
  CHECK(digamma(100.0) == doctest::Approx(4.600161852738087).epsilon(1e-10));
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-1.5), std::domain_error);
}

TEST_CASE("digamma recurrence psi(x+1) = psi(x) + 1/x") {
  for (double x : {0.05, 0.3, 1.7, 4.2, 33.0, 1234.5}) {
    CHECK(digamma(x + 1.0) ==
          doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-11));
  }
}

TEST_CASE("ln_gamma matches reference values") {
  CHECK(ln_gamma(5.0) == doctest::Approx(3.1780538303479458).epsilon(1e-12));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-12));
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(ln_gamma(2.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  // ln(9!) for x = 10
  CHECK(ln_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
}

TEST_CASE("ln_gamma recurrence") {
  for (double x : {0.1, 0.9, 3.3, 17.0, 250.0}) {
    CHECK(ln_gamma(x + 1.0) ==
          doctest::Approx(ln_gamma(x) + std::log(x)).epsilon(1e-12));
  }
}

TEST_CASE("regularized incomplete gamma") {
  // P(1, x) = 1 - exp(-x)
  for (double x : {0.1, 1.0, 2.5, 7.0}) {
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
  }
  // complementarity
  for (double a : {0.3, 1.0, 4.5, 20.0}) {
    for (double x : {0.2, 1.0, 5.0, 30.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  // chi-squared_2 at its median: P(1, ln 2 * 1) with shape 1 scale 2
  CHECK(gamma_cdf(2.0 * std::log(2.0), 1.0, 2.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gamma inverse CDF round trip") {
  for (double shape : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
    for (double p : {1e-6, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999999}) {
      const double x = gamma_inv_cdf(p, shape, 1.0);
      CHECK(gamma_cdf(x, shape, 1.0) == doctest::Approx(p).epsilon(1e-9));
    }
  }
  // scale just multiplies
  CHECK(gamma_inv_cdf(0.3, 2.0, 7.0) ==
        doctest::Approx(7.0 * gamma_inv_cdf(0.3, 2.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("normal CDF and quantile") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
  for (double p : {1e-8, 0.001, 0.025, 0.5, 0.7, 0.999, 1.0 - 1e-8}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("incomplete beta and Student t") {
  // I_x(1, b) = 1 - (1-x)^b
  CHECK(beta_inc(1.0, 3.0, 0.25) ==
        doctest::Approx(1.0 - std::pow(0.75, 3.0)).epsilon(1e-12));
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(beta_inc(2.5, 4.0, 0.3) ==
        doctest::Approx(1.0 - beta_inc(4.0, 2.5, 0.7)).epsilon(1e-11));
  // t_1 is Cauchy: F(1) = 3/4
  CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(student_t_cdf(0.0, 7.0) == doctest::Approx(0.5).epsilon(1e-13));
  // large df approaches the normal
  CHECK(student_t_cdf(1.2, 1e6) ==
        doctest::Approx(normal_cdf(1.2)).epsilon(1e-5));
}

TEST_CASE("KS statistic on a hand-computed sample") {
  // sorted sample {0.1, 0.2, 0.8}: sup deviation is just above the second
  // point, 2/3 - 0.2 = 7/15
  const std::vector<double> s{0.1, 0.2, 0.8};
  CHECK(ks_statistic(s) == doctest::Approx(7.0 / 15.0).epsilon(1e-12));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("KS critical value and Kolmogorov tail") {
  // classical asymptotic constant at alpha = 0.05 is 1.3581 / sqrt(n)
  CHECK(ks_critical_value(100, 0.05) == doctest::Approx(0.13581).epsilon(1e-3));
  CHECK(kolmogorov_tail(1.3581015) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_tail(1.6276236) == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("stream output is a pure function of (seed, stream_id, counter)") {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  RandomStream c(42, 8);
  bool any_diff = false;
  RandomStream a2(42, 7);
  for (int i = 0; i < 100; ++i) any_diff |= (a2.next_u64() != c.next_u64());
  CHECK(any_diff);
  // resuming from a saved counter continues the same sequence
  RandomStream d(42, 7);
  for (int i = 0; i < 50; ++i) d.next_u64();
  RandomStream e = d;  // plain struct copy carries the counter
  CHECK(d.next_u64() == e.next_u64());
}

TEST_CASE("substreams do not overlap their parent") {
  RandomStream parent(9, 3);
  RandomStream child = parent.substream(0);
  std::vector<std::uint64_t> p, c;
  for (int i = 0; i < 1000; ++i) {
    p.push_back(parent.next_u64());
    c.push_back(child.next_u64());
  }
  std::sort(p.begin(), p.end());
  for (std::uint64_t v : c)
    CHECK(!std::binary_search(p.begin(), p.end(), v));
}

TEST_CASE("uniform draws pass KS at 1e6") {
  RandomStream s(123, 0);
  std::vector<double> u(1000000);
  for (double& v : u) v = s.uniform01();
  std::sort(u.begin(), u.end());
  CHECK(ks_statistic(u) < 0.002);
}

TEST_CASE("normal draws pass KS after CDF transform") {
  RandomStream s(124, 0);
  std::vector<double> u(200000);
  for (double& v : u) v = normal_cdf(s.normal());
  std::sort(u.begin(), u.end());
  CHECK(ks_statistic(u) < 0.004);
}

TEST_CASE("gamma draws pass KS for small and large shapes") {
  for (double shape : {0.4, 1.0, 3.5, 40.0}) {
    RandomStream s(125, static_cast<std::uint64_t>(shape * 100));
    std::vector<double> u(100000);
    for (double& v : u) v = gamma_p(shape, s.gamma(shape));
    std::sort(u.begin(), u.end());
    CAPTURE(shape);
    CHECK(ks_statistic(u) < 0.006);
  }
}

TEST_CASE("student t and chi draws pass KS") {
  for (double df : {2.0, 4.0, 9.0}) {
    RandomStream s(126, static_cast<std::uint64_t>(df));
    std::vector<double> u(50000);
    for (double& v : u) v = student_t_cdf(s.student_t(df), df);
    std::sort(u.begin(), u.end());
    CAPTURE(df);
    CHECK(ks_statistic(u) < 0.008);
  }
  RandomStream s(127, 0);
  std::vector<double> u(50000);
  const double df = 4.0;
  for (double& v : u) {
    const double x = s.chi(df);
    v = gamma_p(df / 2.0, x * x / 2.0);
  }
  std::sort(u.begin(), u.end());
  CHECK(ks_statistic(u) < 0.008);
}

TEST_CASE("uniform_pos never returns zero") {
  RandomStream s(128, 0);
  for (int i = 0; i < 100000; ++i) {
    const double v = s.uniform_pos();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("draw dispatches on DistSpec and validates parameters") {
  RandomStream s(129, 0);
  CHECK(draw(s, DistSpec::uniform01()) >= 0.0);
  CHECK(std::isfinite(draw(s, DistSpec::std_normal())));
  CHECK(draw(s, DistSpec::gamma(2.0)) > 0.0);
  CHECK(std::isfinite(draw(s, DistSpec::student_t(3.0))));
  CHECK(draw(s, DistSpec::chi(4.0)) > 0.0);
  CHECK_THROWS_AS(draw(s, DistSpec::gamma(-1.0)), std::invalid_argument);
  CHECK_THROWS_AS(draw(s, DistSpec::student_t(0.0)), std::invalid_argument);
}

}  // TEST_SUITE
