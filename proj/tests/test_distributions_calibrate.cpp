#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kmjack/calibrate.hpp"
#include "kmjack/distributions.hpp"
#include "kmjack/errors.hpp"
#include "kmjack/stats.hpp"

using namespace kmjack;

TEST_SUITE("distributions") {

TEST_CASE("analytic means") {
  CHECK(DistSpec::exponential(0.2).mean() == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(DistSpec::lognormal(1.1, 1.0).mean() == doctest::Approx(std::exp(1.6)).epsilon(1e-14));
  CHECK(DistSpec::gamma(4.0, 1.0).mean() == doctest::Approx(4.0).epsilon(1e-14));
  const double scale = std::cbrt(38.96);
  CHECK(scale == doctest::Approx(3.39045).epsilon(1e-4));
  CHECK(DistSpec::weibull(3.0, scale).mean() ==
        doctest::Approx(scale * std::tgamma(4.0 / 3.0)).epsilon(1e-14));
  CHECK(DistSpec::uniform(2.0, 6.0).mean() == 4.0);
  CHECK(DistSpec::normal(-1.0, 2.0).mean() == -1.0);
}

TEST_CASE("survival functions") {
  CHECK(DistSpec::exponential(0.2).survival(5.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(DistSpec::weibull(3.0, 2.0).survival(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(DistSpec::lognormal(1.1, 1.0).survival(std::exp(1.1)) == doctest::Approx(0.5));
  CHECK(DistSpec::uniform(1.0, 3.0).survival(0.5) == 1.0);
  CHECK(DistSpec::uniform(1.0, 3.0).survival(2.0) == doctest::Approx(0.5));
  CHECK(DistSpec::uniform(1.0, 3.0).survival(3.5) == 0.0);
  for (const auto& d : {DistSpec::gamma(4.0, 1.0), DistSpec::lognormal(0.0, 0.5)})
    CHECK(d.survival(0.0) == 1.0);

  // gamma survival against quadrature of its pdf
  const DistSpec g = DistSpec::gamma(4.0, 1.0);
  auto pdf = [](double t) { return t * t * t * std::exp(-t) / 6.0; };
  for (double t : {1.0, 4.0, 9.0})
    CHECK(g.survival(t) == doctest::Approx(1.0 - integrate(pdf, 0.0, t, 1e-12)).epsilon(1e-9));
}

TEST_CASE("parameter validation and parsing") {
  CHECK_THROWS_AS(DistSpec::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DistSpec::gamma(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistSpec::uniform(2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(DistSpec::parse("nope:1"), std::invalid_argument);
  CHECK_THROWS_AS(DistSpec::parse("exp:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(DistSpec::parse("exp:abc"), std::invalid_argument);

  const DistSpec d = DistSpec::parse("gamma:4,1");
  CHECK(d.family == DistFamily::gamma);
  CHECK(d.p1 == 4.0);
  CHECK(d.p2 == 1.0);
  CHECK(DistSpec::parse("exp:0.2").mean() == doctest::Approx(5.0));
}

}  // TEST_SUITE

TEST_SUITE("calibrate") {

TEST_CASE("adaptive Simpson") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("exponential censoring closed form") {
  CHECK(calibrate_censoring(DistSpec::exponential(1.0), CensorFamily::exp_rate, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(calibrate_censoring(DistSpec::exponential(0.2), CensorFamily::exp_rate, 0.5) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(calibrate_censoring(DistSpec::exponential(0.2), CensorFamily::exp_rate, 0.75) ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK_THROWS_AS(calibrate_censoring(DistSpec::exponential(1.0), CensorFamily::exp_rate, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_censoring(DistSpec::exponential(1.0), CensorFamily::exp_rate, 1.0),
                  std::invalid_argument);
}

TEST_CASE("exponential censoring of a non-exponential lifetime") {
  // solved rate reproduces the target when checked by quadrature
  const DistSpec life = DistSpec::gamma(4.0, 1.0);
  for (double p : {0.2, 0.5, 0.8}) {
    const double lambda = calibrate_censoring(life, CensorFamily::exp_rate, p);
    auto integrand = [&](double u) {
      return u >= 1.0 ? 0.0 : life.survival(-std::log1p(-u) / lambda);
    };
    CHECK(integrate(integrand, 0.0, 1.0, 1e-10) == doctest::Approx(p).epsilon(2e-4));
  }
}

TEST_CASE("uniform censoring solves the tail-average equation") {
  for (const auto& life : {DistSpec::lognormal(1.1, 1.0), DistSpec::gamma(4.0, 1.0),
                           DistSpec::weibull(3.0, std::cbrt(38.96))}) {
    CAPTURE(life.label());
    for (double p : {0.1, 0.5, 0.9}) {
      const double a = calibrate_censoring(life, CensorFamily::uniform_a_2a, p);
      const double check =
          integrate([&](double c) { return life.survival(c); }, a, 2.0 * a, 1e-10) / a;
      CHECK(std::fabs(check - p) <= 1.1e-4);
    }
  }
}

TEST_CASE("calibration validated by Monte Carlo") {
  const DistSpec life = DistSpec::gamma(4.0, 1.0);
  const double p = 0.3;
  const double a = calibrate_censoring(life, CensorFamily::uniform_a_2a, p);
  Rng rng(314159);
  const int m = 100000;
  int censored = 0;
  for (int i = 0; i < m; ++i) {
    const double t = life.sample(rng);
    const double c = rng.uniform(a, 2.0 * a);
    censored += c < t;
  }
  CHECK(std::fabs(static_cast<double>(censored) / m - p) < 0.01);
}

TEST_CASE("log-uniform calibrator matches a direct evaluation") {
  Rng rng(99);
  std::vector<double> z(20000);
  for (auto& v : z) v = rng.normal(10.0, 3.0);
  const LogUniformCalibrator cal(z);

  for (double a : {4.0, 8.0, 12.0, 20.0}) {
    double direct = 0.0;
    for (double v : z) {
      const double q = (v - a) / a;
      direct += std::clamp(q, 0.0, 1.0);
    }
    direct /= z.size();
    CHECK(cal.censored_probability(a) == doctest::Approx(direct).epsilon(1e-12));
  }

  for (double p : {0.1, 0.4, 0.7}) {
    const double a = cal.solve(p);
    CHECK(std::fabs(cal.censored_probability(a) - p) <= 1.1e-4);
  }
  CHECK_THROWS_AS(cal.solve(0.0), std::invalid_argument);
}

}  // TEST_SUITE
