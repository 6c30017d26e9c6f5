#include <cmath>

#include "doctest.h"
#include "kmjack/calibrate.hpp"
#include "kmjack/stats.hpp"

using namespace kmjack::stats;

TEST_SUITE("stats") {

TEST_CASE("normal cdf/sf/pdf reference values") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(norm_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(norm_sf(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
  CHECK(norm_sf(-1.0) + norm_sf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // far tail keeps relative accuracy
  CHECK(norm_sf(10.0) == doctest::Approx(7.619853024160527e-24).epsilon(1e-10));
}

TEST_CASE("ppf/isf invert the cdf") {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6}) {
    CHECK(norm_cdf(norm_ppf(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  for (double q : {1e-300, 1e-100, 1e-12, 0.2, 0.5}) {
    CHECK(norm_sf(norm_isf(q)) == doctest::Approx(q).epsilon(1e-10));
  }
  CHECK(norm_ppf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(std::isinf(norm_ppf(0.0)));
  CHECK(std::isinf(norm_ppf(1.0)));
  CHECK_THROWS(norm_ppf(-0.1));
  CHECK_THROWS(norm_ppf(1.1));
}

TEST_CASE("truncated normal mean (inverse Mills)") {
  CHECK(truncated_normal_mean(0.0) == doctest::Approx(0.7978845608028654).epsilon(1e-10));
  CHECK(truncated_normal_mean(1.0) ==
        doctest::Approx(0.24197072451914337 / 0.15865525393145705).epsilon(1e-10));
  // asymptotic branch
  CHECK(truncated_normal_mean(10.0) == 10.0 + 1.0 / 10.0);
}

TEST_CASE("truncated normal median") {
  CHECK(truncated_normal_median(0.0) == doctest::Approx(0.6744897501960817).epsilon(1e-10));
  // untruncated limit
  CHECK(std::fabs(truncated_normal_median(-40.0)) < 1e-12);
  // asymptotic branch
  CHECK(truncated_normal_median(12.0) == 12.0 + M_LN2 / 12.0);
}

TEST_CASE("truncated normal ordering: a < median < mean") {
  for (double a = -6.0; a <= 6.0; a += 0.25) {
    const double med = truncated_normal_median(a);
    const double mean = truncated_normal_mean(a);
    CHECK(med > a);
    CHECK(mean > med);
  }
}

TEST_CASE("incomplete gamma against the Erlang closed form") {
  // Q(k, x) = e^-x sum_{j<k} x^j/j! for integer k
  for (int k : {1, 2, 4, 7}) {
    for (double x : {0.1, 0.5, 2.0, 4.0, 9.5, 25.0}) {
      double sum = 0.0, term = 1.0;
      for (int j = 0; j < k; ++j) {
        if (j > 0) term *= x / j;
        sum += term;
      }
      const double q_ref = std::exp(-x) * sum;
      CHECK(gamma_q(k, x) == doctest::Approx(q_ref).epsilon(1e-12));
      CHECK(gamma_p(k, x) == doctest::Approx(1.0 - q_ref).epsilon(1e-12));
    }
  }
  CHECK(gamma_p(4.0, 0.0) == 0.0);
  CHECK_THROWS(gamma_p(-1.0, 2.0));
}

TEST_CASE("incomplete gamma against quadrature for non-integer shape") {
  const double shape = 2.6;
  auto pdf = [&](double t) {
    return std::pow(t, shape - 1.0) * std::exp(-t) / std::tgamma(shape);
  };
  for (double x : {0.5, 1.7, 4.2}) {
    const double ref = kmjack::integrate(pdf, 0.0, x, 1e-12);
    CHECK(gamma_p(shape, x) == doctest::Approx(ref).epsilon(1e-9));
  }
}

}  // TEST_SUITE
