#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "kmjack/km.hpp"

using namespace kmjack;

namespace {

OrderedSample make(std::vector<double> times, std::vector<int> statuses) {
  std::vector<Observation> raw;
  for (size_t i = 0; i < times.size(); ++i) raw.push_back({times[i], statuses[i]});
  return order_sample(raw);
}

// random sample with distinct times; fraction `pc` censored
OrderedSample random_sample(std::mt19937_64& gen, int n, double pc) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Observation> raw;
  for (int i = 0; i < n; ++i)
    raw.push_back({(i + 1) + 0.5 * u(gen), u(gen) < pc ? 0 : 1});
  std::shuffle(raw.begin(), raw.end(), gen);
  return order_sample(raw);
}

}  // namespace

TEST_SUITE("km") {

TEST_CASE("order_sample sorts by time with events first at ties") {
  auto s = make({2, 1}, {1, 0});
  CHECK(s.times() == std::vector<double>{1, 2});
  CHECK(s.statuses() == std::vector<int>{0, 1});

  auto tied = make({3, 3}, {0, 1});
  CHECK(tied.statuses() == std::vector<int>{1, 0});

  auto sorted = make({1, 2, 3}, {1, 1, 1});
  CHECK(sorted.times() == std::vector<double>{1, 2, 3});
}

TEST_CASE("order_sample rejects bad input") {
  CHECK_THROWS_AS(order_sample({{1.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(order_sample({{-1.0, 1}, {2.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(order_sample({{std::nan(""), 1}, {2.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(order_sample({{INFINITY, 1}, {2.0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(order_sample({{1.0, 2}, {2.0, 1}}), std::invalid_argument);
}

TEST_CASE("from_sorted validates ordering and tie rule") {
  CHECK_THROWS_AS(OrderedSample::from_sorted({2, 1}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(OrderedSample::from_sorted({1, 1}, {0, 1}), std::invalid_argument);
  CHECK_NOTHROW(OrderedSample::from_sorted({1, 1}, {1, 0}));
}

TEST_CASE("km_weights hand values") {
  auto w1 = km_weights(make({1, 2, 3}, {1, 1, 1}));
  for (double w : w1.weights) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));

  auto w2 = km_weights(make({1, 2, 3, 4}, {1, 0, 1, 1}));
  CHECK(w2.weights[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w2.weights[1] == 0.0);
  CHECK(w2.weights[2] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(w2.weights[3] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(w2.mass == doctest::Approx(1.0).epsilon(1e-12));

  auto w3 = km_weights(make({1, 2, 3, 4}, {1, 1, 0, 0}));
  CHECK(w3.weights[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w3.weights[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w3.weights[2] == 0.0);
  CHECK(w3.weights[3] == 0.0);
  CHECK(w3.mass == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("km_survival hand values") {
  auto s = make({1, 2, 3, 4}, {1, 1, 1, 1});
  CHECK(km_survival(s, 2.5) == doctest::Approx(0.5).epsilon(1e-12));

  auto c = make({1, 2, 3, 4}, {1, 0, 1, 1});
  CHECK(km_survival(c, 3.0) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(km_survival(c, 3.9) == doctest::Approx(0.375).epsilon(1e-12));

  CHECK(km_survival(c, 0.5) == 1.0);
  CHECK_THROWS_AS(km_survival(c, std::nan("")), std::invalid_argument);
}

TEST_CASE("km_integral hand values") {
  auto id = [](double y) { return y; };
  CHECK(km_integral(make({1, 2, 3}, {1, 1, 1}), id) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(km_integral(make({1, 2, 3, 4}, {1, 0, 1, 1}), id) ==
        doctest::Approx(2.875).epsilon(1e-12));
  CHECK(km_integral(make({1, 2, 3, 4}, {1, 0, 1, 1}), [](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("km_integral NaN policy") {
  auto s = make({1, 2, 3, 4}, {1, 0, 1, 1});
  // NaN at a weighted point is an error
  CHECK_THROWS_AS(km_integral(s, [](double y) { return y == 3.0 ? std::nan("") : y; }),
                  std::invalid_argument);
  // NaN at a zero-weight (censored) point is not
  CHECK(km_integral(s, [](double y) { return y == 2.0 ? std::nan("") : y; }) ==
        doctest::Approx(2.875));
}

TEST_CASE("km_mean hand values") {
  CHECK(km_mean(make({5, 5, 5}, {1, 1, 1})) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(km_mean(make({1, 2, 3, 4}, {1, 0, 1, 1})) == doctest::Approx(2.875).epsilon(1e-12));
  CHECK(km_mean(make({1, 9}, {1, 0})) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("jump equivalence: weights are survival-curve drops") {
  std::mt19937_64 gen(991);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 199);
    auto s = random_sample(gen, n, 0.4);
    auto w = km_weights(s);
    for (int i = 0; i < n; ++i) {
      if (s.status(i) != 1) continue;
      const double before =
          km_survival(s, std::nextafter(s.time(i), -1.0));
      const double drop = before - km_survival(s, s.time(i));
      CHECK(std::fabs(w.weights[i] - drop) < 1e-10);
    }
  }
}

TEST_CASE("mass identity") {
  std::mt19937_64 gen(992);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 120);
    auto s = random_sample(gen, n, 0.5);
    auto w = km_weights(s);
    double prod = 1.0;
    for (int j = 1; j <= n; ++j)
      if (s.status(j - 1) == 1) prod *= static_cast<double>(n - j) / (n - j + 1);
    CHECK(std::fabs(w.mass - (1.0 - prod)) < 1e-10);
  }
}

TEST_CASE("uncensored km_mean is the arithmetic mean") {
  std::mt19937_64 gen(993);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 60);
    auto s = random_sample(gen, n, 0.0);
    double avg = 0.0;
    for (int i = 0; i < n; ++i) avg += s.time(i);
    avg /= n;
    CHECK(km_mean(s) == doctest::Approx(avg).epsilon(1e-12));
  }
}

TEST_CASE("survival is a nonincreasing step function") {
  std::mt19937_64 gen(994);
  auto s = random_sample(gen, 40, 0.3);
  double prev = 1.0;
  for (int i = 0; i < s.n(); ++i) {
    const double here = km_survival(s, s.time(i));
    CHECK(here <= prev + 1e-15);
    // constant strictly between order statistics
    if (i + 1 < s.n() && s.time(i + 1) > s.time(i)) {
      const double mid = 0.5 * (s.time(i) + s.time(i + 1));
      CHECK(km_survival(s, mid) == here);
    }
    CHECK(here >= 0.0);
    CHECK(here <= 1.0);
    prev = here;
  }
}

TEST_CASE("weights are invariant under input permutation") {
  std::mt19937_64 gen(995);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(gen() % 50);
    std::vector<Observation> raw;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) raw.push_back({u(gen) * 10, u(gen) < 0.4 ? 0 : 1});
    auto w0 = km_weights(order_sample(raw));
    std::shuffle(raw.begin(), raw.end(), gen);
    auto w1 = km_weights(order_sample(raw));
    CHECK(w0.weights == w1.weights);
  }
}

}  // TEST_SUITE
