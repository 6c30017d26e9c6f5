#pragma once

#include <string>

#include "kmjack/rng.hpp"

namespace kmjack {

enum class DistFamily { exponential, lognormal, gamma, weibull, uniform, normal };

// Parametric lifetime/censoring distribution with the handful of facts the
// harness needs: analytic mean and second moment, survival function, and a
// sampler.
struct DistSpec {
  DistFamily family = DistFamily::exponential;
  double p1 = 1.0;  // rate | meanlog | shape | shape | lo | mean
  double p2 = 0.0;  // -    | sdlog   | rate  | scale | hi | sd

  static DistSpec exponential(double rate);
  static DistSpec lognormal(double meanlog, double sdlog);
  static DistSpec gamma(double shape, double rate);
  static DistSpec weibull(double shape, double scale);
  static DistSpec uniform(double lo, double hi);
  static DistSpec normal(double mean, double sd);

  double mean() const;
  double second_moment() const;
  double survival(double t) const;  // P(T > t)
  double sample(Rng& rng) const;

  std::string label() const;
  // Accepts "exp:0.2", "lognormal:1.1,1", "gamma:4,1", "weibull:3,3.39",
  // "uniform:0,1", "normal:0,1".
  static DistSpec parse(const std::string& text);
};

}  // namespace kmjack
