#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kmjack/distributions.hpp"

namespace kmjack {

enum class CensorFamily { exp_rate, uniform_a_2a };

// Adaptive Simpson quadrature on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

// Solves for the censoring parameter (exponential rate, or the `a` of a
// U(a,2a) censoring time) giving P(C < T) = p for the lifetime `lifetime`.
// Exponential-vs-exponential has a closed form; the rest is bisection on the
// analytic censoring probability, to |p(x) - p| <= 1e-4.
double calibrate_censoring(const DistSpec& lifetime, CensorFamily censor, double p);

// Censoring probability of the U(a,2a) log-censoring model against an
// empirical sample of log lifetimes: P(V < Z), V ~ U(a,2a). Sorts internally.
class LogUniformCalibrator {
 public:
  explicit LogUniformCalibrator(std::vector<double> log_times);
  double censored_probability(double a) const;
  double solve(double p) const;  // a with P(V < Z) = p, tolerance 1e-4

 private:
  std::vector<double> sorted_;
  std::vector<double> prefix_;  // prefix sums of sorted_
};

}  // namespace kmjack
