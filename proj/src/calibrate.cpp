#include "kmjack/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kmjack/errors.hpp"

namespace kmjack {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double b,
                        double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// Bisection for a monotone function; returns x with |g(x) - target| <= tol.
double bisect_monotone(const std::function<double(double)>& g, double lo, double hi, double target,
                       double tol, bool decreasing) {
  double flo = g(lo), fhi = g(hi);
  if (std::fabs(flo - target) <= tol) return lo;
  if (std::fabs(fhi - target) <= tol) return hi;
  auto above = [&](double v) { return decreasing ? v > target : v < target; };
  if (!above(flo) || above(fhi))
    throw numeric_error("calibration: target censoring level not bracketed");
  double best_x = lo, best_err = std::fabs(flo - target);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    const double err = std::fabs(fm - target);
    if (err < best_err) {
      best_err = err;
      best_x = mid;
    }
    if (err <= tol) return mid;
    if (above(fm))
      lo = mid;
    else
      hi = mid;
  }
  if (best_err <= tol) return best_x;
  throw numeric_error("calibration: bisection did not reach tolerance");
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double calibrate_censoring(const DistSpec& lifetime, CensorFamily censor, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("calibrate_censoring: p must lie in (0,1)");

  if (censor == CensorFamily::exp_rate) {
    if (lifetime.family == DistFamily::exponential) {
      // P(C < T) = lambda / (theta + lambda)
      return lifetime.p1 * p / (1.0 - p);
    }
    // P(C < T) = int_0^inf lambda e^{-lambda c} S_T(c) dc, increasing in
    // lambda; substitute u = 1 - e^{-lambda c} to land on [0,1].
    auto censored_prob = [&](double lambda) {
      auto h = [&](double u) {
        if (u >= 1.0) return 0.0;
        return lifetime.survival(-std::log1p(-u) / lambda);
      };
      return integrate(h, 0.0, 1.0, 1e-8);
    };
    double lo = 1e-12, hi = 1.0;
    int guard = 0;
    while (censored_prob(hi) < p && guard++ < 200) hi *= 2.0;
    while (censored_prob(lo) > p && guard++ < 400) lo *= 0.5;
    if (guard >= 400) throw numeric_error("calibration: bracket expansion failed");
    return bisect_monotone(censored_prob, lo, hi, p, 1e-4, /*decreasing=*/false);
  }

  // C ~ U(a, 2a): P(C < T) = (1/a) int_a^{2a} S_T(c) dc, decreasing in a.
  auto censored_prob = [&](double a) {
    auto s = [&](double c) { return lifetime.survival(c); };
    return integrate(s, a, 2.0 * a, 1e-8) / a;
  };
  double lo = 1e-12, hi = 1.0;
  int guard = 0;
  while (censored_prob(hi) > p && guard++ < 2000) hi *= 2.0;
  while (censored_prob(lo) < p && guard++ < 4000) lo *= 0.5;
  if (guard >= 4000) throw numeric_error("calibration: bracket expansion failed");
  return bisect_monotone(censored_prob, lo, hi, p, 1e-4, /*decreasing=*/true);
}

LogUniformCalibrator::LogUniformCalibrator(std::vector<double> log_times)
    : sorted_(std::move(log_times)) {
  if (sorted_.empty()) throw std::invalid_argument("calibrator needs a nonempty sample");
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.resize(sorted_.size() + 1, 0.0);
  std::partial_sum(sorted_.begin(), sorted_.end(), prefix_.begin() + 1);
}

double LogUniformCalibrator::censored_probability(double a) const {
  // P(V < z) for V ~ U(a,2a) is clamp((z-a)/a, 0, 1); average over the sample.
  const auto n = static_cast<std::ptrdiff_t>(sorted_.size());
  const auto i1 = std::upper_bound(sorted_.begin(), sorted_.end(), a) - sorted_.begin();
  const auto i2 = std::lower_bound(sorted_.begin(), sorted_.end(), 2.0 * a) - sorted_.begin();
  const double mid_sum = (prefix_[i2] - prefix_[i1]) - a * static_cast<double>(i2 - i1);
  return (mid_sum / a + static_cast<double>(n - i2)) / static_cast<double>(n);
}

double LogUniformCalibrator::solve(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("calibrator: p must lie in (0,1)");
  auto g = [this](double a) { return censored_probability(a); };
  double lo = 1e-9, hi = 1.0;
  int guard = 0;
  while (g(hi) > p && guard++ < 2000) hi *= 2.0;
  while (g(lo) < p && guard++ < 4000) lo *= 0.5;
  if (guard >= 4000)
    throw numeric_error("calibration: log-uniform censoring cannot reach the target level");
  return bisect_monotone(g, lo, hi, p, 1e-4, /*decreasing=*/true);
}

}  // namespace kmjack
