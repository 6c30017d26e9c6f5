#include "kmjack/rng.hpp"

#include <cmath>

#include "kmjack/stats.hpp"

namespace kmjack {

double Rng::normal_std() {
  // inversion keeps the draw count per variate fixed at one
  return stats::norm_ppf(uniform01());
}

double Rng::gamma(double shape, double rate) {
  if (shape < 1.0) {
    const double u = uniform01();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal_std();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

}  // namespace kmjack
