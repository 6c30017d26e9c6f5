#include "kmjack/km.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kmjack {

namespace {

void validate_entry(double time, int status) {
  if (std::isnan(time) || std::isinf(time) || time < 0.0)
    throw std::invalid_argument("observation time must be finite and nonnegative");
  if (status != 0 && status != 1)
    throw std::invalid_argument("observation status must be 0 or 1");
}

}  // namespace

OrderedSample OrderedSample::from_observations(std::vector<Observation> raw) {
  if (raw.size() < 2)
    throw std::invalid_argument("need at least 2 observations");
  for (const auto& o : raw) validate_entry(o.time, o.status);
  std::stable_sort(raw.begin(), raw.end(), [](const Observation& a, const Observation& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.status > b.status;  // events precede censorings at equal times
  });
  std::vector<double> times(raw.size());
  std::vector<int> statuses(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    times[i] = raw[i].time;
    statuses[i] = raw[i].status;
  }
  return OrderedSample(std::move(times), std::move(statuses));
}

OrderedSample OrderedSample::from_sorted(std::vector<double> times, std::vector<int> statuses) {
  if (times.size() != statuses.size())
    throw std::invalid_argument("times/statuses length mismatch");
  if (times.size() < 2)
    throw std::invalid_argument("need at least 2 observations");
  for (size_t i = 0; i < times.size(); ++i) {
    validate_entry(times[i], statuses[i]);
    if (i > 0) {
      if (times[i] < times[i - 1])
        throw std::invalid_argument("times must be nondecreasing");
      if (times[i] == times[i - 1] && statuses[i] == 1 && statuses[i - 1] == 0)
        throw std::invalid_argument("events must precede censorings at equal times");
    }
  }
  return OrderedSample(std::move(times), std::move(statuses));
}

OrderedSample order_sample(std::vector<Observation> raw) {
  return OrderedSample::from_observations(std::move(raw));
}

WeightVector km_weights(const OrderedSample& s) {
  const int n = s.n();
  WeightVector out;
  out.weights.assign(n, 0.0);
  // running product over j < i of ((n-j)/(n-j+1))^{delta_j}
  double prod = 1.0;
  for (int i = 1; i <= n; ++i) {
    if (s.status(i - 1) == 1) {
      out.weights[i - 1] = prod / (n - i + 1);
      out.mass += out.weights[i - 1];
      prod *= static_cast<double>(n - i) / (n - i + 1);
    }
  }
  return out;
}

double km_survival(const OrderedSample& s, double t) {
  if (std::isnan(t)) throw std::invalid_argument("km_survival: t is NaN");
  const int n = s.n();
  double surv = 1.0;
  for (int i = 1; i <= n && s.time(i - 1) <= t; ++i) {
    if (s.status(i - 1) == 1) surv *= static_cast<double>(n - i) / (n - i + 1);
  }
  return surv;
}

double km_mean(const OrderedSample& s) {
  return km_integral(s, [](double y) { return y; });
}

}  // namespace kmjack
