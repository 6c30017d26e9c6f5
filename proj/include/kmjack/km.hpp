#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kmjack {

// One possibly right-censored observation: time = min(lifetime, censoring
// time), status 1 if the event was seen, 0 if censored.
struct Observation {
  double time = 0.0;
  int status = 1;
};

// Observations sorted by time, events before censorings at equal times.
// Immutable once built; every estimator in the library consumes this type.
class OrderedSample {
 public:
  static OrderedSample from_observations(std::vector<Observation> raw);
  // For callers that already hold sorted data; validates the ordering.
  static OrderedSample from_sorted(std::vector<double> times, std::vector<int> statuses);

  int n() const { return static_cast<int>(times_.size()); }
  double time(int i) const { return times_[i]; }
  int status(int i) const { return statuses_[i]; }

  const std::vector<double>& times() const { return times_; }
  const std::vector<int>& statuses() const { return statuses_; }

  // Censoring pattern of the two largest observations, the pair that drives
  // the jackknife case analysis.
  int second_last_status() const { return statuses_[n() - 2]; }
  int last_status() const { return statuses_[n() - 1]; }

 private:
  OrderedSample(std::vector<double> times, std::vector<int> statuses)
      : times_(std::move(times)), statuses_(std::move(statuses)) {}

  std::vector<double> times_;
  std::vector<int> statuses_;
};

// Kaplan-Meier jump weights. weights[i] is the mass the K-M distribution
// estimate places on the i-th ordered observation; censored points get zero.
struct WeightVector {
  std::vector<double> weights;
  double mass = 0.0;  // sum of weights
};

// Sorts by (time ascending, status descending), stable within equal keys.
OrderedSample order_sample(std::vector<Observation> raw);

WeightVector km_weights(const OrderedSample& s);

// Product-limit survival estimate 1 - F(t); right-continuous step function.
double km_survival(const OrderedSample& s, double t);

// K-M integral sum_i w_i * phi(Y_(i)). phi must be finite at every point
// carrying positive weight.
template <class F>
double km_integral(const OrderedSample& s, F&& phi) {
  const WeightVector w = km_weights(s);
  double total = 0.0;
  for (int i = 0; i < s.n(); ++i) {
    if (w.weights[i] == 0.0) continue;
    const double v = phi(s.time(i));
    if (std::isnan(v))
      throw std::invalid_argument("km_integral: phi returned NaN at a weighted point");
    total += w.weights[i] * v;
  }
  return total;
}

// K-M mean lifetime: the integral with phi = identity.
double km_mean(const OrderedSample& s);

}  // namespace kmjack
