#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kmjack/km.hpp"

namespace kmjack {

// A sample whose censored largest observation has been replaced by a larger
// surrogate and reclassified as an event. The first n-1 entries of base are
// untouched; only the tail value changes.
struct ImputedSample {
  OrderedSample base;
  double imputed_time;     // >= base last time
  std::string method_tag;  // which imputation produced it
};

// Validating constructor for ImputedSample.
ImputedSample make_imputed(OrderedSample base, double imputed_time, std::string method_tag);

// Point estimate, its jackknife bias estimate, and the corrected value.
// s_tilde == s_hat - bias always; `modified` marks the imputed-tail variant.
struct EstimateBundle {
  double s_hat = 0.0;
  double bias = 0.0;
  double s_tilde = 0.0;
  bool modified = false;
  int delta_second_last = 1;
  int delta_last = 1;
  std::optional<double> imputed_time;
  std::string imputation;
};

// Which delta the last K-M weight uses when the largest observation is
// imputed. `reclassified` evaluates the weight with delta_(n) = 1 (the
// default: the imputed point should actually carry mass); `observed` keeps
// the recorded delta_(n) = 0, which zeroes it.
enum class LastWeightRule { reclassified, observed };

using Integrand = std::function<double(double)>;

// Delete-1 jackknife estimate of the bias of the K-M integral. Nonzero only
// when the largest observation is an event and the second largest censored.
double jackknife_bias(const OrderedSample& s, const Integrand& phi);

// K-M integral together with its jackknife bias correction.
EstimateBundle corrected_estimate(const OrderedSample& s, const Integrand& phi);

// Weight given to the imputed largest observation when the second largest is
// censored: the reclassified last K-M weight plus the tail adjustment.
double adjusted_last_weight(const OrderedSample& s,
                            LastWeightRule rule = LastWeightRule::reclassified);

// Modified estimator, bias, and correction for a sample whose largest
// observation is censored and has been imputed.
EstimateBundle modified_estimates(const OrderedSample& s, const ImputedSample& imp,
                                  const Integrand& phi,
                                  LastWeightRule rule = LastWeightRule::reclassified);

using Imputer = std::function<ImputedSample(const OrderedSample&)>;

// Dispatch on (delta_(n-1), delta_(n)): the original estimator with or
// without correction when the largest observation is an event, the modified
// one (via `imputer`) when it is censored.
EstimateBundle estimate_by_case(const OrderedSample& s, const Integrand& phi,
                                const Imputer* imputer = nullptr,
                                LastWeightRule rule = LastWeightRule::reclassified);

}  // namespace kmjack
