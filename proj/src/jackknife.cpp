#include "kmjack/jackknife.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "kmjack/errors.hpp"

namespace kmjack {

namespace {

// prod_{j=1}^{n-2} ((n-1-j)/(n-j))^{delta_(j)}; empty product (n = 2) is 1.
double leave_one_out_tail_product(const OrderedSample& s) {
  const int n = s.n();
  double prod = 1.0;
  for (int j = 1; j <= n - 2; ++j) {
    if (s.status(j - 1) == 1) prod *= static_cast<double>(n - 1 - j) / (n - j);
  }
  return prod;
}

// Last K-M weight evaluated as if delta_(n) were 1; depends only on the
// first n-1 statuses.
double last_weight_reclassified(const OrderedSample& s) {
  const int n = s.n();
  double prod = 1.0;
  for (int j = 1; j <= n - 1; ++j) {
    if (s.status(j - 1) == 1) prod *= static_cast<double>(n - j) / (n - j + 1);
  }
  return prod;
}

double phi_checked(const Integrand& phi, double y) {
  const double v = phi(y);
  if (std::isnan(v)) throw std::invalid_argument("phi returned NaN");
  return v;
}

}  // namespace

ImputedSample make_imputed(OrderedSample base, double imputed_time, std::string method_tag) {
  if (base.last_status() != 0)
    throw std::invalid_argument("imputation applies only when the largest observation is censored");
  if (std::isnan(imputed_time) || std::isinf(imputed_time))
    throw std::invalid_argument("imputed time must be finite");
  if (imputed_time < base.time(base.n() - 1))
    throw std::invalid_argument("imputed time may not shrink the largest observation");
  return ImputedSample{std::move(base), imputed_time, std::move(method_tag)};
}

double jackknife_bias(const OrderedSample& s, const Integrand& phi) {
  const int n = s.n();
  if (s.last_status() == 0 || s.second_last_status() == 1) return 0.0;
  const double factor = static_cast<double>(n - 1) / n;
  return -factor * phi_checked(phi, s.time(n - 1)) * leave_one_out_tail_product(s);
}

EstimateBundle corrected_estimate(const OrderedSample& s, const Integrand& phi) {
  EstimateBundle out;
  out.s_hat = km_integral(s, phi);
  out.bias = jackknife_bias(s, phi);
  out.s_tilde = out.s_hat - out.bias;
  out.modified = false;
  out.delta_second_last = s.second_last_status();
  out.delta_last = s.last_status();
  return out;
}

double adjusted_last_weight(const OrderedSample& s, LastWeightRule rule) {
  const int n = s.n();
  const double w_n = rule == LastWeightRule::reclassified ? last_weight_reclassified(s) : 0.0;
  return w_n + static_cast<double>(n - 1) / n * leave_one_out_tail_product(s);
}

EstimateBundle modified_estimates(const OrderedSample& s, const ImputedSample& imp,
                                  const Integrand& phi, LastWeightRule rule) {
  const int n = s.n();
  if (s.last_status() != 0)
    throw std::invalid_argument("modified estimator undefined when the largest observation is an event");
  if (imp.base.times() != s.times() || imp.base.statuses() != s.statuses())
    throw std::invalid_argument("imputed sample does not stem from this sample");

  const WeightVector w = km_weights(s);
  double head = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    if (w.weights[i] > 0.0) head += w.weights[i] * phi_checked(phi, s.time(i));
  }
  const double phi_tail = phi_checked(phi, imp.imputed_time);

  EstimateBundle out;
  out.modified = true;
  out.delta_second_last = s.second_last_status();
  out.delta_last = 0;
  out.imputed_time = imp.imputed_time;
  out.imputation = imp.method_tag;

  if (s.second_last_status() == 0) {
    out.s_hat = head + adjusted_last_weight(s, rule) * phi_tail;
    out.bias = -static_cast<double>(n - 1) / n * phi_tail * leave_one_out_tail_product(s);
  } else {
    const double w_n = rule == LastWeightRule::reclassified ? last_weight_reclassified(s) : 0.0;
    out.s_hat = head + w_n * phi_tail;
    out.bias = 0.0;
  }
  out.s_tilde = out.s_hat - out.bias;
  return out;
}

EstimateBundle estimate_by_case(const OrderedSample& s, const Integrand& phi,
                                const Imputer* imputer, LastWeightRule rule) {
  if (s.last_status() == 1) return corrected_estimate(s, phi);
  if (imputer == nullptr || !*imputer)
    throw config_error("largest observation is censored: an imputation method is required");
  const ImputedSample imp = (*imputer)(s);
  return modified_estimates(s, imp, phi, rule);
}

}  // namespace kmjack
