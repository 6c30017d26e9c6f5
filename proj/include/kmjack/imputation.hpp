#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kmjack/jackknife.hpp"
#include "kmjack/km.hpp"
#include "kmjack/matrix.hpp"

namespace kmjack {

enum class ImputeVariant {
  efron,                 // reclassify the censored largest observation
  predicted_difference,  // W_nu: add a tail-gap increment
  conditional_mean,      // W_tau_m: truncated-normal mean on the log scale
  conditional_median,    // W_tau_md
  resampled_mean,        // W_tau*_m: bootstrap-averaged conditional mean
  resampled_median       // W_tau*_md
};

struct ImputationMethod {
  ImputeVariant variant = ImputeVariant::predicted_difference;
  int resample_count = 100;   // B, resampled variants
  double gap_fraction = 0.25; // q, predicted-difference tail fraction
  std::uint64_t seed = 0;     // resampled variants

  static ImputationMethod parse(const std::string& name);
  std::string tag() const;
  bool needs_covariates() const;
};

// Weighted least-squares fit of log lifetime on covariates with K-M weights
// (Stute's estimator for the AFT model).
struct AftFit {
  double intercept = 0.0;
  std::vector<double> coef;
  double sigma = 1.0;  // residual scale on the log scale, floored at 1e-8
};

ImputedSample efron_reclassify(const OrderedSample& s);

// W_nu. nu is the mean gap between consecutive distinct uncensored times in
// the top ceil(q*n) slice of the sample (the whole sample if that slice has
// fewer than two distinct uncensored values).
ImputedSample impute_predicted_difference(const OrderedSample& s, double gap_fraction = 0.25);

// X rows must be aligned with s (already ordered). Requires all times > 0.
AftFit fit_aft_stute(const Matrix& x, const OrderedSample& s);

// Imputed lifetime for a censored value y under `fit` at covariates x_row:
// exp of the mean (or median) of the fitted log-normal truncated below log y.
double conditional_imputed_time(const AftFit& fit, const std::vector<double>& x_row, double y,
                                bool use_median);

ImputedSample impute_conditional_mean(const OrderedSample& s, const Matrix& x);
ImputedSample impute_conditional_median(const OrderedSample& s, const Matrix& x);

// Bootstrap-averaged conditional imputation: B row resamples of (x, s), one
// AFT refit each, average of the per-fit imputed times. Deterministic given
// the seed; fails if more than B/2 refits are rank deficient.
ImputedSample impute_resampled(const OrderedSample& s, const Matrix& x, bool use_median, int b,
                               std::uint64_t seed);

// Dispatch over all six variants. `x` may be empty for the covariate-free
// methods and is required for the regression-based ones.
ImputedSample impute_largest(const ImputationMethod& method, const OrderedSample& s,
                             const Matrix& x);

}  // namespace kmjack
