#include "kmjack/imputation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kmjack/errors.hpp"
#include "kmjack/rng.hpp"
#include "kmjack/stats.hpp"

namespace kmjack {

namespace {

constexpr double kSigmaFloor = 1e-8;

void require_censored_last(const OrderedSample& s) {
  if (s.last_status() != 0)
    throw std::invalid_argument("imputation applies only when the largest observation is censored");
}

}  // namespace

ImputationMethod ImputationMethod::parse(const std::string& name) {
  ImputationMethod m;
  if (name == "efron") m.variant = ImputeVariant::efron;
  else if (name == "predicted_difference" || name == "w_nu") m.variant = ImputeVariant::predicted_difference;
  else if (name == "conditional_mean" || name == "w_tau_m") m.variant = ImputeVariant::conditional_mean;
  else if (name == "conditional_median" || name == "w_tau_md") m.variant = ImputeVariant::conditional_median;
  else if (name == "resampled_mean" || name == "w_tau_star_m") m.variant = ImputeVariant::resampled_mean;
  else if (name == "resampled_median" || name == "w_tau_star_md") m.variant = ImputeVariant::resampled_median;
  else throw config_error("unknown imputation method: " + name);
  return m;
}

std::string ImputationMethod::tag() const {
  switch (variant) {
    case ImputeVariant::efron: return "efron";
    case ImputeVariant::predicted_difference: return "predicted_difference";
    case ImputeVariant::conditional_mean: return "conditional_mean";
    case ImputeVariant::conditional_median: return "conditional_median";
    case ImputeVariant::resampled_mean: return "resampled_mean";
    case ImputeVariant::resampled_median: return "resampled_median";
  }
  throw std::logic_error("unreachable");
}

bool ImputationMethod::needs_covariates() const {
  return variant != ImputeVariant::efron && variant != ImputeVariant::predicted_difference;
}

ImputedSample efron_reclassify(const OrderedSample& s) {
  require_censored_last(s);
  return make_imputed(s, s.time(s.n() - 1), "efron");
}

ImputedSample impute_predicted_difference(const OrderedSample& s, double gap_fraction) {
  require_censored_last(s);
  if (!(gap_fraction > 0.0 && gap_fraction <= 1.0))
    throw std::invalid_argument("gap fraction must lie in (0,1]");
  const int n = s.n();

  auto distinct_uncensored_from = [&](int first) {
    std::vector<double> vals;
    for (int i = first; i < n; ++i) {
      if (s.status(i) == 1 && (vals.empty() || s.time(i) > vals.back()))
        vals.push_back(s.time(i));
    }
    return vals;
  };

  const int k = static_cast<int>(std::ceil(gap_fraction * n));
  std::vector<double> vals = distinct_uncensored_from(n - k);
  if (vals.size() < 2) vals = distinct_uncensored_from(0);
  if (vals.size() < 2)
    throw std::invalid_argument(
        "predicted-difference imputation needs at least two distinct uncensored times");

  // mean of consecutive gaps over m distinct values telescopes
  const double nu = (vals.back() - vals.front()) / static_cast<double>(vals.size() - 1);
  return make_imputed(s, s.time(n - 1) + nu, "predicted_difference");
}

AftFit fit_aft_stute(const Matrix& x, const OrderedSample& s) {
  const int n = s.n();
  if (x.rows() != n) throw std::invalid_argument("covariate rows must match the sample size");
  for (int i = 0; i < n; ++i)
    if (!(s.time(i) > 0.0))
      throw std::invalid_argument("AFT fit needs strictly positive times");

  const int p = x.cols();
  const WeightVector w = km_weights(s);

  std::vector<int> rows;
  for (int i = 0; i < n; ++i)
    if (w.weights[i] > 0.0) rows.push_back(i);
  const int m = static_cast<int>(rows.size());
  if (m < p + 1) throw numeric_error("AFT fit: fewer weighted observations than parameters");

  Eigen::MatrixXd a(m, p + 1);
  Eigen::VectorXd b(m);
  for (int r = 0; r < m; ++r) {
    const int i = rows[r];
    const double sw = std::sqrt(w.weights[i]);
    a(r, 0) = sw;
    for (int c = 0; c < p; ++c) a(r, c + 1) = sw * x(i, c);
    b(r) = sw * std::log(s.time(i));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < p + 1) throw numeric_error("AFT fit: singular normal equations");
  const Eigen::VectorXd beta = qr.solve(b);

  double rss = 0.0, wsum = 0.0;
  for (int r = 0; r < m; ++r) {
    const int i = rows[r];
    double fitted = beta(0);
    for (int c = 0; c < p; ++c) fitted += beta(c + 1) * x(i, c);
    const double resid = std::log(s.time(i)) - fitted;
    rss += w.weights[i] * resid * resid;
    wsum += w.weights[i];
  }

  AftFit fit;
  fit.intercept = beta(0);
  fit.coef.assign(p, 0.0);
  for (int c = 0; c < p; ++c) fit.coef[c] = beta(c + 1);
  fit.sigma = std::max(std::sqrt(rss / wsum), kSigmaFloor);
  return fit;
}

double conditional_imputed_time(const AftFit& fit, const std::vector<double>& x_row, double y,
                                bool use_median) {
  if (!(y > 0.0)) throw std::invalid_argument("censored time must be positive");
  if (x_row.size() != fit.coef.size())
    throw std::invalid_argument("covariate row does not match the fit");
  double mu = fit.intercept;
  mu = std::inner_product(x_row.begin(), x_row.end(), fit.coef.begin(), mu);
  const double a = (std::log(y) - mu) / fit.sigma;
  const double excess =
      use_median ? stats::truncated_normal_median(a) : stats::truncated_normal_mean(a);
  return std::exp(mu + fit.sigma * excess);
}

namespace {

ImputedSample impute_conditional(const OrderedSample& s, const Matrix& x, bool use_median,
                                 const char* tag) {
  require_censored_last(s);
  const AftFit fit = fit_aft_stute(x, s);
  const int last = s.n() - 1;
  const double t = conditional_imputed_time(fit, x.row(last), s.time(last), use_median);
  // the truncated-normal excess exceeds the truncation point, so t > y; guard
  // against rounding right at the boundary
  return make_imputed(s, std::max(t, s.time(last)), tag);
}

}  // namespace

ImputedSample impute_conditional_mean(const OrderedSample& s, const Matrix& x) {
  return impute_conditional(s, x, /*use_median=*/false, "conditional_mean");
}

ImputedSample impute_conditional_median(const OrderedSample& s, const Matrix& x) {
  return impute_conditional(s, x, /*use_median=*/true, "conditional_median");
}

ImputedSample impute_resampled(const OrderedSample& s, const Matrix& x, bool use_median, int b,
                               std::uint64_t seed) {
  require_censored_last(s);
  if (b < 1) throw std::invalid_argument("resample count must be >= 1");
  const int n = s.n();
  if (x.rows() != n) throw std::invalid_argument("covariate rows must match the sample size");
  const int p = x.cols();
  const int last = n - 1;
  const std::vector<double> x_last = x.row(last);
  const double y_last = s.time(last);

  double total = 0.0;
  int ok = 0, failed = 0;
  std::vector<int> idx(n);
  for (int rep = 0; rep < b; ++rep) {
    Rng rng(derive_stream(seed, {static_cast<std::uint64_t>(rep)}));
    for (int i = 0; i < n; ++i)
      idx[i] = static_cast<int>(rng.uniform01() * n);

    // order the resampled rows, keeping covariates paired
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
      const double ti = s.time(idx[i]), tj = s.time(idx[j]);
      if (ti != tj) return ti < tj;
      return s.status(idx[i]) > s.status(idx[j]);
    });
    std::vector<double> times(n);
    std::vector<int> statuses(n);
    Matrix xr(n, p);
    for (int i = 0; i < n; ++i) {
      const int src = idx[order[i]];
      times[i] = s.time(src);
      statuses[i] = s.status(src);
      for (int c = 0; c < p; ++c) xr(i, c) = x(src, c);
    }

    try {
      const AftFit fit = fit_aft_stute(xr, OrderedSample::from_sorted(times, statuses));
      total += conditional_imputed_time(fit, x_last, y_last, use_median);
      ++ok;
    } catch (const numeric_error&) {
      ++failed;
    }
  }
  if (failed * 2 > b)
    throw numeric_error("resampled imputation: most bootstrap refits were rank deficient");
  const double t = total / ok;
  return make_imputed(s, std::max(t, y_last),
                      use_median ? "resampled_median" : "resampled_mean");
}

ImputedSample impute_largest(const ImputationMethod& method, const OrderedSample& s,
                             const Matrix& x) {
  if (method.needs_covariates() && x.empty())
    throw config_error("imputation method " + method.tag() + " requires covariates");
  switch (method.variant) {
    case ImputeVariant::efron:
      return efron_reclassify(s);
    case ImputeVariant::predicted_difference:
      return impute_predicted_difference(s, method.gap_fraction);
    case ImputeVariant::conditional_mean:
      return impute_conditional_mean(s, x);
    case ImputeVariant::conditional_median:
      return impute_conditional_median(s, x);
    case ImputeVariant::resampled_mean:
      return impute_resampled(s, x, /*use_median=*/false, method.resample_count, method.seed);
    case ImputeVariant::resampled_median:
      return impute_resampled(s, x, /*use_median=*/true, method.resample_count, method.seed);
  }
  throw std::logic_error("unreachable");
}

}  // namespace kmjack
