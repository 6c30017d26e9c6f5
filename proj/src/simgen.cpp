#include "kmjack/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "kmjack/errors.hpp"

namespace kmjack {

namespace {

constexpr int kMaxRejectionAttempts = 100000;
constexpr std::uint64_t kCalibrationSeed = 0x5eedca11b8a7e5ULL;

bool satisfies(const OrderedSample& s, Constraint c) {
  switch (c) {
    case Constraint::none: return true;
    case Constraint::second_last_censored: return s.second_last_status() == 0;
    case Constraint::second_last_censored_and_last_uncensored:
      return s.second_last_status() == 0 && s.last_status() == 1;
  }
  return true;
}

// Sorts (times, statuses, covariate rows) jointly by (time, status desc).
std::pair<OrderedSample, Matrix> order_with_covariates(const std::vector<double>& times,
                                                       const std::vector<int>& statuses,
                                                       const Matrix& x) {
  const int n = static_cast<int>(times.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (times[i] != times[j]) return times[i] < times[j];
    return statuses[i] > statuses[j];
  });
  std::vector<double> ts(n);
  std::vector<int> ds(n);
  Matrix xo(x.rows() > 0 ? n : 0, x.cols());
  for (int i = 0; i < n; ++i) {
    ts[i] = times[order[i]];
    ds[i] = statuses[order[i]];
    for (int c = 0; c < x.cols(); ++c) xo(i, c) = x(order[i], c);
  }
  return {OrderedSample::from_sorted(std::move(ts), std::move(ds)), std::move(xo)};
}

void check_np(int n, double p) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("censoring fraction must lie in [0,1)");
}

}  // namespace

Constraint parse_constraint(const std::string& name) {
  if (name == "none") return Constraint::none;
  if (name == "second_last_censored") return Constraint::second_last_censored;
  if (name == "second_last_censored_and_last_uncensored")
    return Constraint::second_last_censored_and_last_uncensored;
  throw config_error("unknown constraint: " + name);
}

std::string constraint_name(Constraint c) {
  switch (c) {
    case Constraint::none: return "none";
    case Constraint::second_last_censored: return "second_last_censored";
    case Constraint::second_last_censored_and_last_uncensored:
      return "second_last_censored_and_last_uncensored";
  }
  throw std::logic_error("unreachable");
}

SkewedModel skewed_model(const std::string& name) {
  if (name == "lognormal")
    return {DistSpec::lognormal(1.1, 1.0), CensorFamily::uniform_a_2a, "lognormal"};
  if (name == "exponential")
    return {DistSpec::exponential(0.2), CensorFamily::exp_rate, "exponential"};
  if (name == "gamma") return {DistSpec::gamma(4.0, 1.0), CensorFamily::uniform_a_2a, "gamma"};
  if (name == "weibull")
    return {DistSpec::weibull(3.0, std::cbrt(38.96)), CensorFamily::uniform_a_2a, "weibull"};
  throw config_error("unknown skewed-study distribution: " + name);
}

std::vector<std::string> skewed_model_names() {
  return {"lognormal", "exponential", "gamma", "weibull"};
}

double AftModel::true_mean() const {
  // E[T] = e^{alpha + sigma^2/2} * prod_j (e^{beta_j} - 1)/beta_j
  double m = std::exp(alpha + 0.5 * sigma * sigma);
  for (double b : beta) m *= b == 0.0 ? 1.0 : std::expm1(b) / b;
  return m;
}

LogUniformCalibrator AftModel::calibrator(int sample_size) const {
  Rng rng(derive_stream(kCalibrationSeed, {static_cast<std::uint64_t>(sample_size)}));
  std::vector<double> z(sample_size);
  for (int i = 0; i < sample_size; ++i) {
    double v = alpha + sigma * rng.normal_std();
    for (double b : beta) v += b * rng.uniform01();
    z[i] = v;
  }
  return LogUniformCalibrator(std::move(z));
}

namespace {

// Shared rejection loop: `draw` fills (times, statuses, covariates).
template <class DrawFn>
GeneratedDataset generate_with_rejection(int n, double p, double true_mean, Constraint constraint,
                                         std::uint64_t seed, DrawFn&& draw) {
  Rng rng(seed);
  std::vector<double> times(n);
  std::vector<int> statuses(n);
  for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    Matrix x = draw(rng, times, statuses);
    auto [sample, xo] = order_with_covariates(times, statuses, x);
    if (!satisfies(sample, constraint)) continue;
    GeneratedDataset out{std::move(sample), std::move(xo), true_mean, p, constraint, true};
    return out;
  }
  throw numeric_error("rejection sampling: constraint " + constraint_name(constraint) +
                      " not satisfied after 100000 attempts");
}

}  // namespace

GeneratedDataset gen_koziol_green(int n, double p, std::uint64_t seed, Constraint constraint) {
  check_np(n, p);
  const double lambda = p / (1.0 - p);  // T ~ Exp(1) makes this exact
  return generate_with_rejection(
      n, p, /*true_mean=*/1.0, constraint, seed,
      [&](Rng& rng, std::vector<double>& times, std::vector<int>& statuses) {
        for (int i = 0; i < n; ++i) {
          const double t = rng.exponential(1.0);
          const double c = p > 0.0 ? rng.exponential(lambda)
                                   : std::numeric_limits<double>::infinity();
          times[i] = std::min(t, c);
          statuses[i] = t <= c ? 1 : 0;
        }
        return Matrix();
      });
}

GeneratedDataset gen_skewed_with_param(const SkewedModel& model, std::optional<double> censor_param,
                                       double p, int n, std::uint64_t seed, Constraint constraint) {
  check_np(n, p);
  if (p > 0.0 && !censor_param)
    throw std::invalid_argument("censoring parameter required when p > 0");
  return generate_with_rejection(
      n, p, model.lifetime.mean(), constraint, seed,
      [&](Rng& rng, std::vector<double>& times, std::vector<int>& statuses) {
        for (int i = 0; i < n; ++i) {
          const double t = model.lifetime.sample(rng);
          double c = std::numeric_limits<double>::infinity();
          if (p > 0.0) {
            c = model.censor == CensorFamily::exp_rate
                    ? rng.exponential(*censor_param)
                    : rng.uniform(*censor_param, 2.0 * *censor_param);
          }
          times[i] = std::min(t, c);
          statuses[i] = t <= c ? 1 : 0;
        }
        return Matrix();
      });
}

GeneratedDataset gen_skewed(const SkewedModel& model, int n, double p, std::uint64_t seed,
                            Constraint constraint) {
  check_np(n, p);
  std::optional<double> param;
  if (p > 0.0) param = calibrate_censoring(model.lifetime, model.censor, p);
  return gen_skewed_with_param(model, param, p, n, seed, constraint);
}

GeneratedDataset gen_aft_with_param(const AftModel& model, std::optional<double> log_censor_a,
                                    double p, int n, std::uint64_t seed, Constraint constraint) {
  check_np(n, p);
  if (p > 0.0 && !log_censor_a)
    throw std::invalid_argument("log-censoring parameter required when p > 0");
  const int pdim = static_cast<int>(model.beta.size());
  return generate_with_rejection(
      n, p, model.true_mean(), constraint, seed,
      [&](Rng& rng, std::vector<double>& times, std::vector<int>& statuses) {
        Matrix x(n, pdim);
        for (int i = 0; i < n; ++i) {
          double z = model.alpha + model.sigma * rng.normal_std();
          for (int c = 0; c < pdim; ++c) {
            x(i, c) = rng.uniform01();
            z += model.beta[c] * x(i, c);
          }
          const double t = std::exp(z);
          double cens = std::numeric_limits<double>::infinity();
          if (p > 0.0) cens = std::exp(rng.uniform(*log_censor_a, 2.0 * *log_censor_a));
          times[i] = std::min(t, cens);
          statuses[i] = t <= cens ? 1 : 0;
        }
        return x;
      });
}

GeneratedDataset gen_aft(int n, double p, std::uint64_t seed, double alpha, Constraint constraint) {
  check_np(n, p);
  AftModel model;
  model.alpha = alpha;
  std::optional<double> a;
  if (p > 0.0) a = model.calibrator().solve(p);
  return gen_aft_with_param(model, a, p, n, seed, constraint);
}

}  // namespace kmjack
