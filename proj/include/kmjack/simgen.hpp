#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kmjack/calibrate.hpp"
#include "kmjack/distributions.hpp"
#include "kmjack/km.hpp"
#include "kmjack/matrix.hpp"

namespace kmjack {

// Rejection constraint on the censoring pattern of the two largest
// observations (the conditioning used by the skewed-distribution study).
enum class Constraint { none, second_last_censored, second_last_censored_and_last_uncensored };

Constraint parse_constraint(const std::string& name);
std::string constraint_name(Constraint c);

struct GeneratedDataset {
  OrderedSample sample;
  Matrix covariates;        // empty unless the model has covariates; rows follow sample order
  double true_mean = 0.0;   // analytic E[T]
  double target_censoring = 0.0;  // fraction in [0,1)
  Constraint constraint = Constraint::none;
  bool constraint_satisfied = true;
};

// Lifetime/censoring pairing of the skewed-distribution study.
struct SkewedModel {
  DistSpec lifetime;
  CensorFamily censor;
  std::string name;
};

// The four Table-style models: lognormal(1.1,1)+U(a,2a), exp(0.2)+exp(lambda),
// gamma(4,1)+U(a,2a), weibull(3, 38.96^(1/3))+U(a,2a).
SkewedModel skewed_model(const std::string& name);
std::vector<std::string> skewed_model_names();

// AFT generating model: log T = alpha + x^T beta + eps, eps ~ N(0,1),
// x_j ~ U(0,1) iid; beta = (2,3,4,5,6). Log censoring times are U(a,2a).
struct AftModel {
  double alpha = 0.0;
  std::vector<double> beta = {2.0, 3.0, 4.0, 5.0, 6.0};
  double sigma = 1.0;

  double true_mean() const;
  // Empirical log-lifetime reference sample used to calibrate the censoring
  // level; fixed internal seed so a given model always calibrates identically.
  LogUniformCalibrator calibrator(int sample_size = 1000000) const;
};

// Generators. `p` is the target censoring fraction in [0,1); p = 0 disables
// censoring. All are deterministic functions of their seed.
GeneratedDataset gen_koziol_green(int n, double p, std::uint64_t seed,
                                  Constraint constraint = Constraint::none);

// Lower-level entry taking a pre-calibrated censoring parameter, so study
// loops calibrate once per cell instead of once per dataset.
GeneratedDataset gen_skewed_with_param(const SkewedModel& model, std::optional<double> censor_param,
                                       double p, int n, std::uint64_t seed, Constraint constraint);
GeneratedDataset gen_skewed(const SkewedModel& model, int n, double p, std::uint64_t seed,
                            Constraint constraint = Constraint::none);

GeneratedDataset gen_aft_with_param(const AftModel& model, std::optional<double> log_censor_a,
                                    double p, int n, std::uint64_t seed,
                                    Constraint constraint = Constraint::none);
GeneratedDataset gen_aft(int n, double p, std::uint64_t seed, double alpha = 0.0,
                         Constraint constraint = Constraint::none);

}  // namespace kmjack
