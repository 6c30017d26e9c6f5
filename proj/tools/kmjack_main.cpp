#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kmjack/calibrate.hpp"
#include "kmjack/csv.hpp"
#include "kmjack/errors.hpp"
#include "kmjack/experiments.hpp"
#include "kmjack/imputation.hpp"
#include "kmjack/jackknife.hpp"

namespace {

using namespace kmjack;

struct EstimateArgs {
  std::string data;
  std::string impute;  // empty = original estimator only
  double q = 0.25;
  int b = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string last_weight = "reclassified";
};

int cmd_estimate(const EstimateArgs& args) {
  const Dataset d = read_dataset_csv(args.data);
  auto [sample, x] = order_dataset(d);
  const LastWeightRule rule =
      args.last_weight == "observed" ? LastWeightRule::observed : LastWeightRule::reclassified;

  const Integrand phi = [](double y) { return y; };
  EstimateBundle bundle;
  if (!args.impute.empty() && sample.last_status() == 0) {
    ImputationMethod method = ImputationMethod::parse(args.impute);
    method.gap_fraction = args.q;
    method.resample_count = args.b;
    method.seed = args.seed;
    const Imputer imputer = [&](const OrderedSample& s) { return impute_largest(method, s, x); };
    bundle = estimate_by_case(sample, phi, &imputer, rule);
  } else {
    bundle = corrected_estimate(sample, phi);
  }

  std::printf("n: %d\n", sample.n());
  std::printf("case (delta_(n-1), delta_(n)): (%d, %d)\n", bundle.delta_second_last,
              bundle.delta_last);
  std::printf("estimate: %s\n", format_double(bundle.s_hat).c_str());
  std::printf("jackknife_bias: %s\n", format_double(bundle.bias).c_str());
  std::printf("corrected: %s\n", format_double(bundle.s_tilde).c_str());
  std::printf("modified: %s\n", bundle.modified ? "yes" : "no");
  if (bundle.modified) {
    std::printf("imputation: %s\n", bundle.imputation.c_str());
    std::printf("imputed_time: %s\n", format_double(*bundle.imputed_time).c_str());
  } else if (!args.impute.empty() && bundle.delta_last == 1) {
    std::printf("imputation: not applied (largest observation uncensored)\n");
  }
  return 0;
}

int cmd_impute(const EstimateArgs& args) {
  const Dataset d = read_dataset_csv(args.data);
  auto [sample, x] = order_dataset(d);
  ImputationMethod method = ImputationMethod::parse(args.impute);
  method.gap_fraction = args.q;
  method.resample_count = args.b;
  method.seed = args.seed;
  const ImputedSample imp = impute_largest(method, sample, x);
  std::printf("method: %s\n", imp.method_tag.c_str());
  std::printf("largest_observation: %s\n", format_double(sample.time(sample.n() - 1)).c_str());
  std::printf("imputed_time: %s\n", format_double(imp.imputed_time).c_str());
  return 0;
}

struct StudyArgs {
  std::string config;
  std::string out;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<int> n_list;
  std::vector<double> p_list;
  std::vector<std::string> distributions;
  std::optional<std::string> impute;
  std::optional<int> b;
  std::optional<double> q;
  std::optional<std::string> constraint;
  std::optional<double> alpha;
  std::optional<std::string> starred_scope;
  bool quiet = false;
};

int cmd_study(StudyKind kind, const StudyArgs& args) {
  StudyConfig cfg = args.config.empty() ? StudyConfig::defaults(kind)
                                        : StudyConfig::from_json_file(args.config);
  if (cfg.study != kind)
    throw config_error("config is for study '" + study_kind_name(cfg.study) +
                       "', not this subcommand");
  if (args.replications) cfg.replications = *args.replications;
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  if (!args.n_list.empty()) cfg.n_list = args.n_list;
  if (!args.p_list.empty()) cfg.p_list = args.p_list;
  if (!args.distributions.empty()) cfg.distributions = args.distributions;
  if (args.impute) cfg.imputation = ImputationMethod::parse(*args.impute);
  if (args.b) cfg.imputation.resample_count = *args.b;
  if (args.q) cfg.imputation.gap_fraction = *args.q;
  if (args.constraint) cfg.constraint = parse_constraint(*args.constraint);
  if (args.alpha) cfg.alpha = *args.alpha;
  if (args.starred_scope) cfg.starred_scope = parse_starred_scope(*args.starred_scope);

  const ProgressFn progress =
      args.quiet ? ProgressFn{} : [](const std::string& msg) { std::printf("%s\n", msg.c_str()); };
  const StudyResult result = run_study(cfg, progress);
  emit_tables(result, args.out);
  std::printf("wrote %s/{bias,variance,curves}.csv (%.1fs)\n", args.out.c_str(),
              result.elapsed_seconds);
  return 0;
}

struct CalibrateArgs {
  std::string lifetime;
  std::string censor = "exp";
  double p = 0.5;
};

int cmd_calibrate(const CalibrateArgs& args) {
  const DistSpec lifetime = DistSpec::parse(args.lifetime);
  CensorFamily censor;
  if (args.censor == "exp")
    censor = CensorFamily::exp_rate;
  else if (args.censor == "uniform")
    censor = CensorFamily::uniform_a_2a;
  else
    throw config_error("censor family must be 'exp' or 'uniform'");
  std::printf("%s\n", format_double(calibrate_censoring(lifetime, censor, args.p)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kaplan-Meier mean lifetime estimation with jackknife bias correction"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Estimate the K-M mean of a time,status CSV with jackknife bias correction");
  estimate->add_option("--data", est.data, "dataset CSV (header time,status)")->required();
  estimate->add_option("--impute", est.impute,
                       "imputation method for a censored largest observation (efron, "
                       "predicted_difference, conditional_mean, conditional_median, "
                       "resampled_mean, resampled_median)");
  estimate->add_option("--q", est.q, "tail fraction for predicted_difference");
  estimate->add_option("--B", est.b, "bootstrap resamples for resampled methods");
  estimate->add_option("--seed", est.seed, "RNG seed");
  estimate->add_option("--last-weight", est.last_weight,
                       "last K-M weight rule: reclassified (default) or observed");

  EstimateArgs impu;
  CLI::App* impute = app.add_subcommand("impute", "Impute a censored largest observation");
  impute->add_option("--data", impu.data, "dataset CSV")->required();
  impute->add_option("--method", impu.impute, "imputation method")->required();
  impute->add_option("--q", impu.q, "tail fraction for predicted_difference");
  impute->add_option("--B", impu.b, "bootstrap resamples");
  impute->add_option("--seed", impu.seed, "RNG seed");

  auto add_study = [&](const char* name, const char* desc, StudyArgs& args) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", args.config, "study config JSON");
    sub->add_option("--out", args.out, "output directory")->required();
    sub->add_option("--replications", args.replications, "Monte Carlo replications per cell");
    sub->add_option("--seed", args.seed, "master seed (default 123456789)");
    sub->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    sub->add_option("--n", args.n_list, "sample sizes");
    sub->add_option("--p", args.p_list, "censoring percents");
    sub->add_option("--impute", args.impute, "imputation method");
    sub->add_option("--B", args.b, "bootstrap resamples");
    sub->add_option("--q", args.q, "tail fraction for predicted_difference");
    sub->add_option("--constraint", args.constraint,
                    "none | second_last_censored | second_last_censored_and_last_uncensored");
    sub->add_option("--starred-scope", args.starred_scope,
                    "starred estimators averaged over: all | censored_last_only");
    sub->add_flag("--quiet", args.quiet, "suppress progress lines");
    return sub;
  };

  StudyArgs kg_args, dist_args, aft_args;
  add_study("kg-study", "Koziol-Green simulation study", kg_args);
  CLI::App* dist = add_study("dist-study", "Skewed-distribution simulation study", dist_args);
  dist->add_option("--dist", dist_args.distributions,
                   "distributions: lognormal exponential gamma weibull");
  CLI::App* aft = add_study("aft-study", "Log-normal AFT simulation study", aft_args);
  aft->add_option("--alpha", aft_args.alpha, "AFT intercept");

  CalibrateArgs cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Solve the censoring parameter for a target censoring fraction");
  calibrate->add_option("--lifetime", cal.lifetime, "lifetime spec, e.g. exp:0.2 or gamma:4,1")
      ->required();
  calibrate->add_option("--censor", cal.censor, "censoring family: exp or uniform (U(a,2a))");
  calibrate->add_option("--p", cal.p, "target censoring fraction in (0,1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("estimate")) return cmd_estimate(est);
    if (app.got_subcommand("impute")) return cmd_impute(impu);
    if (app.got_subcommand("kg-study")) return cmd_study(StudyKind::koziol_green, kg_args);
    if (app.got_subcommand("dist-study")) return cmd_study(StudyKind::skewed, dist_args);
    if (app.got_subcommand("aft-study")) return cmd_study(StudyKind::aft, aft_args);
    if (app.got_subcommand("calibrate")) return cmd_calibrate(cal);
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {  // covers config_error
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
