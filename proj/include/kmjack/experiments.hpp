#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kmjack/distributions.hpp"
#include "kmjack/imputation.hpp"
#include "kmjack/rng.hpp"
#include "kmjack/simgen.hpp"

namespace kmjack {

enum class StudyKind { koziol_green, skewed, aft };

StudyKind parse_study_kind(const std::string& name);
std::string study_kind_name(StudyKind k);

// Which draws the modified (starred) estimators are averaged over in an
// unconditional study: every draw (they coincide with the originals when the
// largest observation is an event), or only the draws where the largest
// observation is censored and imputation actually happens.
enum class StarredScope { all_draws, censored_last_only };

StarredScope parse_starred_scope(const std::string& name);
std::string starred_scope_name(StarredScope s);

struct StudyConfig {
  StudyKind study = StudyKind::koziol_green;
  std::vector<std::string> distributions;  // skewed study only
  std::vector<int> n_list;
  std::vector<double> p_list;  // censoring percents; 0 means no censoring
  int replications = 10000;
  std::uint64_t seed = kDefaultSeed;
  // none: one unconditional pass. second_last_censored: two conditioned
  // passes, originals on (delta_(n-1)=0, delta_(n)=1) draws and starred on
  // delta_(n-1)=0 draws. The strict constraint runs a single conditioned pass.
  Constraint constraint = Constraint::none;
  ImputationMethod imputation;
  double alpha = 0.0;  // AFT intercept
  StarredScope starred_scope = StarredScope::censored_last_only;
  int threads = 0;  // 0 = hardware concurrency

  static StudyConfig defaults(StudyKind kind);
  static StudyConfig from_json_file(const std::string& path);
  std::string to_json() const;
};

struct RunSummary {
  std::string estimator;  // S_hat | S_hat_star | S_tilde | S_tilde_star
  int n = 0;
  double p_percent = 0.0;
  double mean_bias = 0.0;  // mean(estimate) - true mean, over valid replications
  double variance = 0.0;   // sample variance of the estimate over valid replications
  int replications = 0;
  int valid_count = 0;
};

struct CellResult {
  std::string dist_label;  // empty for the KG and AFT studies
  int n = 0;
  double p_percent = 0.0;
  std::vector<RunSummary> summaries;  // the four estimators, fixed order
  double empirical_censoring = 0.0;   // mean censored fraction over replications
  // Per-replication jackknife bias estimates (the quantity the reference
  // tables and figures track): the plain formula for the original estimator,
  // the imputed-tail formula for the modified one.
  double mean_jk_bias = 0.0;
  double var_jk_bias = 0.0;
  double mean_jk_bias_star = 0.0;
  double var_jk_bias_star = 0.0;
  long imputation_violations = 0;  // imputed values not strictly above Y_(n)
};

struct StudyResult {
  StudyConfig config;
  std::vector<CellResult> cells;
  double elapsed_seconds = 0.0;
};

// Analytic mean lifetime oracles.
double true_mean(const DistSpec& dist);
double aft_true_mean(double alpha, const std::vector<double>& beta, double sigma);

using ProgressFn = std::function<void(const std::string&)>;

// Runs the configured study. Every replication draws from a stream derived
// from (seed, cell, pass, replication), so output is byte-identical for any
// thread count.
StudyResult run_study(const StudyConfig& config, const ProgressFn& progress = {});

// Writes bias.csv, variance.csv, curves.csv, and config.used.json under
// out_dir (per-distribution subdirectories for multi-distribution studies).
void emit_tables(const StudyResult& result, const std::string& out_dir);

}  // namespace kmjack
