#include "kmjack/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"
#include "kmjack/csv.hpp"
#include "kmjack/errors.hpp"
#include "kmjack/jackknife.hpp"

namespace kmjack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Integrand& identity_phi() {
  static const Integrand phi = [](double y) { return y; };
  return phi;
}

// Deterministic pairwise reduction; stable against summation order because
// the inputs are already in replication order.
double pairwise_sum(const double* xs, size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += xs[i];
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(xs, half) + pairwise_sum(xs + half, n - half);
}

struct MeanVar {
  double mean = kNaN;
  double var = kNaN;
  int count = 0;
};

MeanVar mean_var(const std::vector<double>& values, const std::vector<std::uint8_t>& valid) {
  std::vector<double> kept;
  kept.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    if (valid.empty() || valid[i]) kept.push_back(values[i]);
  MeanVar out;
  out.count = static_cast<int>(kept.size());
  if (kept.empty()) return out;
  out.mean = pairwise_sum(kept.data(), kept.size()) / out.count;
  if (out.count < 2) {
    out.var = 0.0;
    return out;
  }
  std::vector<double> sq(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const double d = kept[i] - out.mean;
    sq[i] = d * d;
  }
  out.var = pairwise_sum(sq.data(), sq.size()) / (out.count - 1);
  return out;
}

void parallel_reps(int reps, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, reps));
  if (threads == 1) {
    for (int r = 0; r < reps; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    constexpr int kBlock = 32;
    for (;;) {
      const int start = next.fetch_add(kBlock);
      if (start >= reps) return;
      const int end = std::min(reps, start + kBlock);
      try {
        for (int r = start; r < end; ++r) body(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct PassBuffers {
  std::vector<double> s_hat, s_tilde, bias4, s_hat_star, s_tilde_star, bias_star, censored_frac;
  std::vector<std::uint8_t> starred_valid, violation;

  explicit PassBuffers(int reps)
      : s_hat(reps, kNaN),
        s_tilde(reps, kNaN),
        bias4(reps, kNaN),
        s_hat_star(reps, kNaN),
        s_tilde_star(reps, kNaN),
        bias_star(reps, kNaN),
        censored_frac(reps, kNaN),
        starred_valid(reps, 0),
        violation(reps, 0) {}
};

double censored_fraction(const OrderedSample& s) {
  int c = 0;
  for (int i = 0; i < s.n(); ++i) c += s.status(i) == 0;
  return static_cast<double>(c) / s.n();
}

// Modified estimators for one dataset. When the largest observation is an
// event they equal the originals (rows (.,1) of the case table); when it is
// censored, the configured imputation feeds the modified formulas. A
// replication where the imputation is undefined (too few uncensored values,
// bootstrap refits all singular) is dropped from the starred averages.
void compute_starred(const GeneratedDataset& ds, const ImputationMethod& method, Rng& rng,
                     bool include_uncensored_last, const EstimateBundle& orig, PassBuffers& buf,
                     int r) {
  const OrderedSample& s = ds.sample;
  if (s.last_status() == 1) {
    if (!include_uncensored_last) return;
    buf.s_hat_star[r] = orig.s_hat;
    buf.s_tilde_star[r] = orig.s_tilde;
    buf.bias_star[r] = orig.bias;
    buf.starred_valid[r] = 1;
    return;
  }
  ImputationMethod m = method;
  m.seed = rng.next_u64();
  try {
    const ImputedSample imp = impute_largest(m, s, ds.covariates);
    if (m.variant != ImputeVariant::efron && !(imp.imputed_time > s.time(s.n() - 1)))
      buf.violation[r] = 1;
    const EstimateBundle b = modified_estimates(s, imp, identity_phi());
    buf.s_hat_star[r] = b.s_hat;
    buf.s_tilde_star[r] = b.s_tilde;
    buf.bias_star[r] = b.bias;
    buf.starred_valid[r] = 1;
  } catch (const std::invalid_argument&) {
    // insufficient data for this draw
  } catch (const numeric_error&) {
  }
}

struct CellContext {
  StudyKind study;
  const StudyConfig* config;
  const SkewedModel* skewed;              // skewed study
  std::optional<double> censor_param;     // skewed study, p > 0
  const AftModel* aft;                    // aft study
  std::optional<double> log_censor_a;     // aft study, p > 0
  double p = 0.0;                         // fraction
  int n = 0;
  std::uint64_t dist_idx = 0, n_idx = 0, p_idx = 0;
};

GeneratedDataset generate(const CellContext& ctx, Constraint constraint, std::uint64_t stream) {
  switch (ctx.study) {
    case StudyKind::koziol_green:
      return gen_koziol_green(ctx.n, ctx.p, stream, constraint);
    case StudyKind::skewed:
      return gen_skewed_with_param(*ctx.skewed, ctx.censor_param, ctx.p, ctx.n, stream, constraint);
    case StudyKind::aft: {
      AftModel model = *ctx.aft;
      return gen_aft_with_param(model, ctx.log_censor_a, ctx.p, ctx.n, stream, constraint);
    }
  }
  throw std::logic_error("unreachable");
}

std::uint64_t rep_stream(const CellContext& ctx, std::uint64_t pass, std::uint64_t rep) {
  return derive_stream(ctx.config->seed,
                       {static_cast<std::uint64_t>(ctx.study), ctx.dist_idx, ctx.n_idx, ctx.p_idx,
                        pass, rep});
}

CellResult run_cell(const CellContext& ctx, double true_mean_value, const std::string& dist_label) {
  const StudyConfig& cfg = *ctx.config;
  const int reps = cfg.replications;
  const bool two_pass = cfg.constraint == Constraint::second_last_censored;

  PassBuffers buf(reps);

  if (!two_pass) {
    const Constraint c = cfg.constraint;
    const bool include_uncensored_last = cfg.starred_scope == StarredScope::all_draws;
    parallel_reps(reps, cfg.threads, [&](int r) {
      const std::uint64_t stream = rep_stream(ctx, 0, r);
      Rng rng(derive_stream(stream, {0xABCD}));  // imputation seeds, distinct from generation
      const GeneratedDataset ds = generate(ctx, c, stream);
      const EstimateBundle b = corrected_estimate(ds.sample, identity_phi());
      buf.s_hat[r] = b.s_hat;
      buf.s_tilde[r] = b.s_tilde;
      buf.bias4[r] = b.bias;
      buf.censored_frac[r] = censored_fraction(ds.sample);
      compute_starred(ds, cfg.imputation, rng, include_uncensored_last, b, buf, r);
    });
  } else {
    // originals on (delta_(n-1)=0, delta_(n)=1) draws
    parallel_reps(reps, cfg.threads, [&](int r) {
      const std::uint64_t stream = rep_stream(ctx, 0, r);
      const GeneratedDataset ds =
          generate(ctx, Constraint::second_last_censored_and_last_uncensored, stream);
      const EstimateBundle b = corrected_estimate(ds.sample, identity_phi());
      buf.s_hat[r] = b.s_hat;
      buf.s_tilde[r] = b.s_tilde;
      buf.bias4[r] = b.bias;
      buf.censored_frac[r] = censored_fraction(ds.sample);
    });
    // starred on delta_(n-1)=0 draws
    parallel_reps(reps, cfg.threads, [&](int r) {
      const std::uint64_t stream = rep_stream(ctx, 1, r);
      Rng rng(derive_stream(stream, {0xABCD}));
      const GeneratedDataset ds = generate(ctx, Constraint::second_last_censored, stream);
      const EstimateBundle b = corrected_estimate(ds.sample, identity_phi());
      compute_starred(ds, cfg.imputation, rng, /*include_uncensored_last=*/true, b.s_hat,
                      b.s_tilde, buf, r);
    });
  }

  CellResult cell;
  cell.dist_label = dist_label;
  cell.n = ctx.n;
  cell.p_percent = ctx.p * 100.0;

  const std::vector<std::uint8_t> all_valid;  // empty mask = everything valid
  const MeanVar hat = mean_var(buf.s_hat, all_valid);
  const MeanVar til = mean_var(buf.s_tilde, all_valid);
  const MeanVar hat_star = mean_var(buf.s_hat_star, buf.starred_valid);
  const MeanVar til_star = mean_var(buf.s_tilde_star, buf.starred_valid);

  auto summary = [&](const char* name, const MeanVar& mv) {
    RunSummary s;
    s.estimator = name;
    s.n = ctx.n;
    s.p_percent = cell.p_percent;
    s.mean_bias = mv.mean - true_mean_value;
    s.variance = mv.var;
    s.replications = reps;
    s.valid_count = mv.count;
    return s;
  };
  cell.summaries = {summary("S_hat", hat), summary("S_hat_star", hat_star),
                    summary("S_tilde", til), summary("S_tilde_star", til_star)};

  cell.empirical_censoring = mean_var(buf.censored_frac, all_valid).mean;
  cell.mean_correction = mean_var(buf.bias4, all_valid).mean;
  cell.imputation_violations = 0;
  for (std::uint8_t v : buf.violation) cell.imputation_violations += v;
  return cell;
}

void validate(const StudyConfig& cfg) {
  if (cfg.replications < 1) throw config_error("replications must be >= 1");
  if (cfg.n_list.empty()) throw config_error("n_list must not be empty");
  for (int n : cfg.n_list)
    if (n < 2) throw config_error("every n must be >= 2");
  if (cfg.p_list.empty()) throw config_error("p_list must not be empty");
  for (double p : cfg.p_list)
    if (!(p >= 0.0 && p < 100.0))
      throw config_error("censoring percents must lie in [0,100)");
  if (cfg.imputation.needs_covariates() && cfg.study != StudyKind::aft)
    throw config_error("imputation method " + cfg.imputation.tag() +
                       " needs covariates; only the aft study provides them");
  if (cfg.constraint != Constraint::none)
    for (double p : cfg.p_list)
      if (p == 0.0)
        throw config_error("conditioned draws require censoring: drop p=0 or use constraint none");
  if (cfg.study == StudyKind::skewed) {
    if (cfg.distributions.empty())
      throw config_error("the dist study needs at least one distribution");
    for (const auto& d : cfg.distributions) skewed_model(d);  // throws on unknown names
  }
  if (cfg.imputation.resample_count < 1) throw config_error("resample count B must be >= 1");
  if (!(cfg.imputation.gap_fraction > 0.0 && cfg.imputation.gap_fraction <= 1.0))
    throw config_error("gap fraction q must lie in (0,1]");
}

}  // namespace

StudyKind parse_study_kind(const std::string& name) {
  if (name == "kg" || name == "koziol_green") return StudyKind::koziol_green;
  if (name == "dist" || name == "skewed") return StudyKind::skewed;
  if (name == "aft") return StudyKind::aft;
  throw config_error("unknown study: " + name);
}

std::string study_kind_name(StudyKind k) {
  switch (k) {
    case StudyKind::koziol_green: return "kg";
    case StudyKind::skewed: return "dist";
    case StudyKind::aft: return "aft";
  }
  throw std::logic_error("unreachable");
}

StarredScope parse_starred_scope(const std::string& name) {
  if (name == "all") return StarredScope::all_draws;
  if (name == "censored_last_only") return StarredScope::censored_last_only;
  throw config_error("unknown starred scope: " + name);
}

std::string starred_scope_name(StarredScope s) {
  return s == StarredScope::all_draws ? "all" : "censored_last_only";
}

double true_mean(const DistSpec& dist) { return dist.mean(); }

double aft_true_mean(double alpha, const std::vector<double>& beta, double sigma) {
  AftModel m;
  m.alpha = alpha;
  m.beta = beta;
  m.sigma = sigma;
  return m.true_mean();
}

StudyConfig StudyConfig::defaults(StudyKind kind) {
  StudyConfig cfg;
  cfg.study = kind;
  cfg.p_list = {10, 20, 30, 40, 50, 60, 70, 80, 90};
  cfg.n_list = {30, 50, 100, 150};
  switch (kind) {
    case StudyKind::koziol_green:
      cfg.imputation.variant = ImputeVariant::predicted_difference;
      cfg.starred_scope = StarredScope::censored_last_only;
      break;
    case StudyKind::skewed:
      cfg.distributions = skewed_model_names();
      cfg.constraint = Constraint::second_last_censored;
      cfg.imputation.variant = ImputeVariant::predicted_difference;
      cfg.starred_scope = StarredScope::all_draws;
      break;
    case StudyKind::aft:
      cfg.n_list = {30, 50, 100};
      cfg.p_list = {10, 20, 30, 40, 50, 60, 70};
      cfg.imputation.variant = ImputeVariant::resampled_mean;
      cfg.starred_scope = StarredScope::all_draws;
      break;
  }
  return cfg;
}

StudyConfig StudyConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  if (!j.contains("study")) throw config_error("config needs a \"study\" field");
  if (!j["study"].is_string()) throw config_error("config field \"study\" must be a string");

  StudyConfig cfg = defaults(parse_study_kind(j["study"].get<std::string>()));
  static const char* known[] = {"study",        "distributions", "n_list",
                                "p_list",       "replications",  "seed",
                                "constraint",   "imputation",    "alpha",
                                "starred_scope", "threads"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return it.key() == k; }) == std::end(known))
      throw config_error("unknown config field: " + it.key());
  }
  try {
    if (j.contains("distributions")) cfg.distributions = j["distributions"].get<std::vector<std::string>>();
    if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
    if (j.contains("p_list")) cfg.p_list = j["p_list"].get<std::vector<double>>();
    if (j.contains("replications")) cfg.replications = j["replications"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("constraint")) cfg.constraint = parse_constraint(j["constraint"].get<std::string>());
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("starred_scope"))
      cfg.starred_scope = parse_starred_scope(j["starred_scope"].get<std::string>());
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("imputation")) {
      const auto& ji = j["imputation"];
      if (ji.contains("method"))
        cfg.imputation = ImputationMethod::parse(ji["method"].get<std::string>());
      if (ji.contains("B")) cfg.imputation.resample_count = ji["B"].get<int>();
      if (ji.contains("q")) cfg.imputation.gap_fraction = ji["q"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config field error: ") + e.what());
  }
  return cfg;
}

std::string StudyConfig::to_json() const {
  nlohmann::json j;
  j["study"] = study_kind_name(study);
  if (study == StudyKind::skewed) j["distributions"] = distributions;
  j["n_list"] = n_list;
  j["p_list"] = p_list;
  j["replications"] = replications;
  j["seed"] = seed;
  j["constraint"] = constraint_name(constraint);
  j["imputation"] = {{"method", imputation.tag()},
                     {"B", imputation.resample_count},
                     {"q", imputation.gap_fraction}};
  j["alpha"] = alpha;
  j["starred_scope"] = starred_scope_name(starred_scope);
  j["threads"] = threads;
  return j.dump(2) + "\n";
}

StudyResult run_study(const StudyConfig& config, const ProgressFn& progress) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();

  StudyResult result;
  result.config = config;

  std::vector<std::string> dist_labels;
  if (config.study == StudyKind::skewed)
    dist_labels = config.distributions;
  else
    dist_labels = {""};

  AftModel aft;
  aft.alpha = config.alpha;
  std::optional<LogUniformCalibrator> aft_cal;
  if (config.study == StudyKind::aft &&
      std::any_of(config.p_list.begin(), config.p_list.end(), [](double p) { return p > 0.0; }))
    aft_cal = aft.calibrator();

  for (size_t d = 0; d < dist_labels.size(); ++d) {
    std::optional<SkewedModel> model;
    if (config.study == StudyKind::skewed) model = skewed_model(dist_labels[d]);

    double tm = 0.0;
    switch (config.study) {
      case StudyKind::koziol_green: tm = 1.0; break;
      case StudyKind::skewed: tm = model->lifetime.mean(); break;
      case StudyKind::aft: tm = aft.true_mean(); break;
    }

    for (size_t ni = 0; ni < config.n_list.size(); ++ni) {
      for (size_t pi = 0; pi < config.p_list.size(); ++pi) {
        CellContext ctx;
        ctx.study = config.study;
        ctx.config = &config;
        ctx.skewed = model ? &*model : nullptr;
        ctx.aft = &aft;
        ctx.p = config.p_list[pi] / 100.0;
        ctx.n = config.n_list[ni];
        ctx.dist_idx = d;
        ctx.n_idx = ni;
        ctx.p_idx = pi;
        if (ctx.p > 0.0) {
          if (config.study == StudyKind::skewed)
            ctx.censor_param = calibrate_censoring(model->lifetime, model->censor, ctx.p);
          else if (config.study == StudyKind::aft)
            ctx.log_censor_a = aft_cal->solve(ctx.p);
        }

        result.cells.push_back(run_cell(ctx, tm, dist_labels[d]));
        if (progress) {
          std::string label = study_kind_name(config.study);
          if (!dist_labels[d].empty()) label += " " + dist_labels[d];
          char msg[160];
          std::snprintf(msg, sizeof(msg), "%s n=%d p=%g%% done", label.c_str(), ctx.n,
                        config.p_list[pi]);
          progress(msg);
        }
      }
    }
  }

  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

namespace {

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string table_csv(const std::vector<const CellResult*>& cells, bool variance) {
  // rows sorted by (p, n, estimator)
  struct Row {
    double p;
    int n;
    const RunSummary* s;
  };
  std::vector<Row> rows;
  for (const CellResult* c : cells)
    for (const RunSummary& s : c->summaries) rows.push_back({c->p_percent, c->n, &s});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.n != b.n) return a.n < b.n;
    return a.s->estimator < b.s->estimator;
  });
  std::string out = "p_percent,n,estimator,value,replications,valid_count\n";
  for (const Row& r : rows) {
    out += format_double(r.p);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += r.s->estimator;
    out += ',';
    out += format_double(variance ? r.s->variance : r.s->mean_bias);
    out += ',';
    out += std::to_string(r.s->replications);
    out += ',';
    out += std::to_string(r.s->valid_count);
    out += '\n';
  }
  return out;
}

std::string curves_csv(const std::vector<const CellResult*>& cells) {
  struct Row {
    const RunSummary* s;
    const CellResult* c;
  };
  std::vector<Row> rows;
  for (const CellResult* c : cells)
    for (const RunSummary& s : c->summaries) rows.push_back({&s, c});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.s->estimator != b.s->estimator) return a.s->estimator < b.s->estimator;
    if (a.c->n != b.c->n) return a.c->n < b.c->n;
    return a.c->p_percent < b.c->p_percent;
  });
  std::string out = "p_percent,n,estimator,mean_bias,variance,empirical_censoring\n";
  for (const Row& r : rows) {
    out += format_double(r.c->p_percent);
    out += ',';
    out += std::to_string(r.c->n);
    out += ',';
    out += r.s->estimator;
    out += ',';
    out += format_double(r.s->mean_bias);
    out += ',';
    out += format_double(r.s->variance);
    out += ',';
    out += format_double(r.c->empirical_censoring);
    out += '\n';
  }
  return out;
}

}  // namespace

void emit_tables(const StudyResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + out_dir);

  std::vector<std::string> labels;
  for (const CellResult& c : result.cells)
    if (std::find(labels.begin(), labels.end(), c.dist_label) == labels.end())
      labels.push_back(c.dist_label);

  for (const std::string& label : labels) {
    std::vector<const CellResult*> cells;
    for (const CellResult& c : result.cells)
      if (c.dist_label == label) cells.push_back(&c);
    fs::path dir = out_dir;
    if (!label.empty()) {
      dir /= label;
      fs::create_directories(dir, ec);
      if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());
    }
    write_file((dir / "bias.csv").string(), table_csv(cells, /*variance=*/false));
    write_file((dir / "variance.csv").string(), table_csv(cells, /*variance=*/true));
    write_file((dir / "curves.csv").string(), curves_csv(cells));
  }
  write_file((fs::path(out_dir) / "config.used.json").string(), result.config.to_json());
}

}  // namespace kmjack
