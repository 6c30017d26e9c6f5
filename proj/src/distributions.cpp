#include "kmjack/distributions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kmjack/stats.hpp"

namespace kmjack {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

DistSpec DistSpec::exponential(double rate) {
  require(rate > 0.0, "exponential: rate must be > 0");
  return {DistFamily::exponential, rate, 0.0};
}

DistSpec DistSpec::lognormal(double meanlog, double sdlog) {
  require(std::isfinite(meanlog) && sdlog > 0.0, "lognormal: need finite meanlog, sdlog > 0");
  return {DistFamily::lognormal, meanlog, sdlog};
}

DistSpec DistSpec::gamma(double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "gamma: shape and rate must be > 0");
  return {DistFamily::gamma, shape, rate};
}

DistSpec DistSpec::weibull(double shape, double scale) {
  require(shape > 0.0 && scale > 0.0, "weibull: shape and scale must be > 0");
  return {DistFamily::weibull, shape, scale};
}

DistSpec DistSpec::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform: need lo < hi");
  return {DistFamily::uniform, lo, hi};
}

DistSpec DistSpec::normal(double mean, double sd) {
  require(std::isfinite(mean) && sd > 0.0, "normal: need finite mean, sd > 0");
  return {DistFamily::normal, mean, sd};
}

double DistSpec::mean() const {
  switch (family) {
    case DistFamily::exponential: return 1.0 / p1;
    case DistFamily::lognormal: return std::exp(p1 + 0.5 * p2 * p2);
    case DistFamily::gamma: return p1 / p2;
    case DistFamily::weibull: return p2 * std::tgamma(1.0 + 1.0 / p1);
    case DistFamily::uniform: return 0.5 * (p1 + p2);
    case DistFamily::normal: return p1;
  }
  throw std::logic_error("unreachable");
}

double DistSpec::second_moment() const {
  switch (family) {
    case DistFamily::exponential: return 2.0 / (p1 * p1);
    case DistFamily::lognormal: return std::exp(2.0 * p1 + 2.0 * p2 * p2);
    case DistFamily::gamma: return p1 * (p1 + 1.0) / (p2 * p2);
    case DistFamily::weibull: return p2 * p2 * std::tgamma(1.0 + 2.0 / p1);
    case DistFamily::uniform: return (p1 * p1 + p1 * p2 + p2 * p2) / 3.0;
    case DistFamily::normal: return p1 * p1 + p2 * p2;
  }
  throw std::logic_error("unreachable");
}

double DistSpec::survival(double t) const {
  switch (family) {
    case DistFamily::exponential:
      return t <= 0.0 ? 1.0 : std::exp(-p1 * t);
    case DistFamily::lognormal:
      return t <= 0.0 ? 1.0 : stats::norm_sf((std::log(t) - p1) / p2);
    case DistFamily::gamma:
      return t <= 0.0 ? 1.0 : stats::gamma_q(p1, p2 * t);
    case DistFamily::weibull:
      return t <= 0.0 ? 1.0 : std::exp(-std::pow(t / p2, p1));
    case DistFamily::uniform:
      if (t <= p1) return 1.0;
      if (t >= p2) return 0.0;
      return (p2 - t) / (p2 - p1);
    case DistFamily::normal:
      return stats::norm_sf((t - p1) / p2);
  }
  throw std::logic_error("unreachable");
}

double DistSpec::sample(Rng& rng) const {
  switch (family) {
    case DistFamily::exponential: return rng.exponential(p1);
    case DistFamily::lognormal: return rng.lognormal(p1, p2);
    case DistFamily::gamma: return rng.gamma(p1, p2);
    case DistFamily::weibull: return rng.weibull(p1, p2);
    case DistFamily::uniform: return rng.uniform(p1, p2);
    case DistFamily::normal: return rng.normal(p1, p2);
  }
  throw std::logic_error("unreachable");
}

std::string DistSpec::label() const {
  std::ostringstream os;
  switch (family) {
    case DistFamily::exponential: os << "exp:" << p1; break;
    case DistFamily::lognormal: os << "lognormal:" << p1 << "," << p2; break;
    case DistFamily::gamma: os << "gamma:" << p1 << "," << p2; break;
    case DistFamily::weibull: os << "weibull:" << p1 << "," << p2; break;
    case DistFamily::uniform: os << "uniform:" << p1 << "," << p2; break;
    case DistFamily::normal: os << "normal:" << p1 << "," << p2; break;
  }
  return os.str();
}

DistSpec DistSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "distribution spec must look like family:params");
  const std::string name = text.substr(0, colon);
  std::vector<double> params;
  std::string rest = text.substr(colon + 1);
  std::istringstream is(rest);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    require(pos == tok.size(), "bad number in distribution spec");
    params.push_back(v);
  }
  auto need = [&](size_t k) { require(params.size() == k, "wrong parameter count for distribution"); };
  if (name == "exp" || name == "exponential") { need(1); return exponential(params[0]); }
  if (name == "lognormal" || name == "ln") { need(2); return lognormal(params[0], params[1]); }
  if (name == "gamma") { need(2); return gamma(params[0], params[1]); }
  if (name == "weibull") { need(2); return weibull(params[0], params[1]); }
  if (name == "uniform") { need(2); return uniform(params[0], params[1]); }
  if (name == "normal") { need(2); return normal(params[0], params[1]); }
  throw std::invalid_argument("unknown distribution family: " + name);
}

}  // namespace kmjack
