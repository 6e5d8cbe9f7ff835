#include "netconc/bounds.hpp"

#include <cmath>
#include <limits>

#include "netconc/error.hpp"

namespace netconc {

namespace {

constexpr double kHoeffdingLambda = 0.5;
constexpr double kModularitySigma = 1.25;  // T7's fixed 5/4

struct MuInterval {
  double lo;
  double hi;
};

MuInterval mu_interval(const BoundSpec& spec) {
  switch (spec.theorem) {
    case Theorem::t6:
    case Theorem::t10_er:
      return {0.0, spec.param("p")};
    case Theorem::t7:
    case Theorem::t10_cl:
      return {0.0, spec.param("B") / 2.0};
    default:
      fail(ErrorKind::invalid_spec,
           std::string(to_string(spec.theorem)) + " has no free mu parameter");
  }
}

double two_exp(double exponent) { return 2.0 * std::exp(exponent); }

double eval_raw(const BoundSpec& spec, double t) {
  switch (spec.theorem) {
    case Theorem::t1: {
      const double c = spec.param("c");
      return two_exp(-t * t / (c * c));
    }
    case Theorem::t3: {
      const double c = spec.param("c"), k = spec.param("K"), n = spec.param("N");
      return two_exp(-n * t * t / (8.0 * k * k * c * c));
    }
    case Theorem::t4: {
      const double c = spec.param("c"), k = spec.param("K"), n = spec.param("N");
      const double p0 = spec.param("p0");
      const double denom = 4.0 * (c * c * (2.0 * k * k * p0 * p0 + k * p0) + k * c * t / 3.0);
      if (denom <= 0.0) return t > 0.0 ? 0.0 : 2.0;  // p0 = 0, t = 0 edge
      return two_exp(-n * t * t / denom);
    }
    case Theorem::t5: {
      const double k = spec.param("K"), n = spec.param("N");
      return two_exp(-n * t * t / (12.5 * k * k));
    }
    case Theorem::t6:
    case Theorem::t10_er: {
      const double p = spec.param("p"), n = spec.param("N"), mu = spec.param("mu");
      return two_exp(-mu * mu * n * n - t * t) +
             two_exp(-t * t * n * n * (p - mu) * (p - mu));
    }
    case Theorem::t7:
    case Theorem::t10_cl: {
      const double b = spec.param("B"), beta = spec.param("beta"), n = spec.param("N");
      const double mu = spec.param("mu");
      const double sigma =
          spec.theorem == Theorem::t7 ? kModularitySigma : spec.param("J") / 2.0;
      const double n2b = std::pow(n, 2.0 * beta);
      const double half_b = b / 2.0;
      return two_exp(-mu * mu * n2b / (2.0 * kHoeffdingLambda * kHoeffdingLambda) -
                     t * t / (2.0 * sigma * sigma)) +
             two_exp(-t * t * (half_b - mu) * (half_b - mu) * n2b / 2.0);
    }
    case Theorem::t8: {
      const double n = spec.param("N");
      return two_exp(-n * n * t * t);
    }
    case Theorem::t9:
    case Theorem::t11: {
      const double k = spec.param("K"), n = spec.param("N");
      return two_exp(-n * t * t / (8.0 * k * k));
    }
    case Theorem::lemma2: {
      const double lambda =
          spec.params.count("lambda") ? spec.params.at("lambda") : kHoeffdingLambda;
      return std::exp(-t * t / (lambda * lambda));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

const char* to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::t1: return "T1";
    case Theorem::t3: return "T3";
    case Theorem::t4: return "T4";
    case Theorem::t5: return "T5";
    case Theorem::t6: return "T6";
    case Theorem::t7: return "T7";
    case Theorem::t8: return "T8";
    case Theorem::t9: return "T9";
    case Theorem::t10_er: return "T10-ER";
    case Theorem::t10_cl: return "T10-CL";
    case Theorem::t11: return "T11";
    case Theorem::lemma2: return "Lemma2";
  }
  return "unknown";
}

Theorem theorem_from_string(const std::string& name) {
  for (Theorem t : {Theorem::t1, Theorem::t3, Theorem::t4, Theorem::t5, Theorem::t6,
                    Theorem::t7, Theorem::t8, Theorem::t9, Theorem::t10_er, Theorem::t10_cl,
                    Theorem::t11, Theorem::lemma2})
    if (name == to_string(t)) return t;
  fail(ErrorKind::invalid_spec, "unknown theorem label: " + name);
}

double BoundSpec::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end())
    fail(ErrorKind::invalid_spec,
         std::string(to_string(theorem)) + " needs parameter '" + name + "'");
  return it->second;
}

void BoundSpec::validate() const {
  auto check_prob = [&](const char* name) {
    const double v = param(name);
    if (v < 0.0 || v > 1.0)
      fail(ErrorKind::invalid_spec, std::string(name) + " must be in [0, 1]");
  };
  auto check_n = [&] {
    if (param("N") < 2) fail(ErrorKind::invalid_spec, "N must be >= 2");
  };
  auto check_k = [&] {
    if (param("K") < 1) fail(ErrorKind::invalid_spec, "K must be >= 1");
  };
  switch (theorem) {
    case Theorem::t1:
      param("c");
      break;
    case Theorem::t3:
      param("c");
      check_k();
      check_n();
      break;
    case Theorem::t4:
      param("c");
      check_k();
      check_n();
      check_prob("p0");
      break;
    case Theorem::t5:
    case Theorem::t9:
    case Theorem::t11:
      check_k();
      check_n();
      break;
    case Theorem::t6:
    case Theorem::t10_er: {
      check_prob("p");
      check_n();
      const double mu = param("mu");
      if (!(mu > 0.0 && mu < param("p")))
        fail(ErrorKind::invalid_spec, "mu must lie in (0, p)");
      break;
    }
    case Theorem::t7:
    case Theorem::t10_cl: {
      check_n();
      if (!(param("B") > 0.0)) fail(ErrorKind::invalid_spec, "B must be positive");
      if (!(param("beta") > 0.0)) fail(ErrorKind::invalid_spec, "beta must be positive");
      const double mu = param("mu");
      if (!(mu > 0.0 && mu < param("B") / 2.0))
        fail(ErrorKind::invalid_spec, "mu must lie in (0, B/2)");
      if (theorem == Theorem::t10_cl && !(param("J") > 0.0))
        fail(ErrorKind::invalid_spec, "J must be positive");
      break;
    }
    case Theorem::t8:
      check_n();
      break;
    case Theorem::lemma2:
      break;
  }
}

BoundValue bound_eval(const BoundSpec& spec, double t) {
  if (t < 0.0) fail(ErrorKind::invalid_input, "bound evaluation needs t >= 0");
  spec.validate();
  const double raw = eval_raw(spec, t);
  return BoundValue{raw, std::min(raw, 1.0)};
}

bool has_free_mu(Theorem theorem) {
  return theorem == Theorem::t6 || theorem == Theorem::t7 || theorem == Theorem::t10_er ||
         theorem == Theorem::t10_cl;
}

std::pair<double, BoundValue> best_mu(const BoundSpec& spec, double t) {
  if (!has_free_mu(spec.theorem))
    fail(ErrorKind::invalid_spec,
         std::string(to_string(spec.theorem)) + " has no free mu parameter");
  const MuInterval interval = mu_interval(spec);
  if (!(interval.hi > interval.lo))
    fail(ErrorKind::invalid_spec, "empty feasible interval for mu");

  // 999 interior grid points with step (hi-lo)/1000: includes the midpoint.
  const double step = (interval.hi - interval.lo) / 1000.0;
  BoundSpec candidate = spec;
  double best_mu_value = 0.0;
  double best_raw = std::numeric_limits<double>::infinity();
  BoundValue best_bound;
  for (int k = 1; k <= 999; ++k) {
    const double mu = interval.lo + step * k;
    candidate.params["mu"] = mu;
    const BoundValue value = bound_eval(candidate, t);
    if (value.raw < best_raw) {
      best_raw = value.raw;
      best_mu_value = mu;
      best_bound = value;
    }
  }
  return {best_mu_value, best_bound};
}

void ThresholdSpec::validate() const {
  if (n1 < 1 || n2 < 1) fail(ErrorKind::invalid_spec, "community sizes must be >= 1");
  if (m12 < 0 || m12 > n1 * n2)
    fail(ErrorKind::invalid_spec, "inter-community edge count must be in [0, n1*n2]");
}

double gamma_star(const ThresholdSpec& spec) {
  spec.validate();
  return spec.j * static_cast<double>(spec.m12) /
         (2.0 * static_cast<double>(spec.n1) * static_cast<double>(spec.n2));
}

}  // namespace netconc
