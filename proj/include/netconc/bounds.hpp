#pragma once

#include <map>
#include <string>
#include <utility>

namespace netconc {

// Closed-form tail bounds P(|H - <H>| > t) for the supported ensembles and
// functionals, keyed by theorem label. The raw right-hand side can exceed 1;
// the clamped value min(raw, 1) is the usable probability bound.
//
//   T1      2 exp(-t^2 / c^2)                                   params: c
//   T3      2 exp(-N t^2 / (8 K^2 c^2))                         params: c, K, N
//   T4      2 exp(-N t^2 / (4 [c^2 (2K^2 p0^2 + K p0) + K c t/3]))
//                                                               params: c, K, N, p0
//   T5      2 exp(-N t^2 / ((25/2) K^2))                        params: K, N
//   T6      2 exp(-mu^2 N^2 - t^2) + 2 exp(-t^2 N^2 (p-mu)^2)   params: p, N, mu
//   T7      2 exp(-mu^2 N^{2b} / (2 l^2) - t^2 / (2 s^2))
//             + 2 exp(-t^2 (B/2-mu)^2 N^{2b} / 2)               params: B, beta, N, mu
//             with l = 1/2, s = 5/4
//   T8      2 exp(-N^2 t^2) for deviations exceeding N t        params: N
//   T9      2 exp(-N t^2 / (8 K^2))                             params: K, N
//   T10-ER  same form as T6                                     params: p, N, mu
//   T10-CL  same form as T7 but s = J/2                         params: B, beta, N, mu, J
//   T11     2 exp(-N t^2 / (8 K^2))                             params: K, N
//   Lemma2  exp(-t^2 / l^2), one-sided, l = 1/2                 params: (lambda optional)

enum class Theorem {
  t1,
  t3,
  t4,
  t5,
  t6,
  t7,
  t8,
  t9,
  t10_er,
  t10_cl,
  t11,
  lemma2,
};

const char* to_string(Theorem theorem);
Theorem theorem_from_string(const std::string& name);

struct BoundSpec {
  Theorem theorem = Theorem::t1;
  std::map<std::string, double> params;

  double param(const std::string& name) const;  // spec error when missing
  void validate() const;
};

struct BoundValue {
  double raw = 0.0;      // right-hand side as written; may exceed 1
  double clamped = 0.0;  // min(raw, 1)
};

BoundValue bound_eval(const BoundSpec& spec, double t);

/// True when the theorem has a free parameter mu to optimize over.
bool has_free_mu(Theorem theorem);

/// Grid search over 999 interior points of mu's open interval ((0,p) for
/// T6/T10-ER, (0,B/2) for T7/T10-CL); returns the minimizing mu and the raw
/// bound there.
std::pair<double, BoundValue> best_mu(const BoundSpec& spec, double t);

/// Community split threshold inputs: two communities of sizes n1, n2 with
/// m12 inter-community edges under coupling J.
struct ThresholdSpec {
  double j = 1.0;
  long long n1 = 1;
  long long n2 = 1;
  long long m12 = 0;

  void validate() const;
};

/// Outlink density threshold gamma* = J * m12 / (2 n1 n2); above it the
/// q-Potts optimum separates the two communities.
double gamma_star(const ThresholdSpec& spec);

}  // namespace netconc
