// Closed-form bound evaluation: the Chernoff estimate, the Theorem-1
// admissibility region, the expected-neighborhood and pivot-count intervals,
// and the Theorem-2 failure quantity Q (log-space).
//
// Probabilities are clamped to [0,1] with the clamping flagged rather than
// silent: the printed bounds legitimately exceed 1 in weak regimes and that
// is information. Existence constants with no formula (theta, D) are never
// computed here; callers may supply D to get the headline probability.

#pragma once

#include <optional>
#include <string>

namespace irg {

// 2*exp(-eta^2*mu/4); requires mu > 0 and 0 < eta < 1/2.
double chernoff(double mu, double eta);

struct Theorem1Params {
  double C = 0;
  int k = 1;
  double c1 = 0, c2 = 0;
  double alpha = 0;
  int n = 0;
};

struct Theorem1Report {
  double p = 0;          // C * n^{-k/(k+1)}
  double c_limit = 0;    // 1/(10*c2)
  bool c_ok = false;     // C <= c_limit
  double alpha_max = 0;  // min(7/8, (C*c1/8)^{k+1})
  double D = 0;          // (C*c1/8)^{k+1}
  bool alpha_ok = false;
  bool regime_ok = false;  // both constraints
  std::string notes;
};

Theorem1Report theorem1_admissible(const Theorem1Params& tp);

struct IntervalReport {
  double lo = 0, hi = 0;
  double log_lo = 0, log_hi = 0;  // natural logs, finite when lo/hi overflow
  bool regime_ok = true;
  std::string notes;
};

// [3*c1*n*p*s/4, c2*n*p*s]; regime wants 1 <= s <= 1/(10*c2*p).
IntervalReport expected_nout_interval(int n, double p, int s, double c1,
                                      double c2);

// [(c1*n*p/8)^l, (8*c2*n*p)^l]; regime wants p*(8*c2*n*p)^l <= 1/(10*c2),
// checked in log-space.
IntervalReport pivot_interval(int n, double p, int l, double c1, double c2);

struct Theorem2Report {
  double term1_log = 0;  // n*ln4 - d1*n^2*p/16
  double term2_log = 0;  // -d2*p^2*n/4
  double log_q = 0;      // log-sum-exp of the two terms; always finite
  double q = 0;          // exp(log_q); may overflow to inf (noted)
  double lower_bound = 0;       // max(0, 1 - n^2*q), clamped into [0,1]
  bool lower_clamped = false;   // true when 1 - n^2*q fell below 0
  std::optional<double> headline;  // 1 - exp(-D*(log n)^2) when D supplied
  std::string notes;
};

// Q = 4^n*exp(-d1*n^2*p/16) + exp(-d2*p^2*n/4). D is the exponent of the
// headline rate 1 - exp(-D*(log n)^2): supplied by the caller, or the
// headline is omitted.
Theorem2Report theorem2_failure(int n, double p, double d1, double d2,
                                std::optional<double> D = std::nullopt);

}  // namespace irg
