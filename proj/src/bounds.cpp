#include "irg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irg {

double chernoff(double mu, double eta) {
  if (!(mu > 0)) throw std::invalid_argument("chernoff: mu must be positive");
  if (!(eta > 0 && eta < 0.5))
    throw std::invalid_argument("chernoff: eta must lie in (0, 1/2)");
  return 2.0 * std::exp(-eta * eta * mu / 4.0);
}

Theorem1Report theorem1_admissible(const Theorem1Params& tp) {
  if (!(tp.C > 0) || tp.k < 1 || !(tp.c1 > 0) || !(tp.c2 > 0) ||
      !(tp.alpha > 0) || tp.n < 1)
    throw std::invalid_argument("theorem1_admissible: parameters must be positive");
  Theorem1Report rep;
  const double kk = static_cast<double>(tp.k);
  rep.p = tp.C * std::pow(static_cast<double>(tp.n), -kk / (kk + 1.0));
  rep.c_limit = 1.0 / (10.0 * tp.c2);
  rep.c_ok = tp.C <= rep.c_limit;
  rep.D = std::pow(tp.C * tp.c1 / 8.0, kk + 1.0);
  rep.alpha_max = std::min(7.0 / 8.0, rep.D);
  rep.alpha_ok = tp.alpha <= rep.alpha_max;
  rep.regime_ok = rep.c_ok && rep.alpha_ok;
  if (!rep.c_ok) rep.notes += "C exceeds 1/(10*c2); ";
  if (!rep.alpha_ok) rep.notes += "alpha exceeds min(7/8, (C*c1/8)^{k+1}); ";
  return rep;
}

IntervalReport expected_nout_interval(int n, double p, int s, double c1,
                                      double c2) {
  if (n < 1 || !(p > 0) || !(c1 > 0) || !(c2 > 0))
    throw std::invalid_argument("expected_nout_interval: bad parameters");
  IntervalReport rep;
  const double nps = static_cast<double>(n) * p * s;
  rep.lo = 3.0 * c1 * nps / 4.0;
  rep.hi = c2 * nps;
  rep.log_lo = std::log(rep.lo);
  rep.log_hi = std::log(rep.hi);
  if (s < 1) {
    rep.regime_ok = false;
    rep.notes += "s below 1; ";
  }
  if (static_cast<double>(s) > 1.0 / (10.0 * c2 * p)) {
    rep.regime_ok = false;
    rep.notes += "s exceeds 1/(10*c2*p); ";
  }
  return rep;
}

IntervalReport pivot_interval(int n, double p, int l, double c1, double c2) {
  if (n < 1 || !(p > 0) || l < 1 || !(c1 > 0) || !(c2 > 0))
    throw std::invalid_argument("pivot_interval: bad parameters");
  IntervalReport rep;
  const double np = static_cast<double>(n) * p;
  rep.log_lo = l * std::log(c1 * np / 8.0);
  rep.log_hi = l * std::log(8.0 * c2 * np);
  rep.lo = std::pow(c1 * np / 8.0, static_cast<double>(l));
  rep.hi = std::pow(8.0 * c2 * np, static_cast<double>(l));
  // regime: p*(8*c2*n*p)^l <= 1/(10*c2), in logs so large l cannot overflow
  if (std::log(p) + rep.log_hi > -std::log(10.0 * c2)) {
    rep.regime_ok = false;
    rep.notes += "p*(8*c2*n*p)^l exceeds 1/(10*c2); ";
  }
  if (!std::isfinite(rep.hi)) rep.notes += "hi overflowed, use log_hi; ";
  return rep;
}

Theorem2Report theorem2_failure(int n, double p, double d1, double d2,
                                std::optional<double> D) {
  if (n < 2 || !(p > 0 && p < 1) || !(d1 > 0) || !(d2 > 0))
    throw std::invalid_argument("theorem2_failure: need n >= 2, p in (0,1)");
  Theorem2Report rep;
  const double nn = static_cast<double>(n);
  rep.term1_log = nn * std::log(4.0) - d1 * nn * nn * p / 16.0;
  rep.term2_log = -d2 * p * p * nn / 4.0;
  const double hi = std::max(rep.term1_log, rep.term2_log);
  const double lo = std::min(rep.term1_log, rep.term2_log);
  rep.log_q = hi + std::log1p(std::exp(lo - hi));
  rep.q = std::exp(rep.log_q);
  if (!std::isfinite(rep.q)) rep.notes += "q overflowed, use log_q; ";

  const double log_n2q = 2.0 * std::log(nn) + rep.log_q;
  if (log_n2q >= 0) {
    rep.lower_bound = 0;
    rep.lower_clamped = true;
    rep.notes += "1 - n^2*q clamped at 0; ";
  } else {
    rep.lower_bound = -std::expm1(log_n2q);  // 1 - n^2*q, accurately
  }
  if (D) {
    const double ln_n = std::log(nn);
    rep.headline = -std::expm1(-(*D) * ln_n * ln_n);
  }
  return rep;
}

}  // namespace irg
