// Small statistics helpers shared by the experiment harnesses.

#pragma once

#include <cmath>
#include <utility>

namespace irg {

struct WilsonInterval {
  double lo = 0, hi = 1;
};

// 95% Wilson score interval by default (z = Phi^{-1}(0.975)).
inline WilsonInterval wilson_interval(int successes, int trials,
                                      double z = 1.959963984540054) {
  if (trials <= 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (phat + z2 / (2.0 * nt)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  double lo = center - half;
  double hi = center + half;
  if (lo < 0) lo = 0;
  if (hi > 1) hi = 1;
  return {lo, hi};
}

}  // namespace irg
