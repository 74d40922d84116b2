#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "irg/bounds.hpp"
#include "irg/rng.hpp"

using namespace irg;

TEST_CASE("chernoff golden value and shape") {
  // 2*exp(-eta^2*mu/4) at mu=64, eta=1/4 is exactly 2/e
  CHECK(chernoff(64, 0.25) ==
        doctest::Approx(0.73575888234288464319).epsilon(1e-13));
  double prev = 1e9;
  for (double mu : {10.0, 100.0, 1000.0, 10000.0}) {
    double b = chernoff(mu, 0.25);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(chernoff(0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(chernoff(10, 0.5), std::invalid_argument);  // needs < 1/2
  CHECK_THROWS_AS(chernoff(10, 0.0), std::invalid_argument);
}

TEST_CASE("chernoff dominates the empirical binomial deviation") {
  // Binomial(1000, 0.3): P(|X - 300| >= 0.25*300) <= chernoff(300, 0.25)
  RngStream rng(606, 0);
  const int samples = 100000;
  int dev = 0;
  for (int i = 0; i < samples; ++i) {
    int x = 0;
    for (int k = 0; k < 1000; ++k) x += rng.next_double() < 0.3;
    dev += std::abs(x - 300) >= 75;
  }
  CHECK(static_cast<double>(dev) / samples <= chernoff(300, 0.25));
}

TEST_CASE("theorem-1 admissible constants: golden values") {
  Theorem1Params tp;
  tp.C = 0.1;
  tp.c1 = 1;
  tp.c2 = 1;
  tp.k = 1;
  tp.alpha = 1e-4;
  tp.n = 256;
  auto rep = theorem1_admissible(tp);
  CHECK(rep.c_limit == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(rep.c_ok);  // holds with equality
  CHECK(rep.alpha_max == doctest::Approx(1.5625e-4).epsilon(1e-13));
  CHECK(rep.D == doctest::Approx(1.5625e-4).epsilon(1e-13));
  CHECK(rep.alpha_ok);
  CHECK(rep.regime_ok);

  Theorem1Params bad = tp;
  bad.C = 0.2;
  CHECK(!theorem1_admissible(bad).regime_ok);

  Theorem1Params big = tp;
  big.C = 1;
  big.n = 4096;
  CHECK(theorem1_admissible(big).p == doctest::Approx(0.015625).epsilon(1e-15));
  CHECK(theorem1_admissible(big).p == 1.0 / 64.0);

  Theorem1Params zero = tp;
  zero.alpha = 0;
  CHECK_THROWS_AS(theorem1_admissible(zero), std::invalid_argument);
}

TEST_CASE("nout interval formulas") {
  auto s1 = expected_nout_interval(100, 0.1, 1, 1, 1);
  CHECK(s1.lo == doctest::Approx(3 * 100 * 0.1 / 4.0));  // 3np/4
  CHECK(s1.hi == doctest::Approx(100 * 0.1));            // np at c2=1, s=1

  auto ex = expected_nout_interval(1000, 0.01, 2, 0.5, 2);
  CHECK(ex.lo == doctest::Approx(7.5).epsilon(1e-12));
  CHECK(ex.hi == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(ex.regime_ok);  // 2 <= 1/(10*2*0.01) = 5

  auto far = expected_nout_interval(1000, 0.01, 6, 0.5, 2);
  CHECK(!far.regime_ok);
  CHECK(!expected_nout_interval(10, 0.5, 0, 1, 1).regime_ok);  // s < 1

  CHECK_THROWS_AS(expected_nout_interval(10, 0.0, 1, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("pivot interval formulas") {
  auto l1 = pivot_interval(100, 0.1, 1, 1, 1);
  CHECK(l1.lo == doctest::Approx(100 * 0.1 / 8.0));
  CHECK(l1.hi == doctest::Approx(8 * 100 * 0.1));

  // np = 64, l = 2: [(np/8)^2, (8np)^2] = [64, 262144]
  auto l2 = pivot_interval(4096, 64.0 / 4096.0, 2, 1, 1);
  CHECK(l2.lo == doctest::Approx(64.0).epsilon(1e-12));
  CHECK(l2.hi == doctest::Approx(262144.0).epsilon(1e-12));

  // log-space evaluation survives depths that would overflow a product
  auto deep = pivot_interval(1 << 20, 0.25, 40, 1, 1);
  CHECK(std::isfinite(deep.log_lo));
  CHECK(std::isfinite(deep.log_hi));
  CHECK(!deep.regime_ok);

  CHECK_THROWS_AS(pivot_interval(100, 0.1, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("theorem-2 failure quantity in log space") {
  // frozen 220-digit evaluation at n=256, p=double(0.3466), d1=d2=1:
  // log Q = -7.688419840000000851123..., Q = 4.5810147374285990415e-4
  auto rep = theorem2_failure(256, 0.3466, 1, 1);
  CHECK(rep.log_q ==
        doctest::Approx(-7.688419840000000851123).epsilon(1e-12));
  CHECK(rep.q ==
        doctest::Approx(4.5810147374285990415e-4).epsilon(1e-10));
  // at this p the first term is astronomically small
  CHECK(rep.term1_log < -1000);
  CHECK(rep.term2_log == doctest::Approx(-7.68841984).epsilon(1e-12));

  // vanishing-term threshold: term1 < 0 iff p > 16*ln4/(d1*n)
  const double thresh = 16 * std::log(4.0) / 256.0;
  CHECK(theorem2_failure(256, thresh * 1.01, 1, 1).term1_log < 0);
  CHECK(theorem2_failure(256, thresh * 0.99, 1, 1).term1_log > 0);

  // d2 -> infinity kills the second term: Q -> 4^n * exp(-d1*n^2*p/16)
  auto lim = theorem2_failure(256, 0.3466, 1, 1e30);
  CHECK(lim.log_q == doctest::Approx(lim.term1_log).epsilon(1e-12));

  CHECK_THROWS_AS(theorem2_failure(1, 0.5, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(theorem2_failure(256, 0.0, 1, 1), std::invalid_argument);
}

TEST_CASE("theorem-2 matching lower bound and headline rate") {
  // p = 0.5 at n = 256: n^2 * Q < 1, so the union bound is informative
  auto rep = theorem2_failure(256, 0.5, 1, 1);
  REQUIRE(!rep.lower_clamped);
  const double expected = -std::expm1(2 * std::log(256.0) + rep.log_q);
  CHECK(rep.lower_bound == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rep.lower_bound > 0.98);

  // small p: Q explodes, bound clamps to zero
  auto weak = theorem2_failure(256, 0.01, 1, 1);
  CHECK(weak.lower_clamped);
  CHECK(weak.lower_bound == 0.0);

  auto head = theorem2_failure(256, 0.5, 1, 1, 0.25);
  REQUIRE(head.headline.has_value());
  const double ln_n = std::log(256.0);
  CHECK(*head.headline ==
        doctest::Approx(-std::expm1(-0.25 * ln_n * ln_n)).epsilon(1e-12));
  CHECK(!theorem2_failure(256, 0.5, 1, 1).headline.has_value());
}
