#include <gtest/gtest.h>

#include "llg/special.hpp"
#include "oracles.hpp"

using namespace llg;

TEST(Zeta, KnownValues) {
  EXPECT_NEAR(riemann_zeta(2), M_PI * M_PI / 6, 1e-15);
  EXPECT_NEAR(riemann_zeta(4), std::pow(M_PI, 4) / 90, 1e-15);
  EXPECT_NEAR(riemann_zeta(3), 1.2020569031595942, 1e-15);
  EXPECT_THROW(riemann_zeta(1.0), std::invalid_argument);
}

TEST(Zeta, HurwitzReducesToRiemann) {
  for (int s = 2; s <= 6; ++s) {
    EXPECT_NEAR(hurwitz_zeta(s, 1.0), riemann_zeta(s), 1e-14);
    EXPECT_NEAR(hurwitz_zeta(s, 0.5), (std::pow(2.0, s) - 1) * riemann_zeta(s), 1e-13);
    EXPECT_NEAR(hurwitz_zeta(s, 0.25) + hurwitz_zeta(s, 0.75), (std::pow(4.0, s) - std::pow(2.0, s)) * riemann_zeta(s),
                1e-11);
  }
}

TEST(NumberTheory, MobiusAndPrimes) {
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(mobius(6), 1);
  EXPECT_EQ(mobius(30), -1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_EQ(prime_divisors(360), (std::vector<std::int64_t>{2, 3, 5}));
  EXPECT_EQ(prime_divisors(1), std::vector<std::int64_t>{});
}

TEST(Kappa, Examples) {
  EXPECT_NEAR(kappa(1, 2), 6 / (M_PI * M_PI), 1e-15);
  EXPECT_NEAR(kappa(2, 2), 8 / (M_PI * M_PI), 1e-15);
  EXPECT_NEAR(kappa(1, 3), 0.8319073725807075, 1e-15);
}

TEST(Kappa, BothFormsAgree) {
  for (std::int64_t q = 1; q <= 50; ++q)
    for (int d = 2; d <= 4; ++d) EXPECT_NEAR(kappa(q, d), kappa_coprime_form(q, d), 1e-12) << q << " " << d;
}

TEST(Kappa, MatchesSievedPartialSums) {
  // |tail of the Moebius sum| <= sum_{n > N} n^{-d} <= N^{1-d} / (d - 1)
  const std::int64_t N = 200000;
  for (std::int64_t q : {1, 2, 6, 7, 12, 30}) {
    for (int d = 3; d <= 4; ++d) {
      double head = 0.0;
      for (std::int64_t t = 1; t <= q; ++t)
        if (std::gcd(t, q) == 1) head += std::pow(static_cast<double>(t), -d);
      const double approx = oracle::mobius_partial_sum(q, d, N) * head;
      const double tail = std::pow(static_cast<double>(N), 1 - d) / (d - 1) * head;
      EXPECT_NEAR(kappa(q, d), approx, tail + 1e-13) << q << " " << d;
    }
  }
}

TEST(Kappa, Preconditions) {
  EXPECT_THROW(kappa(0, 2), std::invalid_argument);
  EXPECT_THROW(kappa(1, 1), std::invalid_argument);
}
