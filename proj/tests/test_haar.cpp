#include <gtest/gtest.h>

#include <map>
#include <random>

#include "llg/empirical.hpp"
#include "llg/haar.hpp"
#include "llg/limits.hpp"

using namespace llg;

namespace {

std::vector<double> box_counts(std::size_t n, std::uint64_t seed, const std::function<AffineLattice<2>(Rng&)>& draw,
                               const Region<2>& region) {
  Rng rng(seed, 0);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(static_cast<double>(points_in_region(draw(rng), region, false).points.size()));
  return out;
}

/// Square of the given side centred at `center`, then rotated about the origin.
ConvexPolygon rotated_square(const Vec2& center, double side, double angle) {
  ConvexPolygon p;
  const double h = side / 2;
  for (const Vec2& c : {Vec2(h, h), Vec2(-h, h), Vec2(-h, -h), Vec2(h, -h)}) {
    const Vec2 x = center + c;
    p.vertices.emplace_back(x.x() * std::cos(angle) - x.y() * std::sin(angle),
                            x.x() * std::sin(angle) + x.y() * std::cos(angle));
  }
  return p;
}

}  // namespace

TEST(SampleX1, AcceptanceRate) {
  Rng rng(1, 0);
  std::size_t proposals = 0;
  const std::size_t n = 906900;  // about 1e6 proposals
  for (std::size_t i = 0; i < n; ++i) sample_X1(rng, &proposals);
  const double rate = static_cast<double>(n) / static_cast<double>(proposals);
  EXPECT_NEAR(rate, M_PI * std::sqrt(3.0) / 6.0, 0.001);
}

TEST(SampleX1, FundamentalDomainAndShapeLaw) {
  Rng rng(2, 0);
  const int n = 100000;
  int above = 0;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_X1(rng);
    ASSERT_LE(std::abs(s.x), 0.5);
    ASSERT_GE(s.x * s.x + s.y * s.y, 1.0);
    ASSERT_NEAR(s.basis.rows().determinant(), 1.0, 1e-9);
    const auto b = basis_from_shape(s.x, s.y, s.theta);
    ASSERT_LE((b.rows() - s.basis.rows()).norm(), 1e-12);
    if (s.y > 2.0) ++above;
  }
  // mu_1(y > Y) = (1 / Y) / (pi / 3) for Y >= 1
  const double p = 3.0 / (2.0 * M_PI);
  EXPECT_NEAR(static_cast<double>(above) / n, p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(SampleX1, RotationInvariantCounts) {
  const auto draw = [](Rng& r) { return AffineLattice<2>{sample_X1(r).basis, Shift<2>::zero()}; };
  const Vec2 c(1.7, -0.6);
  const auto a = box_counts(100000, 3, draw, Region<2>(rotated_square(c, 1.0, 0.0)));
  const auto b = box_counts(100000, 4, draw, Region<2>(rotated_square(c, 1.0, 0.7)));
  EXPECT_LE(ks_distance(EmpiricalDistribution(a), EmpiricalDistribution(b)), 0.01);
}

TEST(SampleX, TranslationInvariantCounts) {
  const auto draw = [](Rng& r) { return sample_X(r).affine(); };
  const auto a = box_counts(100000, 5, draw, Region<2>(Box<2>{Vec2(0, 0), Vec2(1, 0.7)}));
  const auto b = box_counts(100000, 6, draw, Region<2>(Box<2>{Vec2(3.3, -2.1), Vec2(4.3, -1.4)}));
  EXPECT_LE(ks_distance(EmpiricalDistribution(a), EmpiricalDistribution(b)), 0.01);
}

TEST(SampleX, ShiftIsUniformInCell) {
  Rng rng(7, 0);
  double s = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = sample_X(rng);
    ASSERT_TRUE((x.u.array() >= 0).all() && (x.u.array() < 1).all());
    s += x.u.sum();
  }
  EXPECT_NEAR(s / 10000, 1.0, 0.02);
}

TEST(SL2Mod, OrderMatchesFormula) {
  EXPECT_EQ(sl2_order_formula(2), 6u);
  EXPECT_EQ(sl2_order_formula(1), 1u);
  for (std::int64_t q : {1, 2, 3, 4, 5, 6, 8, 9, 12, 25, 30}) {
    const SL2Mod g(q);
    // brute-force count of determinant-one matrices mod q
    std::uint64_t brute = 0;
    for (std::int64_t a = 0; a < q; ++a)
      for (std::int64_t b = 0; b < q; ++b)
        for (std::int64_t c = 0; c < q; ++c)
          for (std::int64_t d = 0; d < q; ++d)
            if (((a * d - b * c) % q + q) % q == 1 % q) ++brute;
    EXPECT_EQ(g.order(), brute) << q;
    EXPECT_EQ(sl2_order_formula(q), brute) << q;
  }
  EXPECT_THROW(SL2Mod(51), PreconditionError);
}

TEST(SL2Mod, ElementsAreDistinctUnimodular) {
  for (std::int64_t q : {2, 6, 12}) {
    const SL2Mod g(q);
    std::set<std::vector<std::int64_t>> seen;
    for (std::uint64_t i = 0; i < g.order(); ++i) {
      const IMat2 m = g.element(i);
      EXPECT_EQ(((m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) % q + q) % q, 1 % q);
      for (int k = 0; k < 4; ++k) EXPECT_TRUE(m.data()[k] >= 0 && m.data()[k] < q);
      seen.insert(std::vector<std::int64_t>(m.data(), m.data() + 4));
    }
    EXPECT_EQ(seen.size(), g.order());
  }
}

TEST(SL2Mod, UniformDraws) {
  const SL2Mod g(2);
  Rng rng(8, 0);
  std::map<std::vector<std::int64_t>, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const IMat2 m = g.sample(rng);
    ++counts[std::vector<std::int64_t>(m.data(), m.data() + 4)];
  }
  ASSERT_EQ(counts.size(), 6u);
  double chi2 = 0;
  for (const auto& [k, c] : counts) chi2 += std::pow(c - n / 6.0, 2) / (n / 6.0);
  EXPECT_LT(chi2, 20.52);  // chi^2_5 at 0.999
}

TEST(SampleXq, TrivialModulus) {
  const SL2Mod g(1);
  Rng rng(9, 0);
  const auto s = sample_Xq(rng, Shift<2>::zero(), g);
  EXPECT_TRUE(s.alpha_gamma.is_integral());
  EXPECT_EQ(s.gamma, IMat2::Identity());
}

TEST(SampleXq, ShiftTransformsByGamma) {
  const SL2Mod g(5);
  Rng rng(10, 0);
  const auto alpha = Shift<2>::rational(IVec<2>(1, 3), 5);
  for (int i = 0; i < 200; ++i) {
    const auto s = sample_Xq(rng, alpha, g);
    const IVec<2> want = (IVec<2>(1, 3).transpose() * s.gamma).transpose().unaryExpr([](std::int64_t x) {
      return ((x % 5) + 5) % 5;
    });
    EXPECT_EQ(s.alpha_gamma.denominator(), 5);
    EXPECT_EQ(s.alpha_gamma.numerator(), want);
  }
}

TEST(SampleXy, ContainsAnchor) {
  Rng rng(11, 0);
  for (const Vec2& y : {Vec2(0, 0), Vec2(0.3, -2.5)}) {
    const auto s = sample_X_given_y(rng, y);
    const auto lat = s.affine();
    EXPECT_LE((lat.point(IVec<2>::Zero()) - y).norm(), 1e-12);
  }
  const auto s = sample_X_given_y(rng, Vec2(0.5, 0.25));
  const auto pts = points_in_region(s.affine(), Region<2>(Box<2>{Vec2(0.5, 0), Vec2(1.5, 1)}), false);
  EXPECT_GE(pts.boundary_events, 1u);
}

TEST(Siegel, MeanCountsEqualArea) {
  const std::vector<Box<2>> boxes{Box<2>{Vec2(1.2, 0.4), Vec2(2.2, 1.4)}, Box<2>{Vec2(-3, 2), Vec2(-2.5, 2.5)},
                                  Box<2>{Vec2(0.5, 0.5), Vec2(0.5, 1.5)}, Box<2>{Vec2(-0.4, -0.3), Vec2(0.6, 0.2)}};
  std::vector<SiegelSetup> setups(5);
  setups[0].space = SiegelSpace::X1;
  setups[1].space = SiegelSpace::X;
  setups[2].space = SiegelSpace::Xq;
  setups[2].alpha = Shift<2>::rational(IVec<2>(1, 0), 2);
  setups[3].space = SiegelSpace::Xq;
  setups[3].alpha = Shift<2>::rational(IVec<2>(1, 2), 3);
  setups[4].space = SiegelSpace::Xy;
  setups[4].y = Vec2(0.1, 0.0);
  std::uint64_t seed = 20;
  for (const auto& st : setups) {
    const auto m = siegel_means(st, boxes, 50000, seed++);
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      const double want = siegel_expected(st, boxes[k]);
      EXPECT_NEAR(m[k].mean, want, 3 * m[k].stderr_ + 1e-12)
          << "space " << static_cast<int>(st.space) << " box " << k;
    }
  }
  // the degenerate box has area zero and is hit with probability zero
  EXPECT_EQ(siegel_expected(setups[0], boxes[2]), 0.0);
  EXPECT_EQ(siegel_expected(setups[4], boxes[3]), 1.5);
}
