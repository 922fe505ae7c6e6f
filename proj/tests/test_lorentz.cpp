#include <gtest/gtest.h>

#include <random>

#include "llg/empirical.hpp"
#include "llg/lorentz.hpp"
#include "llg/traversal.hpp"
#include "oracles.hpp"

using namespace llg;

namespace {

AffineLattice<2> z2(Shift<2> s = Shift<2>::zero()) { return {UnimodularBasis<2>::identity(), s}; }

Vec2 random_dir(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  const double a = u(g);
  return {std::cos(a), std::sin(a)};
}

/// Segment-versus-convex-polygon test by clipping the segment against each edge.
bool segment_meets_polygon(const Vec2& a, const Vec2& b, const std::vector<Vec2>& P) {
  auto cross = [](const Vec2& p, const Vec2& q) { return p.x() * q.y() - p.y() * q.x(); };
  double area = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) area += cross(P[i], P[(i + 1) % P.size()]);
  double lo = 0.0, hi = 1.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vec2 e = P[(i + 1) % P.size()] - P[i];
    const double fa = cross(e, a - P[i]) * (area > 0 ? 1 : -1);
    const double fb = cross(e, b - P[i]) * (area > 0 ? 1 : -1);
    if (fa < 0 && fb < 0) return false;
    if (fa < 0) lo = std::max(lo, fa / (fa - fb));
    if (fb < 0) hi = std::min(hi, fa / (fa - fb));
  }
  return lo <= hi;
}

}  // namespace

TEST(FreePath, HeadOnCollision) {
  const auto hit = free_path(z2(), RayQuery<2>{Vec2(0.5, 0), Vec2(1, 0), 0.1, 10.0});
  ASSERT_TRUE(hit);
  EXPECT_NEAR(hit->tau1, 0.4, 1e-15);
  EXPECT_EQ(hit->center, Vec2(1, 0));
  EXPECT_EQ(hit->w1, Vec2(-1, 0));
  EXPECT_EQ(hit->v1, Vec2(-1, 0));
}

TEST(FreePath, ChannelReachesHorizon) {
  EXPECT_FALSE(free_path(z2(), RayQuery<2>{Vec2(0.5, 0.5), Vec2(1, 0), 0.1, 1e6}));
}

TEST(FreePath, Preconditions) {
  EXPECT_THROW(free_path(z2(), RayQuery<2>{Vec2(1.05, 0), Vec2(1, 0), 0.1, 10.0}), PreconditionError);
  EXPECT_THROW(free_path(z2(), RayQuery<2>{Vec2(0.5, 0), Vec2(1, 1), 0.1, 10.0}), PreconditionError);
  EXPECT_THROW(free_path(z2(), RayQuery<2>{Vec2(0.5, 0), Vec2(1, 0), 0.46, 10.0}), PreconditionError);
  EXPECT_THROW(free_path(z2(), RayQuery<2>{Vec2(0.5, 0), Vec2(1, 0), 0.1, 0.0}), PreconditionError);
  EXPECT_NO_THROW(free_path(z2(), RayQuery<2>{Vec2(0.5, 0), Vec2(1, 0), 0.45, 10.0}));
}

TEST(FreePath, MatchesBruteForce) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int found = 0;
  for (int i = 0; i < 300; ++i) {
    const AffineLattice<2> lat{UnimodularBasis<2>(oracle::random_basis(g)),
                               Shift<2>::irrational(Vec2(u(g), u(g)))};
    const double rho = (0.005 + 0.3 * u(g)) * minimum_distance(lat);
    const ScattererField<2> field(lat, rho);
    Vec2 s;
    do s = lat.basis.to_point(Vec2(u(g), u(g))); while (field.containing_ball(s));
    const Vec2 v = random_dir(g);
    const double t_max = 200.0 * u(g);
    const auto hit = free_path(field, s, v, t_max);
    const auto want = oracle::brute_free_path(lat, s, v, rho, t_max);
    ASSERT_EQ(hit.has_value(), want.has_value()) << i;
    if (!hit) continue;
    ++found;
    EXPECT_EQ(hit->m, want->m);
    EXPECT_NEAR(hit->tau1, want->t, 1e-9);
  }
  EXPECT_GT(found, 100);
}

TEST(FreePath, CollisionGeometry) {
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto lat = z2(Shift<2>::irrational(Vec2(0.31, 0.72)));
  const ScattererField<2> field(lat, 0.05);
  for (int i = 0; i < 50; ++i) {
    const Vec2 s(u(g), u(g));
    if (field.containing_ball(s)) continue;
    const Vec2 v = random_dir(g);
    const auto hit = free_path(field, s, v, 1e4);
    ASSERT_TRUE(hit);
    EXPECT_NEAR((s + hit->tau1 * v - hit->center).norm(), 0.05, 1e-9);
    EXPECT_NEAR(hit->w1.norm(), 1.0, 1e-12);
    EXPECT_NEAR(hit->v1.norm(), 1.0, 1e-12);
    for (int k = 1; k < 1000; ++k) {
      const Vec2 p = s + (hit->tau1 * k / 1000.0) * v;
      const auto c = field.containing_ball(p);
      EXPECT_FALSE(c.has_value());
    }
  }
}

TEST(Traversal, CoversAxisAlignedNeighbourhood) {
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  traverse_cells(z2(), Vec2(0, 0), Vec2(1, 0), 0.0, 5.0, 1.0, [&](const IVec<2>& m, double) {
    seen.insert({m(0), m(1)});
    return true;
  });
  for (std::int64_t n = 0; n <= 6; ++n)
    for (std::int64_t k = -1; k <= 1; ++k) EXPECT_TRUE(seen.count({n, k})) << n << "," << k;
}

TEST(Traversal, CompleteAgainstBruteForce) {
  std::mt19937_64 g(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const AffineLattice<2> lat{UnimodularBasis<2>(oracle::random_basis(g)), Shift<2>::irrational(Vec2(u(g), u(g)))};
    const Vec2 s(4 * u(g) - 2, 4 * u(g) - 2);
    const Vec2 v = random_dir(g);
    const double radius = 0.4 * u(g) * minimum_distance(lat);
    std::set<std::vector<std::int64_t>> seen;
    traverse_cells(lat, s, v, 0.0, 100.0, radius, [&](const IVec<2>& m, double) {
      seen.insert(oracle::key<2>(m));
      return true;
    });
    oracle::for_each_within<2>(lat, s.norm() + 101.0, [&](const Vec2& y, const IVec<2>& m) {
      const double t = std::clamp((y - s).dot(v), 0.0, 100.0);
      if ((s + t * v - y).norm() <= radius) EXPECT_TRUE(seen.count(oracle::key<2>(m))) << i;
    });
  }
}

TEST(Traversal, CandidatesPerCellBounded) {
  std::mt19937_64 g(14);
  for (int i = 0; i < 20; ++i) {
    const AffineLattice<2> lat{UnimodularBasis<2>::identity(), Shift<2>::zero()};
    const Vec2 v = random_dir(g);
    const std::size_t n = traverse_cells(lat, Vec2(0.3, 0.2), v, 0.0, 1000.0, 0.1, [](const IVec<2>&, double) { return true; });
    const double cells = 1000.0 * std::max(std::abs(v.x()), std::abs(v.y())) + 2.0;
    EXPECT_LE(static_cast<double>(n), 9.0 * cells);
  }
}

TEST(RayHitCount, Examples) {
  EXPECT_EQ(ray_hit_count(z2(), Shell{0.0, 5.0}, 0.1, Vec2(1, 0), Vec2(0, 0)), 4u);
  EXPECT_EQ(ray_hit_count(z2(), Shell{0.0, 5.0}, 0.0, Vec2(0.6, 0.8), Vec2(0, 0)), 0u);
  EXPECT_EQ(ray_hit_count(z2(), Shell{0.5, 5.0}, 0.1, Vec2(1, 0), Vec2(0, 0)), 2u);
}

TEST(RayHitCount, MatchesBruteForce) {
  std::mt19937_64 g(15);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const AffineLattice<2> lat{UnimodularBasis<2>(oracle::random_basis(g)), Shift<2>::irrational(Vec2(u(g), u(g)))};
    const double rho = 0.3 * u(g) * minimum_distance(lat);
    const Shell sh{0.5 * u(g), 2.0 + 40.0 * u(g)};
    const Vec2 v = random_dir(g);
    if (ScattererField<2>(lat, rho).containing_ball(Vec2::Zero())) continue;
    std::size_t want = 0;
    oracle::for_each_within<2>(lat, sh.T, [&](const Vec2& y, const IVec<2>&) {
      if (y.norm() < sh.c * sh.T || y.norm() >= sh.T) return;
      if (oracle::quadratic_entry(Vec2::Zero(), v, y, rho)) ++want;
    });
    EXPECT_EQ(ray_hit_count(lat, sh, rho, v, Vec2(0, 0)), want);
  }
}

TEST(RayHitCount, SandwichesFreePath) {
  std::mt19937_64 g(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = 0.02;
  for (int i = 0; i < 20; ++i) {
    const AffineLattice<2> lat{UnimodularBasis<2>(oracle::random_basis(g)), Shift<2>::irrational(Vec2(u(g), u(g)))};
    const ScattererField<2> field(lat, rho);
    if (field.containing_ball(Vec2::Zero())) continue;
    for (int k = 0; k < 50; ++k) {
      const Vec2 v = random_dir(g);
      const double T = 1.0 + 60.0 * u(g);
      const auto hit = free_path(field, Vec2::Zero().eval(), v, T + 1.0);
      const bool long_path = !hit || hit->tau1 >= T;
      if (ray_hit_count(lat, Shell{0.0, T + rho}, rho, v, Vec2(0, 0)) == 0) EXPECT_TRUE(long_path);
      if (long_path) EXPECT_EQ(ray_hit_count(lat, Shell{0.0, T - rho}, rho, v, Vec2(0, 0)), 0u);
    }
  }
}

TEST(RayHitCount, MeanCount) {
  const auto lat = z2(Shift<2>::irrational(Vec2(std::sqrt(2.0) / M_PI, std::sqrt(3.0) / M_PI)));
  const double T = 300.0, sigma = 0.5;
  const auto h = empirical_ray_hits(lat, Shell{0.0, T}, sigma / T, Vec2(0, 0), 3, 5000, 3);
  EXPECT_NEAR(h.mean, 2.0 * sigma, 3 * h.mean_stderr);
  double total = 0.0;
  for (double e : h.E) total += e;
  EXPECT_LE(total, 1.0 + 1e-12);
}

TEST(ConvexScatterers, SquareSandwich) {
  std::mt19937_64 g(17);
  const double sigma = 0.8, T = 60.0, s = sigma / std::sqrt(2.0);
  const ConvexPolygon inner{{Vec2(s, s), Vec2(-s, s), Vec2(-s, -s), Vec2(s, -s)}};
  const ConvexPolygon outer{{Vec2(sigma, sigma), Vec2(-sigma, sigma), Vec2(-sigma, -sigma), Vec2(sigma, -sigma)}};
  const auto lat = z2(Shift<2>::irrational(Vec2(0.21, 0.43)));
  const Shell sh{0.0, T};
  for (int i = 0; i < 300; ++i) {
    const Vec2 v = random_dir(g);
    const auto a = convex_scatterer_hit_count(lat, sh, inner, v);
    const auto b = ray_hit_count(lat, sh, sigma / T, v, Vec2(0, 0));
    const auto c = convex_scatterer_hit_count(lat, sh, outer, v);
    EXPECT_LE(a, b);
    EXPECT_LE(b, c);
  }
  const ConvexPolygon tiny{{Vec2(1e-12, 0), Vec2(0, 1e-12), Vec2(-1e-12, 0)}};
  EXPECT_EQ(convex_scatterer_hit_count(lat, sh, tiny, Vec2(std::cos(1.0), std::sin(1.0))), 0u);
}

TEST(ConvexScatterers, MatchesSegmentOracle) {
  std::mt19937_64 g(18);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ConvexPolygon Q{{Vec2(1.0, -0.3), Vec2(0.4, 0.9), Vec2(-0.7, 0.2), Vec2(-0.2, -0.8)}};
  for (int i = 0; i < 100; ++i) {
    const AffineLattice<2> lat{UnimodularBasis<2>(oracle::random_basis(g)), Shift<2>::irrational(Vec2(u(g), u(g)))};
    const Shell sh{0.3 * u(g), 3.0 + 30.0 * u(g)};
    const Vec2 v = random_dir(g);
    std::size_t want = 0;
    oracle::for_each_within<2>(lat, sh.T, [&](const Vec2& y, const IVec<2>&) {
      if (y.norm() < sh.c * sh.T || y.norm() >= sh.T) return;
      std::vector<Vec2> P;
      for (const auto& p : Q.vertices) P.push_back(p / sh.T + y);
      if (segment_meets_polygon(Vec2(0, 0), 2.0 * sh.T * v, P)) ++want;
    });
    EXPECT_EQ(convex_scatterer_hit_count(lat, sh, Q, v), want) << i;
  }
}

TEST(FreePathCdf, Trivialities) {
  const auto lat = z2();
  const auto f = empirical_free_path_cdf(lat, Vec2(std::sqrt(2.0) / 2, std::sqrt(3.0) / 3), constant_beta<2>(Vec2(0, 0)),
                                         0.01, {0.0, 0.5, 1.0, 2.0}, 2000, 21);
  EXPECT_EQ(f.cdf[0], 1.0);
  for (std::size_t i = 1; i < f.cdf.size(); ++i) EXPECT_LE(f.cdf[i], f.cdf[i - 1]);
  ASSERT_FALSE(f.finite_samples.empty());
  for (std::size_t i = 0; i < f.xi.size(); ++i) {
    const auto above = std::count_if(f.finite_samples.begin(), f.finite_samples.end(),
                                     [&](double x) { return x >= f.xi[i]; });
    EXPECT_NEAR(f.cdf[i] - f.censored_fraction, static_cast<double>(above) / 2000.0, 1e-12);
    if (f.xi[i] > f.finite_samples.back() * 1.01) EXPECT_EQ(above, 0);
  }
  EXPECT_EQ(f.finite_samples.size() + static_cast<std::size_t>(std::lround(f.censored_fraction * 2000)), 2000u);
}

TEST(FreePathCdf, LatticePointStartNeedsAdmissibleBeta) {
  EXPECT_THROW(empirical_free_path_cdf(z2(), Vec2(0, 0), constant_beta<2>(Vec2(0, 0)), 0.01, {1.0}, 10, 1),
               PreconditionError);
  // beta(v) = 2v: the ray leaves the unit ball behind it
  const auto f = empirical_free_path_cdf(z2(), Vec2(0, 0), [](const Vec2& v) { return Vec2(2.0 * v); }, 0.01,
                                         {0.0, 1.0}, 500, 2);
  EXPECT_EQ(f.cdf[0], 1.0);
}

TEST(FreePathCdf, ThreeDimensionalRuns) {
  const AffineLattice<3> lat{UnimodularBasis<3>::identity(), Shift<3>::zero()};
  const auto f = empirical_free_path_cdf(lat, Vec3(0.5, std::sqrt(2.0) / 3, 0.1), constant_beta<3>(Vec3::Zero().eval()),
                                         0.05, {0.0, 0.5, 1.0}, 500, 3);
  EXPECT_EQ(f.cdf[0], 1.0);
  EXPECT_LT(f.cdf[2], 1.0);
}

TEST(FreePathCdf, AveragedStartsAgreeAcrossLattices) {
  FreePathOptions opt;
  opt.averaged = true;
  std::mt19937_64 g(19);
  const AffineLattice<2> other{UnimodularBasis<2>(oracle::random_basis(g)), Shift<2>::zero()};
  const auto a = empirical_free_path_cdf(z2(), Vec2::Zero(), constant_beta<2>(Vec2(0, 0)), 0.01, {10.0}, 3000, 4, opt);
  const auto b = empirical_free_path_cdf(other, Vec2::Zero(), constant_beta<2>(Vec2(0, 0)), 0.01, {10.0}, 3000, 5, opt);
  EXPECT_LT(ks_distance(EmpiricalDistribution(a.finite_samples), EmpiricalDistribution(b.finite_samples)), 0.05);
  // the mean free path of the averaged gas is 1 / (2 rho) in the plane
  EXPECT_NEAR(mean_and_stderr(a.finite_samples).mean, 0.5, 0.05);
}

TEST(JointSample, HemisphereAndMarginal) {
  const Vec2 q0(std::sqrt(2.0) / 2, std::sqrt(3.0) / 3);
  const auto js = joint_tau_w1_sample(z2(), q0, constant_beta<2>(Vec2(0, 0)), 0.01, 3.0, 3000, 8);
  std::vector<double> xi;
  for (const auto& r : js.records) {
    EXPECT_GT(r.omega(0), 0.0);
    EXPECT_NEAR(r.omega.norm(), 1.0, 1e-12);
    xi.push_back(r.xi);
  }
  EXPECT_EQ(js.records.size() + js.dropped, 3000u);
  std::sort(xi.begin(), xi.end());
  const auto f = empirical_free_path_cdf(z2(), q0, constant_beta<2>(Vec2(0, 0)), 0.01, {3.0}, 3000, 8);
  std::vector<double> want;
  for (double x : f.finite_samples)
    if (x <= 3.0) want.push_back(x);
  EXPECT_EQ(xi, want);
}

TEST(JointSample, HeadOnRecord) {
  // a single direction is forced through beta: every v starts at (0.5, 0) and is rotated to e1
  const auto hit = free_path(z2(), RayQuery<2>{Vec2(0.5, 0), Vec2(1, 0), 0.1, 10.0});
  ASSERT_TRUE(hit);
  const Vec2 omega = -(K_of_v(Vec2(1, 0)).transpose() * hit->w1);
  EXPECT_EQ(omega, Vec2(1, 0));
  EXPECT_NEAR(0.1 * hit->tau1, 0.04, 1e-15);
}
