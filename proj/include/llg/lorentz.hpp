// Periodic Lorentz gas: first collisions, ray hit counts and free-path statistics.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llg/geometry.hpp"
#include "llg/lattice.hpp"
#include "llg/traversal.hpp"

namespace llg {

template <int D>
struct RayQuery {
  Vec<D> start;
  Vec<D> v;
  double rho = 0.0;
  double t_max = 0.0;
};

template <int D>
struct CollisionRecord {
  double tau1 = 0.0;
  Vec<D> center;
  IVec<D> m;
  Vec<D> w1;
  Vec<D> v1;
};

inline constexpr double kRhoGuard = 0.45;
inline constexpr double kUnitTolerance = 1e-12;

template <int D>
void require_unit(const Vec<D>& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > kUnitTolerance) throw PreconditionError(std::string(what) + " must be a unit vector");
}

/// Balls of radius rho around the points of an affine lattice; construction
/// checks rho <= 0.45 * (minimum distance) so the balls are disjoint.
template <int D>
class ScattererField {
 public:
  ScattererField(AffineLattice<D> lat, double rho) : lat_(std::move(lat)), rho_(rho) {
    if (!(rho > 0.0)) throw PreconditionError("scatterer radius must be positive");
    min_distance_ = minimum_distance(lat_);
    if (rho > kRhoGuard * min_distance_)
      throw PreconditionError("rho = " + std::to_string(rho) + " exceeds 0.45 * minimum distance = " +
                              std::to_string(kRhoGuard * min_distance_));
  }

  const AffineLattice<D>& lattice() const { return lat_; }
  double rho() const { return rho_; }
  double min_distance() const { return min_distance_; }

  /// The center of a ball whose closed interior contains p, if any.
  std::optional<Vec<D>> containing_ball(const Vec<D>& p) const {
    std::optional<Vec<D>> hit;
    const Vec<D> r = Vec<D>::Constant(rho_);
    scan_box(lat_, Vec<D>(p - r), Vec<D>(p + r), [&](const Vec<D>& y, const IVec<D>&) {
      if ((y - p).norm() <= rho_) hit = y;
    });
    return hit;
  }

 private:
  AffineLattice<D> lat_;
  double rho_;
  double min_distance_ = 0.0;
};

/// First ball entered by start + t v for t in (0, t_max]; nullopt when the
/// horizon is reached first.
template <int D>
std::optional<CollisionRecord<D>> free_path(const ScattererField<D>& field, const Vec<D>& start, const Vec<D>& v,
                                            double t_max) {
  require_unit<D>(v, "velocity");
  if (!(t_max > 0.0)) throw PreconditionError("t_max must be positive");
  if (field.containing_ball(start)) throw PreconditionError("start point lies inside a scatterer");
  const auto& lat = field.lattice();
  const double rho = field.rho();
  std::optional<CollisionRecord<D>> best;
  traverse_cells(lat, start, v, 0.0, t_max, rho, [&](const IVec<D>& m, double t_lower) {
    if (best && t_lower > best->tau1) return false;
    const Vec<D> y = lat.point(m);
    const auto e = ray_ball_entry(start, v, y, rho);
    if (e && e->t <= t_max && (!best || e->t < best->tau1)) {
      best = CollisionRecord<D>{e->t, y, m, e->w, reflect(v, e->w)};
    }
    return true;
  });
  return best;
}

template <int D>
std::optional<CollisionRecord<D>> free_path(const AffineLattice<D>& lat, const RayQuery<D>& q) {
  const ScattererField<D> field(lat, q.rho);
  return free_path(field, q.start, q.v, q.t_max);
}

/// Number of shell centers y (origin excluded) whose ball B_rho + y meets the
/// ray rho * w_offset + t v, t > 0.
template <int D>
std::size_t ray_hit_count(const AffineLattice<D>& lat, const Shell& shell, double rho, const Vec<D>& v,
                          const Vec<D>& w_offset) {
  validate(shell);
  require_unit<D>(v, "direction");
  if (rho < 0.0) throw PreconditionError("rho must be non-negative");
  if (rho == 0.0) return 0;
  if (rho > kRhoGuard * minimum_distance(lat))
    throw PreconditionError("rho exceeds 0.45 * minimum distance of the lattice");
  const Vec<D> start = rho * w_offset;
  const double inner2 = shell.c * shell.T * shell.c * shell.T, outer2 = shell.T * shell.T;
  const double t1 = shell.T + rho + start.norm();
  std::size_t hits = 0;
  traverse_cells(lat, start, v, 0.0, t1, rho, [&](const IVec<D>& m, double) {
    if (lat.is_origin(m)) return true;
    const Vec<D> y = lat.point(m);
    const double r2 = y.squaredNorm();
    if (r2 < inner2 || r2 >= outer2) return true;
    if ((y - start).norm() <= rho) throw PreconditionError("ray start lies inside a counted scatterer");
    if (ray_ball_entry(start, v, y, rho)) ++hits;
    return true;
  });
  return hits;
}

/// Planar count of shell centers y whose translate Q / T + y of the convex
/// polygon Q meets the ray t v, t > 0.
std::size_t convex_scatterer_hit_count(const AffineLattice<2>& lat, const Shell& shell, const ConvexPolygon& Q,
                                       const Vec2& v);

/// Whether the ray s + t v, t > 0, meets the closed convex polygon P.
bool ray_meets_polygon(const Vec2& s, const Vec2& v, const ConvexPolygon& P);

// ---------------------------------------------------------------------------
// Statistics over random directions

/// Offset beta(v) of the start point q0 + rho beta(v).
template <int D>
using BetaFunction = std::function<Vec<D>(const Vec<D>&)>;

/// Planar beta tabulated on a uniform grid in xi = arg(v) / 2 pi, linearly
/// interpolated and periodic.
class BetaTable2D {
 public:
  explicit BetaTable2D(std::vector<Vec2> values);
  Vec2 operator()(const Vec2& v) const;

 private:
  std::vector<Vec2> values_;
};

template <int D>
BetaFunction<D> constant_beta(const Vec<D>& b) {
  return [b](const Vec<D>&) { return b; };
}

struct FreePathOptions {
  unsigned workers = 1;
  /// Start points uniform in the fundamental cell instead of q0 + rho beta(v).
  bool averaged = false;
};

struct FreePathCdf {
  std::vector<double> xi;
  std::vector<double> cdf;  // fraction with rho^{d-1} tau1 >= xi (censored rays included)
  std::vector<double> stderr_;
  double censored_fraction = 0.0;
  std::size_t n = 0;
  std::vector<double> finite_samples;  // rho^{d-1} tau1 of uncensored rays, sorted
};

FreePathCdf empirical_free_path_cdf(const AffineLattice<2>& lat, const Vec2& q0, const BetaFunction<2>& beta,
                                    double rho, const std::vector<double>& xi_grid, std::size_t n_dirs,
                                    std::uint64_t seed, const FreePathOptions& opt = {});
FreePathCdf empirical_free_path_cdf(const AffineLattice<3>& lat, const Vec3& q0, const BetaFunction<3>& beta,
                                    double rho, const std::vector<double>& xi_grid, std::size_t n_dirs,
                                    std::uint64_t seed, const FreePathOptions& opt = {});

template <int D>
struct JointRecord {
  Vec<D> v;
  double xi = 0.0;  // rho^{d-1} tau1
  Vec<D> omega;     // -w1 K(v), column form
};

template <int D>
struct JointSample {
  std::vector<JointRecord<D>> records;
  std::size_t dropped = 0;  // beyond the horizon
};

JointSample<2> joint_tau_w1_sample(const AffineLattice<2>& lat, const Vec2& q0, const BetaFunction<2>& beta,
                                   double rho, double xi_max, std::size_t n_dirs, std::uint64_t seed,
                                   unsigned workers = 1);
JointSample<3> joint_tau_w1_sample(const AffineLattice<3>& lat, const Vec3& q0, const BetaFunction<3>& beta,
                                   double rho, double xi_max, std::size_t n_dirs, std::uint64_t seed,
                                   unsigned workers = 1);

/// Per-direction ray hit counts for r = 0..r_max at one shell; E[r] is the
/// fraction of uniform directions with exactly r hits.
struct HitCountDistribution {
  std::vector<double> E;
  std::vector<double> stderr_;
  double mean = 0.0;
  double mean_stderr = 0.0;
  std::size_t n = 0;
};

HitCountDistribution empirical_ray_hits(const AffineLattice<2>& lat, const Shell& shell, double rho,
                                        const Vec2& w_offset, int r_max, std::size_t n_dirs, std::uint64_t seed,
                                        unsigned workers = 1);

}  // namespace llg
