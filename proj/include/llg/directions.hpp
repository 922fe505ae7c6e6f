// Directions of lattice points: sorted samples mod 1, gap statistics, disc counts.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "llg/lattice.hpp"

namespace llg {

/// Maps a real number into (-1/2, 1/2] modulo 1.
inline double wrap_half(double x) { return x - std::ceil(x - 0.5); }

/// (2 pi)^{-1} arg(y1 + i y2) in (-1/2, 1/2].
inline double direction_of(const Vec2& y) { return wrap_half(std::atan2(y.y(), y.x()) / (2.0 * M_PI)); }

inline Vec2 unit_from_direction(double xi) {
  return {std::cos(2.0 * M_PI * xi), std::sin(2.0 * M_PI * xi)};
}

struct DirectionSample {
  std::vector<double> values;  // sorted, each in (-1/2, 1/2]
  std::size_t size() const { return values.size(); }
};

/// Directions of the shell points of a planar affine lattice, optionally only
/// the visible ones (rational shifts only). Repeated directions of a rational
/// lattice are computed from the primitive vector and therefore coincide exactly.
DirectionSample directions_2d(const AffineLattice<2>& lat, const Shell& shell, bool visible_only);

/// N (xi_j - xi_{j-1}), j = 1..N, with xi_0 = xi_N - 1. Sums to N.
std::vector<double> normalized_gaps(const DirectionSample& sample);

struct GapPoint {
  double s = 0.0;
  double P = 0.0;
  double stderr_ = 0.0;
};

/// P(s) = #{j : N (xi_j - xi_{j-1}) >= s} / N on the given grid.
std::vector<GapPoint> gap_distribution(const DirectionSample& sample, const std::vector<double>& s_grid);

/// Fractional parts of sqrt(n), n = 1..n_max, in (-1/2, 1/2], sorted.
DirectionSample sqrt_mod_one(std::int64_t n_max);

/// n i.i.d. uniform points of (-1/2, 1/2], sorted.
DirectionSample uniform_sample(std::size_t n, std::uint64_t seed);

/// Half-width, in units of full turns, of the open arc D_T(sigma, v) in d = 2.
double arc_half_width(double sigma, const Shell& shell);

/// Geodesic radius of the open cap D_T(sigma, v) on S^2.
double cap_radius(double sigma, const Shell& shell);

/// Repeated planar disc-count queries against one shell.
class DiscCounter2D {
 public:
  DiscCounter2D(const AffineLattice<2>& lat, const Shell& shell, bool visible_only = false);
  std::size_t count(double sigma, double xi_center) const;
  std::size_t count(double sigma, const Vec2& v) const { return count(sigma, direction_of(v)); }
  std::size_t size() const { return dirs_.values.size(); }
  const Shell& shell() const { return shell_; }

 private:
  std::size_t count_open(double a, double b) const;
  Shell shell_;
  DirectionSample dirs_;
};

/// Repeated disc-count queries on S^2 (stores unit vectors of the shell points).
class DiscCounter3D {
 public:
  DiscCounter3D(const AffineLattice<3>& lat, const Shell& shell);
  std::size_t count(double sigma, const Vec3& v) const;
  std::size_t size() const { return units_.size(); }

 private:
  Shell shell_;
  std::vector<Vec3> units_;
};

/// Number of shell points whose direction lies in the open disc D_T(sigma, v).
std::size_t disc_count(const AffineLattice<2>& lat, const Shell& shell, double sigma, const Vec2& v);
std::size_t disc_count(const AffineLattice<3>& lat, const Shell& shell, double sigma, const Vec3& v);

struct CountDistribution {
  std::vector<double> E;        // E[r], r = 0..r_max
  std::vector<double> stderr_;  // per r
  std::size_t n = 0;
};

struct EmpiricalEOptions {
  bool visible_only = false;
  unsigned workers = 1;
  /// Optional density of the direction law with respect to the normalized
  /// uniform measure, as a function of xi; applied by importance weighting.
  std::function<double(double)> weight;
};

/// Fraction of random directions v with N_{c,T}(sigma, v) = r, for r = 0..r_max.
/// With visible_only the disc is D_T(sigma / kappa_q, v) and only visible points count.
CountDistribution empirical_E(const AffineLattice<2>& lat, const Shell& shell, double sigma, int r_max,
                              std::size_t n_dirs, std::uint64_t seed, const EmpiricalEOptions& opt = {});

/// Same estimate for several sigma values with common directions.
std::vector<CountDistribution> empirical_E_curve(const DiscCounter2D& counter, const std::vector<double>& sigmas,
                                                 int r_max, std::size_t n_dirs, std::uint64_t seed,
                                                 unsigned workers = 1,
                                                 const std::function<double(double)>& weight = {});

/// max over equal sectors of |count/total - 1/n| * n.
double sector_equidistribution(const AffineLattice<2>& lat, const Shell& shell, int n_sectors);
double sector_equidistribution(const DirectionSample& sample, int n_sectors);

}  // namespace llg
