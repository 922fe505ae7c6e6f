// Affine lattices (Z^d + alpha) M, shells, regions and exact point enumeration.
//
// Conventions: a basis is stored with the lattice vectors as matrix rows, so the
// lattice point with integer coefficients m is  y = (m + alpha) M.  In Eigen
// column form that is  y = M^T (m + alpha).
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace llg {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;
template <int D>
using Mat = Eigen::Matrix<double, D, D>;
template <int D>
using IVec = Eigen::Matrix<std::int64_t, D, 1>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDetTolerance = 1e-9;
inline constexpr double kBoundaryTolerance = 1e-12;
inline constexpr std::size_t kDefaultCapacity = 100'000'000;

/// Volume of the unit ball in R^k.
inline double unit_ball_volume(int k) {
  return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

/// Half-width A(c, sigma) of the cone {c < x1 < 1, |x_perp| <= x1 A}, chosen so
/// that the directions it subtends have the normalized disc volume sigma.
inline double cone_aperture(double c, double sigma, int d) {
  if (!(c >= 0.0 && c < 1.0) || sigma < 0.0 || d < 2)
    throw PreconditionError("cone_aperture: need 0 <= c < 1, sigma >= 0, d >= 2");
  if (sigma == 0.0) return 0.0;
  const double base = sigma * d / ((1.0 - std::pow(c, d)) * unit_ball_volume(d - 1));
  return std::pow(base, 1.0 / (d - 1));
}

template <int D>
class UnimodularBasis {
  static_assert(D >= 2, "lattices need d >= 2");

 public:
  explicit UnimodularBasis(const Mat<D>& rows) : rows_(rows) {
    const double det = rows_.determinant();
    if (!std::isfinite(det) || std::abs(det - 1.0) > kDetTolerance)
      throw PreconditionError("basis determinant must be 1 (got " + std::to_string(det) + ")");
    inverse_ = rows_.inverse();
    Eigen::JacobiSVD<Mat<D>> svd(inverse_);
    inverse_norm_ = svd.singularValues()(0);
  }

  static UnimodularBasis identity() { return UnimodularBasis(Mat<D>::Identity()); }

  const Mat<D>& rows() const { return rows_; }
  const Mat<D>& inverse() const { return inverse_; }
  Vec<D> row(int i) const { return rows_.row(i).transpose(); }

  Vec<D> to_point(const Vec<D>& coeff) const { return rows_.transpose() * coeff; }
  Vec<D> to_coefficients(const Vec<D>& point) const { return inverse_.transpose() * point; }

  /// Operator 2-norm of M^{-1}: a real-space ball of radius r maps into a
  /// coefficient-space ball of radius r * inverse_norm().
  double inverse_norm() const { return inverse_norm_; }

 private:
  Mat<D> rows_;
  Mat<D> inverse_;
  double inverse_norm_ = 0.0;
};

/// Shift alpha of an affine lattice. Rational shifts are kept as p/q with q
/// minimal and p reduced into [0, q).
template <int D>
class Shift {
 public:
  static Shift zero() { return rational(IVec<D>::Zero(), 1); }

  static Shift rational(IVec<D> p, std::int64_t q) {
    if (q <= 0) throw PreconditionError("rational shift needs a positive denominator");
    std::int64_t g = q;
    for (int i = 0; i < D; ++i) g = std::gcd(g, p(i) < 0 ? -p(i) : p(i));
    q /= g;
    for (int i = 0; i < D; ++i) {
      p(i) /= g;
      p(i) = ((p(i) % q) + q) % q;
    }
    Shift s;
    s.rational_ = true;
    s.p_ = p;
    s.q_ = q;
    s.value_ = p.template cast<double>() / static_cast<double>(q);
    return s;
  }

  static Shift irrational(const Vec<D>& value) {
    Shift s;
    s.rational_ = false;
    s.value_ = value;
    return s;
  }

  bool is_rational() const { return rational_; }
  bool is_integral() const { return rational_ && q_ == 1; }
  const IVec<D>& numerator() const {
    require_rational();
    return p_;
  }
  std::int64_t denominator() const {
    require_rational();
    return q_;
  }
  const Vec<D>& value() const { return value_; }

  /// Exact-as-possible coefficient vector m + alpha.
  Vec<D> coefficient(const IVec<D>& m) const {
    if (rational_) {
      return (m * q_ + p_).template cast<double>() / static_cast<double>(q_);
    }
    return m.template cast<double>() + value_;
  }

 private:
  void require_rational() const {
    if (!rational_) throw PreconditionError("shift is not rational");
  }

  bool rational_ = true;
  IVec<D> p_ = IVec<D>::Zero();
  std::int64_t q_ = 1;
  Vec<D> value_ = Vec<D>::Zero();
};

template <int D>
struct AffineLattice {
  UnimodularBasis<D> basis = UnimodularBasis<D>::identity();
  Shift<D> shift = Shift<D>::zero();

  Vec<D> point(const IVec<D>& m) const { return basis.to_point(shift.coefficient(m)); }

  /// True when m + alpha is the zero vector, i.e. this term is the origin.
  bool is_origin(const IVec<D>& m) const {
    if (shift.is_rational()) return shift.is_integral() && m.isZero();
    return (m.template cast<double>() + shift.value()).isZero(0.0);
  }
};

/// The shell B_T(c) = { x : cT <= |x| < T }.
struct Shell {
  double c = 0.0;
  double T = 1.0;
};

inline void validate(const Shell& s) {
  if (!(s.c >= 0.0 && s.c < 1.0)) throw PreconditionError("shell needs 0 <= c < 1");
  if (!(s.T > 0.0) || !std::isfinite(s.T)) throw PreconditionError("shell needs T > 0");
}

// ---------------------------------------------------------------------------
// Regions

/// Open cylinder { c1 < x1 < c2, |x_perp - offset_perp| < sigma }; offset is
/// lateral (offset(0) == 0).
template <int D>
struct Cylinder {
  double c1 = 0.0;
  double c2 = 1.0;
  double sigma = 0.0;
  Vec<D> offset = Vec<D>::Zero();
};

/// Cone { c < x1 < 1, |x_perp| <= x1 * A(c, sigma) }: open in x1, closed laterally.
template <int D>
struct Cone {
  double c = 0.0;
  double sigma = 0.0;
};

/// Closed axis-aligned box.
template <int D>
struct Box {
  Vec<D> lo = Vec<D>::Zero();
  Vec<D> hi = Vec<D>::Zero();
};

/// Closed convex polygon (d = 2 only), vertices in either orientation.
struct ConvexPolygon {
  std::vector<Vec2> vertices;
};

template <int D>
using Region = std::variant<Cylinder<D>, Cone<D>, Box<D>, ConvexPolygon>;

struct Membership {
  bool inside = false;
  bool near_boundary = false;
};

namespace detail {

inline double lateral_norm2(const auto& x, const auto& offset) {
  double s = 0.0;
  for (int j = 1; j < x.size(); ++j) s += (x(j) - offset(j)) * (x(j) - offset(j));
  return s;
}

inline double polygon_orientation(const ConvexPolygon& p) {
  double a = 0.0;
  const auto& v = p.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& u = v[i];
    const auto& w = v[(i + 1) % v.size()];
    a += u.x() * w.y() - u.y() * w.x();
  }
  return a;
}

}  // namespace detail

/// Throws PreconditionError when the region violates its invariants.
template <int D>
void validate(const Region<D>& region) {
  std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Cylinder<D>>) {
          if (!(r.c1 < r.c2) || r.sigma < 0.0)
            throw PreconditionError("cylinder needs c1 < c2 and sigma >= 0");
          if (r.offset(0) != 0.0) throw PreconditionError("cylinder offset must be orthogonal to e1");
        } else if constexpr (std::is_same_v<R, Cone<D>>) {
          if (!(r.c >= 0.0 && r.c < 1.0) || r.sigma < 0.0)
            throw PreconditionError("cone needs 0 <= c < 1 and sigma >= 0");
        } else if constexpr (std::is_same_v<R, Box<D>>) {
          if (!(r.lo.array() <= r.hi.array()).all()) throw PreconditionError("box needs lo <= hi");
        } else {
          if (D != 2) throw PreconditionError("convex polygons are two-dimensional");
          const auto& v = r.vertices;
          if (v.size() < 3) throw PreconditionError("polygon needs at least 3 vertices");
          const double orient = detail::polygon_orientation(r);
          if (orient == 0.0) throw PreconditionError("degenerate polygon");
          for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec2 e1 = v[(i + 1) % v.size()] - v[i];
            const Vec2 e2 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
            if ((e1.x() * e2.y() - e1.y() * e2.x()) * orient < 0.0)
              throw PreconditionError("polygon is not convex");
          }
        }
      },
      region);
}

template <int D>
std::pair<Vec<D>, Vec<D>> bounding_box(const Region<D>& region) {
  return std::visit(
      [](const auto& r) -> std::pair<Vec<D>, Vec<D>> {
        using R = std::decay_t<decltype(r)>;
        Vec<D> lo, hi;
        if constexpr (std::is_same_v<R, Cylinder<D>>) {
          lo = r.offset.array() - r.sigma;
          hi = r.offset.array() + r.sigma;
          lo(0) = r.c1;
          hi(0) = r.c2;
        } else if constexpr (std::is_same_v<R, Cone<D>>) {
          const double a = cone_aperture(r.c, r.sigma, D);
          lo.setConstant(-a);
          hi.setConstant(a);
          lo(0) = r.c;
          hi(0) = 1.0;
        } else if constexpr (std::is_same_v<R, Box<D>>) {
          lo = r.lo;
          hi = r.hi;
        } else {
          lo.setConstant(INFINITY);
          hi.setConstant(-INFINITY);
          for (const auto& v : r.vertices) {
            for (int j = 0; j < 2 && j < D; ++j) {
              lo(j) = std::min(lo(j), v(j));
              hi(j) = std::max(hi(j), v(j));
            }
          }
        }
        return {lo, hi};
      },
      region);
}

/// Membership per the region's open/closed convention; near_boundary flags
/// points within kBoundaryTolerance of the boundary.
template <int D>
Membership classify(const Region<D>& region, const Vec<D>& x) {
  constexpr double eps = kBoundaryTolerance;
  return std::visit(
      [&](const auto& r) -> Membership {
        using R = std::decay_t<decltype(r)>;
        Membership m;
        if constexpr (std::is_same_v<R, Cylinder<D>>) {
          const double lat = std::sqrt(detail::lateral_norm2(x, r.offset));
          m.inside = x(0) > r.c1 && x(0) < r.c2 && lat < r.sigma;
          m.near_boundary = std::abs(x(0) - r.c1) < eps || std::abs(x(0) - r.c2) < eps ||
                            std::abs(lat - r.sigma) < eps;
        } else if constexpr (std::is_same_v<R, Cone<D>>) {
          const double a = cone_aperture(r.c, r.sigma, D);
          const double lat = std::sqrt(detail::lateral_norm2(x, Vec<D>::Zero()));
          m.inside = x(0) > r.c && x(0) < 1.0 && lat <= x(0) * a;
          m.near_boundary = std::abs(x(0) - r.c) < eps || std::abs(x(0) - 1.0) < eps ||
                            std::abs(lat - x(0) * a) < eps;
        } else if constexpr (std::is_same_v<R, Box<D>>) {
          m.inside = (x.array() >= r.lo.array()).all() && (x.array() <= r.hi.array()).all();
          m.near_boundary = ((x - r.lo).array().abs() < eps).any() ||
                            ((x - r.hi).array().abs() < eps).any();
        } else {
          if constexpr (D == 2) {
            const double orient = detail::polygon_orientation(r) > 0.0 ? 1.0 : -1.0;
            const auto& v = r.vertices;
            m.inside = true;
            for (std::size_t i = 0; i < v.size(); ++i) {
              const Vec2 e = v[(i + 1) % v.size()] - v[i];
              const Vec2 w = x - v[i];
              const double side = orient * (e.x() * w.y() - e.y() * w.x()) / e.norm();
              if (side < 0.0) m.inside = false;
              if (std::abs(side) < eps) m.near_boundary = true;
            }
          } else {
            throw PreconditionError("convex polygons are two-dimensional");
          }
        }
        return m;
      },
      region);
}

// ---------------------------------------------------------------------------
// Enumeration

/// Visits every lattice point y = (m + alpha) M that lies in the closed box
/// [lo, hi] (and possibly a few just outside it). visit(y, m).
///
/// Outer coefficients range over the coefficient bounding box of [lo, hi];
/// the innermost coefficient is clipped against the box row by row.
template <int D, typename Visitor>
void scan_box(const AffineLattice<D>& lat, const Vec<D>& lo, const Vec<D>& hi, Visitor&& visit) {
  constexpr double margin = 1e-9;
  const Mat<D>& minv = lat.basis.inverse();
  const Vec<D>& alpha = lat.shift.value();
  IVec<D> cmin, cmax;
  for (int i = 0; i < D; ++i) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < D; ++j) {
      const double w = minv(j, i);
      a += w * (w >= 0 ? lo(j) : hi(j));
      b += w * (w >= 0 ? hi(j) : lo(j));
    }
    cmin(i) = static_cast<std::int64_t>(std::ceil(a - alpha(i) - margin));
    cmax(i) = static_cast<std::int64_t>(std::floor(b - alpha(i) + margin));
    if (cmin(i) > cmax(i)) return;
  }
  const Vec<D> r0 = lat.basis.row(0);
  IVec<D> m = cmin;
  while (true) {
    // Point with m(0) = 0 and the remaining coordinates fixed.
    m(0) = 0;
    const Vec<D> base = lat.point(m);
    double t_lo = static_cast<double>(cmin(0)), t_hi = static_cast<double>(cmax(0));
    bool empty = false;
    for (int j = 0; j < D && !empty; ++j) {
      if (r0(j) == 0.0) {
        if (base(j) < lo(j) - margin || base(j) > hi(j) + margin) empty = true;
        continue;
      }
      double a = (lo(j) - base(j)) / r0(j), b = (hi(j) - base(j)) / r0(j);
      if (a > b) std::swap(a, b);
      t_lo = std::max(t_lo, a);
      t_hi = std::min(t_hi, b);
      if (t_lo > t_hi + 2 * margin) empty = true;
    }
    if (!empty) {
      const auto k0 = static_cast<std::int64_t>(std::ceil(t_lo - margin));
      const auto k1 = static_cast<std::int64_t>(std::floor(t_hi + margin));
      for (std::int64_t k = k0; k <= k1; ++k) {
        m(0) = k;
        visit(lat.point(m), static_cast<const IVec<D>&>(m));
      }
    }
    int i = 1;
    for (; i < D; ++i) {
      if (m(i) < cmax(i)) {
        ++m(i);
        break;
      }
      m(i) = cmin(i);
    }
    if (i == D) break;
  }
}

/// Visits every point of the affine lattice in the shell cT <= |y| < T,
/// excluding the origin. visit(y, m).
template <int D, typename Visitor>
void for_each_in_shell(const AffineLattice<D>& lat, const Shell& shell, Visitor&& visit) {
  validate(shell);
  const double inner2 = shell.c * shell.T * shell.c * shell.T;
  const double outer2 = shell.T * shell.T;
  const Vec<D> lo = Vec<D>::Constant(-shell.T), hi = Vec<D>::Constant(shell.T);
  scan_box(lat, lo, hi, [&](const Vec<D>& y, const IVec<D>& m) {
    const double r2 = y.squaredNorm();
    if (r2 >= inner2 && r2 < outer2 && !lat.is_origin(m)) visit(y, m);
  });
}

/// All points of the shell. Throws CapacityError beyond `capacity` points.
template <int D>
std::vector<Vec<D>> enumerate_shell(const AffineLattice<D>& lat, const Shell& shell,
                                    std::size_t capacity = kDefaultCapacity) {
  validate(shell);
  if (shell.T < 1.0) throw PreconditionError("enumerate_shell needs T >= 1");
  const double expected = unit_ball_volume(D) * std::pow(shell.T, D) * (1.0 - std::pow(shell.c, D));
  if (expected > static_cast<double>(capacity))
    throw CapacityError("shell holds about " + std::to_string(expected) + " points, cap is " +
                        std::to_string(capacity));
  std::vector<Vec<D>> out;
  for_each_in_shell(lat, shell, [&](const Vec<D>& y, const IVec<D>&) {
    if (out.size() >= capacity) throw CapacityError("shell enumeration exceeded capacity");
    out.push_back(y);
  });
  return out;
}

template <int D>
struct RegionPoints {
  std::vector<Vec<D>> points;
  std::size_t boundary_events = 0;
};

/// Visits the lattice points inside the region; returns how many points were
/// flagged as lying within kBoundaryTolerance of the boundary.
template <int D, typename Visitor>
std::size_t for_each_in_region(const AffineLattice<D>& lat, const Region<D>& region,
                               bool exclude_origin, Visitor&& visit) {
  validate(region);
  const auto [lo, hi] = bounding_box(region);
  std::size_t flagged = 0;
  scan_box(lat, lo, hi, [&](const Vec<D>& y, const IVec<D>& m) {
    if (exclude_origin && lat.is_origin(m)) return;
    const Membership mem = classify(region, y);
    if (mem.near_boundary) ++flagged;
    if (mem.inside) visit(y, m);
  });
  return flagged;
}

template <int D>
RegionPoints<D> points_in_region(const AffineLattice<D>& lat, const Region<D>& region,
                                 bool exclude_origin = true,
                                 std::size_t capacity = kDefaultCapacity) {
  RegionPoints<D> out;
  out.boundary_events =
      for_each_in_region(lat, region, exclude_origin, [&](const Vec<D>& y, const IVec<D>&) {
        if (out.points.size() >= capacity) throw CapacityError("region enumeration exceeded capacity");
        out.points.push_back(y);
      });
  return out;
}

// ---------------------------------------------------------------------------
// Non-template helpers (lattice.cpp)

/// gcd(q x) <= q for x = m + p/q; the origin is rejected.
bool is_visible(const IVec<2>& m, const Shift<2>& alpha);
bool is_visible(const IVec<3>& m, const Shift<3>& alpha);

/// Lagrange–Gauss reduction: |b1| <= |b2|, |b1.b2| <= |b1|^2 / 2, det stays +1.
UnimodularBasis<2> reduce_basis_2d(const UnimodularBasis<2>& basis);

/// Reduces the basis and rewrites the shift so the point set is unchanged.
AffineLattice<2> reduce(const AffineLattice<2>& lat);

/// Length of the shortest nonzero vector of the (linear) lattice Z^d M.
double minimum_distance(const UnimodularBasis<2>& basis);
double minimum_distance(const UnimodularBasis<3>& basis);

/// Minimum distance between distinct points of the affine lattice, which is the
/// minimum distance of the underlying linear lattice.
template <int D>
double minimum_distance(const AffineLattice<D>& lat) {
  return minimum_distance(lat.basis);
}

}  // namespace llg
