#include "llg/directions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "llg/parallel.hpp"
#include "llg/special.hpp"

namespace llg {

namespace {

std::int64_t gcd_abs(const IVec<2>& v) { return std::gcd(std::llabs(v(0)), std::llabs(v(1))); }

}  // namespace

DirectionSample directions_2d(const AffineLattice<2>& lat, const Shell& shell, bool visible_only) {
  if (visible_only && !lat.shift.is_rational())
    throw PreconditionError("visible points are defined for rational shifts only");
  std::vector<std::array<double, 3>> keyed;
  const bool rational = lat.shift.is_rational();
  for_each_in_shell(lat, shell, [&](const Vec2& y, const IVec<2>& m) {
    double xi;
    if (rational) {
      const std::int64_t q = lat.shift.denominator();
      const IVec<2> qx = m * q + lat.shift.numerator();
      const std::int64_t g = gcd_abs(qx);
      if (visible_only && g > q) return;
      const IVec<2> prim = qx / g;
      xi = direction_of(lat.basis.to_point(prim.cast<double>()));
    } else {
      xi = direction_of(y);
    }
    keyed.push_back({xi, y.x(), y.y()});
  });
  std::sort(keyed.begin(), keyed.end());
  DirectionSample out;
  out.values.reserve(keyed.size());
  for (const auto& k : keyed) out.values.push_back(k[0]);
  return out;
}

std::vector<double> normalized_gaps(const DirectionSample& sample) {
  const auto& x = sample.values;
  const std::size_t n = x.size();
  std::vector<double> gaps(n);
  if (n == 0) return gaps;
  const double N = static_cast<double>(n);
  gaps[0] = N * (x[0] - (x[n - 1] - 1.0));
  for (std::size_t j = 1; j < n; ++j) gaps[j] = N * (x[j] - x[j - 1]);
  return gaps;
}

std::vector<GapPoint> gap_distribution(const DirectionSample& sample, const std::vector<double>& s_grid) {
  if (sample.size() == 0) throw PreconditionError("gap_distribution: empty sample");
  std::vector<double> gaps = normalized_gaps(sample);
  std::sort(gaps.begin(), gaps.end());
  const double n = static_cast<double>(gaps.size());
  std::vector<GapPoint> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    GapPoint g;
    g.s = s;
    if (s <= 0.0) {
      g.P = 1.0;
    } else {
      const auto it = std::lower_bound(gaps.begin(), gaps.end(), s);
      g.P = static_cast<double>(gaps.end() - it) / n;
    }
    g.stderr_ = std::sqrt(g.P * (1.0 - g.P) / n);
    out.push_back(g);
  }
  return out;
}

DirectionSample sqrt_mod_one(std::int64_t n_max) {
  if (n_max < 1) throw PreconditionError("sqrt_mod_one: need n_max >= 1");
  DirectionSample out;
  out.values.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double r = std::sqrt(static_cast<double>(n));
    const auto k = static_cast<std::int64_t>(std::llround(r));
    out.values.push_back(k * k == n ? 0.0 : wrap_half(r - std::floor(r)));
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

DirectionSample uniform_sample(std::size_t n, std::uint64_t seed) {
  DirectionSample out;
  out.values.reserve(n);
  Rng rng(seed, 0);
  for (std::size_t i = 0; i < n; ++i) out.values.push_back(0.5 - rng.uniform());
  std::sort(out.values.begin(), out.values.end());
  return out;
}

double arc_half_width(double sigma, const Shell& shell) {
  validate(shell);
  if (sigma < 0.0) throw PreconditionError("sigma must be non-negative");
  const double length = 2.0 * sigma / ((1.0 - shell.c * shell.c) * shell.T * shell.T);
  if (length > 2.0 * M_PI) throw PreconditionError("disc volume exceeds the full circle");
  return 0.5 * length / (2.0 * M_PI);
}

double cap_radius(double sigma, const Shell& shell) {
  validate(shell);
  if (sigma < 0.0) throw PreconditionError("sigma must be non-negative");
  const double area = 3.0 * sigma / ((1.0 - std::pow(shell.c, 3)) * std::pow(shell.T, 3));
  if (area > 4.0 * M_PI) throw PreconditionError("disc volume exceeds the full sphere");
  // Cap area 2 pi (1 - cos theta) = 4 pi sin^2(theta / 2).
  return 2.0 * std::asin(std::sqrt(area / (4.0 * M_PI)));
}

DiscCounter2D::DiscCounter2D(const AffineLattice<2>& lat, const Shell& shell, bool visible_only)
    : shell_(shell), dirs_(directions_2d(lat, shell, visible_only)) {}

std::size_t DiscCounter2D::count_open(double a, double b) const {
  const auto& x = dirs_.values;
  const auto lo = std::upper_bound(x.begin(), x.end(), a);
  const auto hi = std::lower_bound(x.begin(), x.end(), b);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

std::size_t DiscCounter2D::count(double sigma, double xi_center) const {
  const double h = arc_half_width(sigma, shell_);
  if (h == 0.0) return 0;
  const double a = xi_center - h, b = xi_center + h;
  std::size_t n = count_open(a, b);
  if (a < -0.5) n += count_open(a + 1.0, b + 1.0);
  if (b > 0.5) n += count_open(a - 1.0, b - 1.0);
  return n;
}

DiscCounter3D::DiscCounter3D(const AffineLattice<3>& lat, const Shell& shell) : shell_(shell) {
  for_each_in_shell(lat, shell, [&](const Vec3& y, const IVec<3>&) { units_.push_back(y.normalized()); });
}

std::size_t DiscCounter3D::count(double sigma, const Vec3& v) const {
  const double theta = cap_radius(sigma, shell_);
  if (theta == 0.0) return 0;
  std::size_t n = 0;
  for (const Vec3& u : units_) {
    const double angle = std::atan2(u.cross(v).norm(), u.dot(v));
    if (angle < theta) ++n;
  }
  return n;
}

std::size_t disc_count(const AffineLattice<2>& lat, const Shell& shell, double sigma, const Vec2& v) {
  const double h = arc_half_width(sigma, shell);
  if (h == 0.0) return 0;
  const double xv = direction_of(v);
  std::size_t n = 0;
  for_each_in_shell(lat, shell, [&](const Vec2& y, const IVec<2>&) {
    if (std::abs(wrap_half(direction_of(y) - xv)) < h) ++n;
  });
  return n;
}

std::size_t disc_count(const AffineLattice<3>& lat, const Shell& shell, double sigma, const Vec3& v) {
  const double theta = cap_radius(sigma, shell);
  if (theta == 0.0) return 0;
  std::size_t n = 0;
  for_each_in_shell(lat, shell, [&](const Vec3& y, const IVec<3>&) {
    if (std::atan2(y.cross(v).norm(), y.dot(v)) < theta) ++n;
  });
  return n;
}

std::vector<CountDistribution> empirical_E_curve(const DiscCounter2D& counter, const std::vector<double>& sigmas,
                                                 int r_max, std::size_t n_dirs, std::uint64_t seed,
                                                 unsigned workers, const std::function<double(double)>& weight) {
  if (n_dirs < 1) throw PreconditionError("empirical_E: need n_dirs >= 1");
  if (r_max < 0) throw PreconditionError("empirical_E: need r_max >= 0");
  for (double s : sigmas) arc_half_width(s, counter.shell());
  const std::size_t S = sigmas.size(), R = static_cast<std::size_t>(r_max) + 1;
  using Acc = std::vector<double>;  // [sum w 1{N=r}, sum w^2 1{N=r}] per (sigma, r)
  const auto chunks = run_chunks<Acc>(n_dirs, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
    Acc acc(2 * S * R, 0.0);
    for (std::size_t i = b; i < e; ++i) {
      const double xi = 0.5 - rng.uniform();
      const double w = weight ? weight(xi) : 1.0;
      for (std::size_t k = 0; k < S; ++k) {
        const std::size_t r = counter.count(sigmas[k], xi);
        if (r < R) {
          acc[2 * (k * R + r)] += w;
          acc[2 * (k * R + r) + 1] += w * w;
        }
      }
    }
    return acc;
  });
  Acc total(2 * S * R, 0.0);
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += c[i];
  const double n = static_cast<double>(n_dirs);
  std::vector<CountDistribution> out(S);
  for (std::size_t k = 0; k < S; ++k) {
    out[k].n = n_dirs;
    for (std::size_t r = 0; r < R; ++r) {
      const double m = total[2 * (k * R + r)] / n;
      const double m2 = total[2 * (k * R + r) + 1] / n;
      out[k].E.push_back(m);
      out[k].stderr_.push_back(std::sqrt(std::max(0.0, m2 - m * m) / n));
    }
  }
  return out;
}

CountDistribution empirical_E(const AffineLattice<2>& lat, const Shell& shell, double sigma, int r_max,
                              std::size_t n_dirs, std::uint64_t seed, const EmpiricalEOptions& opt) {
  double s = sigma;
  if (opt.visible_only) s = sigma / kappa(lat.shift.denominator(), 2);
  const DiscCounter2D counter(lat, shell, opt.visible_only);
  return empirical_E_curve(counter, {s}, r_max, n_dirs, seed, opt.workers, opt.weight).front();
}

double sector_equidistribution(const DirectionSample& sample, int n_sectors) {
  if (n_sectors < 2) throw PreconditionError("need at least two sectors");
  if (sample.size() == 0) throw PreconditionError("sector_equidistribution: empty sample");
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_sectors), 0);
  for (double xi : sample.values) {
    auto k = static_cast<long>(std::ceil((xi + 0.5) * n_sectors)) - 1;
    k = std::clamp<long>(k, 0, n_sectors - 1);
    ++counts[static_cast<std::size_t>(k)];
  }
  const double total = static_cast<double>(sample.size());
  double dev = 0.0;
  for (std::size_t c : counts) dev = std::max(dev, std::abs(c / total - 1.0 / n_sectors) * n_sectors);
  return dev;
}

double sector_equidistribution(const AffineLattice<2>& lat, const Shell& shell, int n_sectors) {
  return sector_equidistribution(directions_2d(lat, shell, false), n_sectors);
}

}  // namespace llg
