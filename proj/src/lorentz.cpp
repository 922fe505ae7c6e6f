#include "llg/lorentz.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "llg/parallel.hpp"

namespace llg {

bool ray_meets_polygon(const Vec2& s, const Vec2& v, const ConvexPolygon& P) {
  const auto& p = P.vertices;
  double orient = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % p.size()];
    orient += a.x() * b.y() - a.y() * b.x();
  }
  const double sgn = orient > 0.0 ? 1.0 : -1.0;
  double t_in = 0.0, t_out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& a = p[i];
    const Vec2 e = p[(i + 1) % p.size()] - a;
    // inside: sgn * cross(e, x - a) >= 0, linear in t along the ray
    const double f0 = sgn * (e.x() * (s.y() - a.y()) - e.y() * (s.x() - a.x()));
    const double f1 = sgn * (e.x() * v.y() - e.y() * v.x());
    if (f1 == 0.0) {
      if (f0 < 0.0) return false;
      continue;
    }
    const double t = -f0 / f1;
    if (f1 > 0.0) {
      t_in = std::max(t_in, t);
    } else {
      t_out = std::min(t_out, t);
    }
    if (t_in > t_out) return false;
  }
  return t_out > 0.0;
}

std::size_t convex_scatterer_hit_count(const AffineLattice<2>& lat, const Shell& shell, const ConvexPolygon& Q,
                                       const Vec2& v) {
  validate(shell);
  validate<2>(Region<2>(Q));
  require_unit<2>(v, "direction");
  ConvexPolygon qt = Q;
  double radius = 0.0;
  for (auto& p : qt.vertices) {
    p /= shell.T;
    radius = std::max(radius, p.norm());
  }
  const double inner2 = shell.c * shell.T * shell.c * shell.T, outer2 = shell.T * shell.T;
  std::size_t hits = 0;
  traverse_cells(lat, Vec2::Zero().eval(), v, 0.0, shell.T + radius, radius, [&](const IVec<2>& m, double) {
    if (lat.is_origin(m)) return true;
    const Vec2 y = lat.point(m);
    const double r2 = y.squaredNorm();
    if (r2 < inner2 || r2 >= outer2) return true;
    if (ray_meets_polygon(Vec2(-y), v, qt)) ++hits;
    return true;
  });
  return hits;
}

BetaTable2D::BetaTable2D(std::vector<Vec2> values) : values_(std::move(values)) {
  if (values_.empty()) throw PreconditionError("beta table is empty");
}

Vec2 BetaTable2D::operator()(const Vec2& v) const {
  const double n = static_cast<double>(values_.size());
  double u = std::atan2(v.y(), v.x()) / (2.0 * M_PI);
  u = (u - std::floor(u)) * n;
  const auto i = static_cast<std::size_t>(std::floor(u)) % values_.size();
  const double f = u - std::floor(u);
  return (1.0 - f) * values_[i] + f * values_[(i + 1) % values_.size()];
}

namespace {

template <int D>
Vec<D> random_unit(Rng& rng) {
  if constexpr (D == 2) {
    const double a = 2.0 * M_PI * rng.uniform();
    return {std::cos(a), std::sin(a)};
  } else {
    Vec<D> g;
    do {
      for (int i = 0; i < D; ++i) g(i) = rng.normal();
    } while (g.norm() < 1e-12);
    return g.normalized();
  }
}

template <int D>
std::vector<Vec<D>> direction_grid() {
  std::vector<Vec<D>> out;
  if constexpr (D == 2) {
    for (int i = 0; i < 720; ++i) {
      const double a = 2.0 * M_PI * i / 720.0;
      out.emplace_back(std::cos(a), std::sin(a));
    }
  } else {
    const int n = 2000;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double r = std::sqrt(1.0 - z * z);
      Vec<D> u = Vec<D>::Zero();
      u(0) = r * std::cos(golden * i);
      u(1) = r * std::sin(golden * i);
      u(2) = z;
      out.push_back(u);
    }
  }
  return out;
}

template <int D>
bool is_lattice_point(const AffineLattice<D>& lat, const Vec<D>& q) {
  const Vec<D> c = lat.basis.to_coefficients(q) - lat.shift.value();
  return (c - c.array().round().matrix()).cwiseAbs().maxCoeff() < 1e-12;
}

template <int D>
void check_beta(const AffineLattice<D>& lat, const Vec<D>& q0, const BetaFunction<D>& beta) {
  if (!is_lattice_point(lat, q0)) return;
  for (const Vec<D>& v : direction_grid<D>()) {
    const Vec<D> b = beta(v);
    if (b.norm() <= 1.0 || ray_ball_entry(b, v, Vec<D>::Zero().eval(), 1.0)) {
      std::ostringstream msg;
      msg << "beta(v) + t v meets the unit ball for v = (" << v.transpose() << ")";
      throw PreconditionError(msg.str());
    }
  }
}

template <int D>
Vec<D> start_point(const ScattererField<D>& field, const Vec<D>& q0, const BetaFunction<D>& beta, const Vec<D>& v,
                   bool averaged, Rng& rng) {
  if (!averaged) return q0 + field.rho() * beta(v);
  const auto& lat = field.lattice();
  while (true) {
    Vec<D> u;
    for (int i = 0; i < D; ++i) u(i) = rng.uniform();
    const Vec<D> q = lat.basis.to_point(u);
    if (!field.containing_ball(q)) return q;
  }
}

template <int D>
FreePathCdf free_path_cdf_impl(const AffineLattice<D>& lat, const Vec<D>& q0, const BetaFunction<D>& beta, double rho,
                               const std::vector<double>& xi_grid, std::size_t n_dirs, std::uint64_t seed,
                               const FreePathOptions& opt) {
  if (xi_grid.empty()) throw PreconditionError("empty xi grid");
  if (n_dirs < 1) throw PreconditionError("need n_dirs >= 1");
  const ScattererField<D> field(lat, rho);
  if (!opt.averaged) check_beta(lat, q0, beta);
  const double scale = std::pow(rho, D - 1);
  const double xi_max = *std::max_element(xi_grid.begin(), xi_grid.end());
  const double t_max = std::max(xi_max, 1e-9) / scale * 1.05;
  const double inf = std::numeric_limits<double>::infinity();
  using Chunk = std::vector<double>;
  const auto chunks = run_chunks<Chunk>(n_dirs, seed, opt.workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
    Chunk xs;
    xs.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
      const Vec<D> v = random_unit<D>(rng);
      const Vec<D> s = start_point(field, q0, beta, v, opt.averaged, rng);
      const auto hit = free_path(field, s, v, t_max);
      xs.push_back(hit ? scale * hit->tau1 : inf);
    }
    return xs;
  });
  FreePathCdf out;
  out.n = n_dirs;
  out.xi = xi_grid;
  std::size_t censored = 0;
  for (const auto& c : chunks)
    for (double x : c) {
      if (std::isinf(x)) {
        ++censored;
      } else {
        out.finite_samples.push_back(x);
      }
    }
  std::sort(out.finite_samples.begin(), out.finite_samples.end());
  const double n = static_cast<double>(n_dirs);
  out.censored_fraction = censored / n;
  for (double xi : xi_grid) {
    const auto it = std::lower_bound(out.finite_samples.begin(), out.finite_samples.end(), xi);
    const double p = (static_cast<double>(out.finite_samples.end() - it) + censored) / n;
    out.cdf.push_back(p);
    out.stderr_.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return out;
}

template <int D>
JointSample<D> joint_impl(const AffineLattice<D>& lat, const Vec<D>& q0, const BetaFunction<D>& beta, double rho,
                          double xi_max, std::size_t n_dirs, std::uint64_t seed, unsigned workers) {
  const ScattererField<D> field(lat, rho);
  check_beta(lat, q0, beta);
  const double scale = std::pow(rho, D - 1);
  const double t_max = xi_max / scale;
  const auto chunks =
      run_chunks<JointSample<D>>(n_dirs, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
        JointSample<D> js;
        for (std::size_t i = b; i < e; ++i) {
          const Vec<D> v = random_unit<D>(rng);
          const auto hit = free_path(field, Vec<D>(q0 + rho * beta(v)), v, t_max);
          if (!hit) {
            ++js.dropped;
            continue;
          }
          const Mat<D> K = K_of_v(v);
          js.records.push_back({v, scale * hit->tau1, Vec<D>(-(K.transpose() * hit->w1))});
        }
        return js;
      });
  JointSample<D> out;
  for (const auto& c : chunks) {
    out.records.insert(out.records.end(), c.records.begin(), c.records.end());
    out.dropped += c.dropped;
  }
  return out;
}

}  // namespace

FreePathCdf empirical_free_path_cdf(const AffineLattice<2>& lat, const Vec2& q0, const BetaFunction<2>& beta,
                                    double rho, const std::vector<double>& xi_grid, std::size_t n_dirs,
                                    std::uint64_t seed, const FreePathOptions& opt) {
  return free_path_cdf_impl<2>(lat, q0, beta, rho, xi_grid, n_dirs, seed, opt);
}

FreePathCdf empirical_free_path_cdf(const AffineLattice<3>& lat, const Vec3& q0, const BetaFunction<3>& beta,
                                    double rho, const std::vector<double>& xi_grid, std::size_t n_dirs,
                                    std::uint64_t seed, const FreePathOptions& opt) {
  return free_path_cdf_impl<3>(lat, q0, beta, rho, xi_grid, n_dirs, seed, opt);
}

JointSample<2> joint_tau_w1_sample(const AffineLattice<2>& lat, const Vec2& q0, const BetaFunction<2>& beta,
                                   double rho, double xi_max, std::size_t n_dirs, std::uint64_t seed,
                                   unsigned workers) {
  return joint_impl<2>(lat, q0, beta, rho, xi_max, n_dirs, seed, workers);
}

JointSample<3> joint_tau_w1_sample(const AffineLattice<3>& lat, const Vec3& q0, const BetaFunction<3>& beta,
                                   double rho, double xi_max, std::size_t n_dirs, std::uint64_t seed,
                                   unsigned workers) {
  return joint_impl<3>(lat, q0, beta, rho, xi_max, n_dirs, seed, workers);
}

HitCountDistribution empirical_ray_hits(const AffineLattice<2>& lat, const Shell& shell, double rho,
                                        const Vec2& w_offset, int r_max, std::size_t n_dirs, std::uint64_t seed,
                                        unsigned workers) {
  if (r_max < 0) throw PreconditionError("need r_max >= 0");
  const std::size_t R = static_cast<std::size_t>(r_max) + 1;
  // [count of N = r for r < R, sum N, sum N^2]
  const auto chunks = run_chunks<std::vector<double>>(
      n_dirs, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
        std::vector<double> acc(R + 2, 0.0);
        for (std::size_t i = b; i < e; ++i) {
          const Vec2 v = random_unit<2>(rng);
          const auto r = ray_hit_count(lat, shell, rho, v, w_offset);
          if (r < R) acc[r] += 1.0;
          acc[R] += static_cast<double>(r);
          acc[R + 1] += static_cast<double>(r) * static_cast<double>(r);
        }
        return acc;
      });
  std::vector<double> total(R + 2, 0.0);
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += c[i];
  const double n = static_cast<double>(n_dirs);
  HitCountDistribution out;
  out.n = n_dirs;
  for (std::size_t r = 0; r < R; ++r) {
    const double p = total[r] / n;
    out.E.push_back(p);
    out.stderr_.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  out.mean = total[R] / n;
  const double var = n > 1 ? (total[R + 1] - n * out.mean * out.mean) / (n - 1.0) : 0.0;
  out.mean_stderr = std::sqrt(std::max(0.0, var) / n);
  return out;
}

}  // namespace llg
