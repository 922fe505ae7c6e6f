#include "llg/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "llg/parallel.hpp"

namespace llg {

AlphaSpec AlphaSpec::rational(const Shift<2>& a) {
  if (!a.is_rational()) throw PreconditionError("AlphaSpec::rational needs a rational shift");
  if (a.is_integral()) return zero();
  return {Kind::Rational, a};
}

std::string AlphaSpec::describe() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::Irrational:
      return "irrational";
    case Kind::Rational: {
      std::ostringstream s;
      s << alpha.numerator()(0) << "/" << alpha.denominator() << " " << alpha.numerator()(1) << "/"
        << alpha.denominator();
      return s.str();
    }
  }
  return "";
}

ConfigurationSampler::ConfigurationSampler(const AlphaSpec& spec) : spec_(spec) {
  if (spec_.kind == AlphaSpec::Kind::Rational) group_.emplace(spec_.alpha.denominator());
}

AffineLattice<2> ConfigurationSampler::draw(Rng& rng) const {
  switch (spec_.kind) {
    case AlphaSpec::Kind::Zero:
      return reduce(AffineLattice<2>{sample_X1(rng).basis, Shift<2>::zero()});
    case AlphaSpec::Kind::Irrational:
      return reduce(sample_X(rng).affine());
    case AlphaSpec::Kind::Rational:
      return reduce(sample_Xq(rng, spec_.alpha, *group_).affine());
  }
  throw PreconditionError("unknown alpha kind");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Accumulates exact-count histograms from per-sample sorted threshold lists.
/// A point with threshold t counts at sigma when t < sigma (open) or t <= sigma (closed).
template <typename Profile>
CurveEstimate curve_from_profiles(const std::vector<double>& sigmas, int r_max, std::size_t n, std::uint64_t seed,
                                  unsigned workers, bool closed, Profile&& profile) {
  if (n < 1) throw PreconditionError("need n >= 1");
  if (r_max < 0) throw PreconditionError("need r_max >= 0");
  const std::size_t S = sigmas.size(), R = static_cast<std::size_t>(r_max) + 2;
  using Acc = std::vector<double>;
  const auto chunks = run_chunks<Acc>(n, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
    Acc acc(S * R, 0.0);
    std::vector<double> t;
    for (std::size_t i = b; i < e; ++i) {
      t.clear();
      profile(rng, t);
      std::sort(t.begin(), t.end());
      for (std::size_t k = 0; k < S; ++k) {
        const auto it = closed ? std::upper_bound(t.begin(), t.end(), sigmas[k])
                               : std::lower_bound(t.begin(), t.end(), sigmas[k]);
        const auto r = std::min<std::size_t>(static_cast<std::size_t>(it - t.begin()), R - 1);
        acc[k * R + r] += 1.0;
      }
    }
    return acc;
  });
  Acc total(S * R, 0.0);
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += c[i];
  CurveEstimate out;
  out.sigma = sigmas;
  out.r_max = r_max;
  out.n = n;
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < S; ++k) {
    std::vector<double> F, se;
    for (std::size_t r = 0; r + 1 < R; ++r) {
      const double p = total[k * R + r] / nn;
      F.push_back(p);
      se.push_back(std::sqrt(p * (1.0 - p) / nn));
    }
    out.F.push_back(F);
    out.stderr_.push_back(se);
    out.tail.push_back(total[k * R + R - 1] / nn);
  }
  return out;
}

double max_of(const std::vector<double>& v) {
  if (v.empty()) throw PreconditionError("empty sigma grid");
  for (double s : v)
    if (s < 0.0) throw PreconditionError("sigma must be non-negative");
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

CurveEstimate mc_F_curve(const std::vector<double>& sigmas, int r_max, double c, const AlphaSpec& alpha,
                         const Vec2& z, std::size_t n, std::uint64_t seed, unsigned workers) {
  const double smax = max_of(sigmas);
  if (!(c >= 0.0 && c < 1.0)) throw PreconditionError("need 0 <= c < 1");
  const ConfigurationSampler sampler(alpha);
  const Region<2> region = Cylinder<2>{c, 1.0, smax, Vec2(0.0, z.y())};
  return curve_from_profiles(sigmas, r_max, n, seed, workers, false, [&](Rng& rng, std::vector<double>& t) {
    const AffineLattice<2> lat = sampler.draw(rng);
    for_each_in_region(lat, region, true, [&](const Vec2& y, const IVec<2>&) { t.push_back(std::abs(y.y() - z.y())); });
  });
}

Estimate mc_F(int r, double sigma, double c, const AlphaSpec& alpha, const Vec2& z, std::size_t n,
              std::uint64_t seed, unsigned workers) {
  const CurveEstimate e = mc_F_curve({sigma}, r, c, alpha, z, n, seed, workers);
  return {e.F[0][static_cast<std::size_t>(r)], e.stderr_[0][static_cast<std::size_t>(r)]};
}

CurveEstimate mc_E_curve(const std::vector<double>& sigmas, int r_max, double c, const AlphaSpec& alpha,
                         std::size_t n, std::uint64_t seed, unsigned workers) {
  const double smax = max_of(sigmas);
  const ConfigurationSampler sampler(alpha);
  const Region<2> region = Cone<2>{c, smax};
  // In the plane A(c, sigma) = sigma / (1 - c^2), so |x2| <= x1 A  <=>  (1 - c^2) |x2| / x1 <= sigma.
  const double scale = 1.0 - c * c;
  return curve_from_profiles(sigmas, r_max, n, seed, workers, true, [&](Rng& rng, std::vector<double>& t) {
    const AffineLattice<2> lat = sampler.draw(rng);
    for_each_in_region(lat, region, true, [&](const Vec2& y, const IVec<2>&) { t.push_back(scale * std::abs(y.y()) / y.x()); });
  });
}

Estimate mc_E(int r, double sigma, double c, const AlphaSpec& alpha, std::size_t n, std::uint64_t seed,
              unsigned workers) {
  const CurveEstimate e = mc_E_curve({sigma}, r, c, alpha, n, seed, workers);
  return {e.F[0][static_cast<std::size_t>(r)], e.stderr_[0][static_cast<std::size_t>(r)]};
}

std::vector<double> mc_min_lateral_distances(double c, const AlphaSpec& alpha, double sigma_cap, std::size_t n,
                                             std::uint64_t seed, unsigned workers) {
  if (!(sigma_cap > 0.0)) throw PreconditionError("sigma_cap must be positive");
  const ConfigurationSampler sampler(alpha);
  const Region<2> region = Cylinder<2>{c, 1.0, sigma_cap, Vec2::Zero()};
  const auto chunks =
      run_chunks<std::vector<double>>(n, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
        std::vector<double> out;
        out.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) {
          const AffineLattice<2> lat = sampler.draw(rng);
          double m = kInf;
          for_each_in_region(lat, region, true, [&](const Vec2& y, const IVec<2>&) { m = std::min(m, std::abs(y.y())); });
          out.push_back(m);
        }
        return out;
      });
  std::vector<double> all;
  all.reserve(n);
  for (const auto& c2 : chunks) all.insert(all.end(), c2.begin(), c2.end());
  std::sort(all.begin(), all.end());
  return all;
}

PhiEstimate phi_from_min_distances(const std::vector<double>& xi_grid, const std::vector<double>& sorted_min,
                                   double h) {
  if (sorted_min.empty()) throw PreconditionError("no samples");
  const double n = static_cast<double>(sorted_min.size());
  auto survival = [&](double s) {
    const auto it = std::lower_bound(sorted_min.begin(), sorted_min.end(), s);
    return static_cast<double>(sorted_min.end() - it) / n;
  };
  PhiEstimate out;
  for (double xi : xi_grid) {
    if (!(xi > 0.0)) throw PreconditionError("xi grid must be positive");
    const double hp = std::min(0.05, xi);
    const double slope = (survival(xi - hp) - survival(xi + hp)) / (2.0 * hp);
    const double F = survival(xi);
    const double se_f = std::sqrt(F * (1.0 - F) / n);
    const double recommended = slope != 0.0 ? std::clamp(4.0 * se_f / std::abs(slope), 0.02, 0.5) : 0.5;
    double hh = h > 0.0 ? h : recommended;
    if (h > 0.0 && h < recommended) {
      std::ostringstream w;
      w << "h = " << h << " at xi = " << xi << " is below the noise floor; recommended h = " << recommended;
      out.warnings.push_back(w.str());
    }
    hh = std::min(hh, xi);
    const double p = survival(xi - hh) - survival(xi + hh);
    out.xi.push_back(xi);
    out.phi.push_back(p / (2.0 * hh));
    out.stderr_.push_back(std::sqrt(p * (1.0 - p) / n) / (2.0 * hh));
    out.h.push_back(hh);
  }
  return out;
}

PhiEstimate mc_Phi_density(const std::vector<double>& xi_grid, std::size_t n, std::uint64_t seed, double h,
                           const AlphaSpec& alpha, unsigned workers) {
  const double cap = max_of(xi_grid) + std::max(h, 0.5) + 1e-9;
  const auto mins = mc_min_lateral_distances(0.0, alpha, cap, n, seed, workers);
  return phi_from_min_distances(xi_grid, mins, h);
}

Estimate mc_Phi_joint(double xi, double w, double z, std::size_t n, std::uint64_t seed, unsigned workers) {
  if (!(xi > 0.0)) throw PreconditionError("xi must be positive");
  const Vec2 y(xi, w + z);
  const Region<2> region = Cylinder<2>{0.0, xi, 1.0, Vec2(0.0, z)};
  const auto chunks = run_chunks<double>(n, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
    double miss = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const XySample s = sample_X_given_y(rng, y);
      const AffineLattice<2> lat = s.affine();
      bool hit = false;
      // m = 0 is the anchor y, which lies on the open face x1 = xi.
      for_each_in_region(lat, region, false, [&](const Vec2&, const IVec<2>& m) { hit = hit || !m.isZero(); });
      if (!hit) miss += 1.0;
    }
    return miss;
  });
  double total = 0.0;
  for (double c : chunks) total += c;
  const double p = total / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

JointPhiGrid mc_Phi_joint_grid(const std::vector<double>& xi_grid, const std::vector<double>& w_grid, std::size_t n,
                               std::uint64_t seed, unsigned workers) {
  if (xi_grid.empty() || w_grid.empty()) throw PreconditionError("empty grid");
  const double xmax = max_of(xi_grid);
  double wmax = 0.0;
  for (double w : w_grid) wmax = std::max(wmax, std::abs(w));
  const std::size_t I = xi_grid.size(), J = w_grid.size();
  const Box<2> box{Vec2(-xmax, -1.0 - wmax), Vec2(0.0, 1.0 + wmax)};
  // A point x of Z^2 M hits the cylinder for (xi, w) iff -xi < x1 < 0 and |x2 + w| < 1.
  const auto chunks =
      run_chunks<std::vector<double>>(n, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
        std::vector<double> acc(I * J, 0.0);
        std::vector<Vec2> pts;
        std::vector<double> reach(J);
        for (std::size_t s = b; s < e; ++s) {
          const AffineLattice<2> lat{sample_X1(rng).basis, Shift<2>::zero()};
          pts.clear();
          scan_box(lat, box.lo, box.hi, [&](const Vec2& y, const IVec<2>& m) {
            if (!m.isZero() && y.x() < 0.0) pts.push_back(y);
          });
          for (std::size_t j = 0; j < J; ++j) {
            double r = kInf;
            for (const Vec2& p : pts)
              if (std::abs(p.y() + w_grid[j]) < 1.0) r = std::min(r, -p.x());
            reach[j] = r;
          }
          for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
              if (reach[j] >= xi_grid[i]) acc[i * J + j] += 1.0;
        }
        return acc;
      });
  JointPhiGrid out;
  out.xi = xi_grid;
  out.w = w_grid;
  out.n = n;
  out.phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(I), static_cast<Eigen::Index>(J));
  out.stderr_ = out.phi;
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t j = 0; j < J; ++j) out.phi(i, j) += c[i * J + j];
  const double nn = static_cast<double>(n);
  out.phi /= nn;
  for (Eigen::Index i = 0; i < out.phi.rows(); ++i)
    for (Eigen::Index j = 0; j < out.phi.cols(); ++j) {
      const double p = out.phi(i, j);
      out.stderr_(i, j) = std::sqrt(p * (1.0 - p) / nn);
    }
  return out;
}

PhiTable::PhiTable(JointPhiGrid grid) : grid_(std::move(grid)) {
  if (grid_.xi.size() < 2 || grid_.w.size() < 2) throw PreconditionError("PhiTable needs at least a 2x2 grid");
  if (!std::is_sorted(grid_.xi.begin(), grid_.xi.end()) || !std::is_sorted(grid_.w.begin(), grid_.w.end()))
    throw PreconditionError("PhiTable grids must be increasing");
}

double PhiTable::operator()(double xi, double w_abs) const {
  const auto& X = grid_.xi;
  const auto& W = grid_.w;
  if (xi > X.back()) return 0.0;
  xi = std::max(xi, X.front());
  w_abs = std::clamp(w_abs, W.front(), W.back());
  auto locate = [](const std::vector<double>& g, double x) {
    std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
    i = std::clamp<std::size_t>(i, 1, g.size() - 1) - 1;
    const double f = (x - g[i]) / (g[i + 1] - g[i]);
    return std::pair<std::size_t, double>(i, f);
  };
  const auto [i, fx] = locate(X, xi);
  const auto [j, fw] = locate(W, w_abs);
  const auto& P = grid_.phi;
  const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
  return (1 - fx) * (1 - fw) * P(ii, jj) + fx * (1 - fw) * P(ii + 1, jj) + (1 - fx) * fw * P(ii, jj + 1) +
         fx * fw * P(ii + 1, jj + 1);
}

std::vector<MeanEstimate> siegel_means(const SiegelSetup& setup, const std::vector<Box<2>>& boxes, std::size_t n,
                                       std::uint64_t seed, unsigned workers) {
  std::optional<SL2Mod> group;
  if (setup.space == SiegelSpace::Xq) group.emplace(setup.alpha.denominator());
  const std::size_t B = boxes.size();
  const auto chunks =
      run_chunks<std::vector<double>>(n, seed, workers, [&](std::size_t, std::size_t b, std::size_t e, Rng& rng) {
        std::vector<double> acc(2 * B, 0.0);
        for (std::size_t s = b; s < e; ++s) {
          AffineLattice<2> lat;
          bool drop_origin = false;
          switch (setup.space) {
            case SiegelSpace::X1:
              lat = {sample_X1(rng).basis, Shift<2>::zero()};
              drop_origin = true;
              break;
            case SiegelSpace::X:
              lat = sample_X(rng).affine();
              break;
            case SiegelSpace::Xq:
              lat = sample_Xq(rng, setup.alpha, *group).affine();
              drop_origin = true;
              break;
            case SiegelSpace::Xy:
              lat = sample_X_given_y(rng, setup.y).affine();
              break;
          }
          for (std::size_t k = 0; k < B; ++k) {
            double count = 0.0;
            scan_box(lat, boxes[k].lo, boxes[k].hi, [&](const Vec2& y, const IVec<2>& m) {
              if (drop_origin && lat.is_origin(m)) return;
              if ((y.array() >= boxes[k].lo.array()).all() && (y.array() <= boxes[k].hi.array()).all()) count += 1.0;
            });
            acc[2 * k] += count;
            acc[2 * k + 1] += count * count;
          }
        }
        return acc;
      });
  std::vector<double> total(2 * B, 0.0);
  for (const auto& c : chunks)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += c[i];
  const double nn = static_cast<double>(n);
  std::vector<MeanEstimate> out(B);
  for (std::size_t k = 0; k < B; ++k) {
    out[k].mean = total[2 * k] / nn;
    const double var = nn > 1 ? (total[2 * k + 1] - nn * out[k].mean * out[k].mean) / (nn - 1.0) : 0.0;
    out[k].stderr_ = std::sqrt(std::max(0.0, var) / nn);
  }
  return out;
}

double siegel_expected(const SiegelSetup& setup, const Box<2>& box) {
  const Vec2 d = box.hi - box.lo;
  double e = d.x() * d.y();
  if (setup.space == SiegelSpace::Xy && (setup.y.array() >= box.lo.array()).all() &&
      (setup.y.array() <= box.hi.array()).all())
    e += 1.0;
  return e;
}

}  // namespace llg
