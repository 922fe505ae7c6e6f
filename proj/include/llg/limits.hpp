// Monte Carlo estimates of limit functions over random (affine) lattices.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "llg/empirical.hpp"
#include "llg/geometry.hpp"
#include "llg/haar.hpp"
#include "llg/lattice.hpp"

namespace llg {

/// Which space of point configurations the shift selects: alpha in Z^2 gives
/// Z^2 M without the origin, irrational alpha gives the affine space X, and
/// alpha = p/q gives (Z^2 + alpha gamma) M over X_q.
struct AlphaSpec {
  enum class Kind { Zero, Irrational, Rational };
  Kind kind = Kind::Zero;
  Shift<2> alpha = Shift<2>::zero();

  static AlphaSpec zero() { return {}; }
  static AlphaSpec irrational() { return {Kind::Irrational, Shift<2>::zero()}; }
  static AlphaSpec rational(const Shift<2>& a);
  std::string describe() const;
};

/// Draws reduced random configurations for an AlphaSpec.
class ConfigurationSampler {
 public:
  explicit ConfigurationSampler(const AlphaSpec& spec);
  AffineLattice<2> draw(Rng& rng) const;
  const AlphaSpec& spec() const { return spec_; }

 private:
  AlphaSpec spec_;
  std::optional<SL2Mod> group_;
};

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

struct CurveEstimate {
  std::vector<double> sigma;
  int r_max = 0;
  std::vector<std::vector<double>> F;        // F[i][r]
  std::vector<std::vector<double>> stderr_;  // binomial
  std::vector<double> tail;                  // fraction with more than r_max points
  std::size_t n = 0;
};

/// F(r, sigma): probability that the open cylinder Z(c, sigma) + z holds exactly
/// r points, for every sigma of the grid and r = 0..r_max, with common samples.
CurveEstimate mc_F_curve(const std::vector<double>& sigmas, int r_max, double c, const AlphaSpec& alpha,
                         const Vec2& z, std::size_t n, std::uint64_t seed, unsigned workers = 1);

Estimate mc_F(int r, double sigma, double c, const AlphaSpec& alpha, const Vec2& z, std::size_t n,
              std::uint64_t seed, unsigned workers = 1);

/// Same for the cone C(c, sigma).
CurveEstimate mc_E_curve(const std::vector<double>& sigmas, int r_max, double c, const AlphaSpec& alpha,
                         std::size_t n, std::uint64_t seed, unsigned workers = 1);

Estimate mc_E(int r, double sigma, double c, const AlphaSpec& alpha, std::size_t n, std::uint64_t seed,
              unsigned workers = 1);

/// Per-sample distance to the x1-axis of the nearest point in {c < x1 < 1},
/// capped: samples with no point within `sigma_cap` give +inf. Sorted.
/// F(0, sigma) = fraction of values >= sigma.
std::vector<double> mc_min_lateral_distances(double c, const AlphaSpec& alpha, double sigma_cap, std::size_t n,
                                             std::uint64_t seed, unsigned workers = 1);

struct PhiEstimate {
  std::vector<double> xi;
  std::vector<double> phi;
  std::vector<double> stderr_;
  std::vector<double> h;
  std::vector<std::string> warnings;
};

/// Phi(xi) = -dF(0, xi)/dxi (d = 2) by central differences of a common-sample
/// F curve. h <= 0 selects h = clamp(4 SE / |slope|, 0.02, 0.5) per point;
/// every h is capped by xi so that xi - h >= 0.
PhiEstimate mc_Phi_density(const std::vector<double>& xi_grid, std::size_t n, std::uint64_t seed, double h = 0.0,
                           const AlphaSpec& alpha = AlphaSpec::irrational(), unsigned workers = 1);

/// Phi from a precomputed sorted sample of minimal lateral distances.
PhiEstimate phi_from_min_distances(const std::vector<double>& xi_grid, const std::vector<double>& sorted_min,
                                   double h);

/// Joint density Phi(xi, w, z) for irrational alpha: probability that Z^2 M + y,
/// y = xi e1 + w + z, misses the open cylinder Z(0, xi, 1) + z. w, z lateral scalars.
Estimate mc_Phi_joint(double xi, double w, double z, std::size_t n, std::uint64_t seed, unsigned workers = 1);

struct JointPhiGrid {
  std::vector<double> xi;
  std::vector<double> w;
  Eigen::MatrixXd phi;      // phi(i, j) at (xi[i], w[j])
  Eigen::MatrixXd stderr_;
  std::size_t n = 0;
};

/// The joint density on a grid with common samples (z drops out for irrational alpha).
JointPhiGrid mc_Phi_joint_grid(const std::vector<double>& xi_grid, const std::vector<double>& w_grid, std::size_t n,
                               std::uint64_t seed, unsigned workers = 1);

/// Bilinear interpolation of a joint grid in (xi, |w|); zero beyond the xi range.
class PhiTable {
 public:
  explicit PhiTable(JointPhiGrid grid);
  double operator()(double xi, double w_abs) const;

 private:
  JointPhiGrid grid_;
};

/// Transition density p(v0, xi, v1) = 1/4 |v1 - v0|^{3-d} Phi(xi, w, z) with
/// w = -(v1 K(v0))_perp / |v1 - v0| and z = (beta(v0) K(v0))_perp. `phi` receives
/// (xi, w, z) as vectors of length d - 1.
using PhiFunction = std::function<double(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;

template <int D>
double transition_density(const Vec<D>& v0, double xi, const Vec<D>& v1, const PhiFunction& phi,
                          const Vec<D>& beta0 = Vec<D>::Zero()) {
  const double dist = (v1 - v0).norm();
  if (dist < 1e-14) throw PreconditionError("transition_density is singular at v1 = v0");
  const Mat<D> K = K_of_v(v0);
  const Vec<D> v1K = K.transpose() * v1;
  const Vec<D> bK = K.transpose() * beta0;
  const Eigen::VectorXd w = -v1K.template tail<D - 1>() / dist;
  const Eigen::VectorXd z = bK.template tail<D - 1>();
  return 0.25 * std::pow(dist, 3 - D) * phi(xi, w, z);
}

// ---------------------------------------------------------------------------
// Siegel-type calibration

enum class SiegelSpace { X1, X, Xq, Xy };

struct SiegelSetup {
  SiegelSpace space = SiegelSpace::X1;
  Shift<2> alpha = Shift<2>::zero();  // for Xq
  Vec2 y = Vec2::Zero();              // for Xy
};

/// Mean number of configuration points in each closed box, with common samples
/// across boxes. X1 excludes the origin; Xy counts the anchor y.
std::vector<MeanEstimate> siegel_means(const SiegelSetup& setup, const std::vector<Box<2>>& boxes, std::size_t n,
                                       std::uint64_t seed, unsigned workers = 1);

/// area(B), plus chi_B(y) for Xy.
double siegel_expected(const SiegelSetup& setup, const Box<2>& box);

}  // namespace llg
