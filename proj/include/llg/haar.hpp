// Haar-random planar lattices: X_1, X, X_q and the fiber X(y).
#pragma once

#include <cstdint>
#include <vector>

#include "llg/lattice.hpp"
#include "llg/parallel.hpp"

namespace llg {

using IMat2 = Eigen::Matrix<std::int64_t, 2, 2>;

struct HaarLatticeSample {
  UnimodularBasis<2> basis = UnimodularBasis<2>::identity();
  double x = 0.0;      // tau = x + i y in the modular fundamental domain
  double y = 1.0;
  double theta = 0.0;  // rotation angle
};

/// Basis of the lattice with shape tau = x + i y, rotated by theta:
/// rows (1, 0) / sqrt(y) and (x, y) / sqrt(y), times [[cos, sin], [-sin, cos]].
UnimodularBasis<2> basis_from_shape(double x, double y, double theta);

inline constexpr double kFundamentalY0 = 0.8660254037844386;  // sqrt(3) / 2

/// One mu_1-random lattice by rejection from x ~ U[-1/2, 1/2], y with density
/// y0 / y^2 on [y0, inf); `proposals` (optional) accumulates proposal counts.
HaarLatticeSample sample_X1(Rng& rng, std::size_t* proposals = nullptr);

struct AffineHaarSample {
  HaarLatticeSample lattice;
  Vec2 u = Vec2::Zero();  // shift in coefficient space, uniform in [0, 1)^2
  Vec2 xi() const { return lattice.basis.to_point(u); }
  AffineLattice<2> affine() const { return {lattice.basis, Shift<2>::irrational(u)}; }
};

AffineHaarSample sample_X(Rng& rng);

/// SL(2, Z/qZ) as a product of its prime-power factors, each enumerated once.
class SL2Mod {
 public:
  explicit SL2Mod(std::int64_t q);
  std::int64_t modulus() const { return q_; }
  std::uint64_t order() const;
  /// Element with the given mixed-radix index in [0, order()).
  IMat2 element(std::uint64_t index) const;
  IMat2 sample(Rng& rng) const { return element(rng.below(order())); }

  static constexpr std::int64_t kMaxModulus = 50;

 private:
  struct Factor {
    std::int64_t modulus;
    std::vector<IMat2> elements;
  };
  std::int64_t q_;
  std::vector<Factor> factors_;
};

/// q^3 prod_{p | q} (1 - p^{-2}).
std::uint64_t sl2_order_formula(std::int64_t q);

struct XqSample {
  HaarLatticeSample lattice;
  IMat2 gamma = IMat2::Identity();
  Shift<2> alpha_gamma = Shift<2>::zero();  // alpha gamma, reduced
  AffineLattice<2> affine() const { return {lattice.basis, alpha_gamma}; }
};

/// Points (Z^2 + alpha gamma) M with M ~ mu_1 and gamma uniform in SL(2, Z/qZ).
XqSample sample_Xq(Rng& rng, const Shift<2>& alpha, const SL2Mod& group);

struct XySample {
  HaarLatticeSample lattice;
  Vec2 y = Vec2::Zero();
  /// Z^2 M + y; the coefficient m = 0 is the anchor y itself.
  AffineLattice<2> affine() const {
    return {lattice.basis, Shift<2>::irrational(lattice.basis.to_coefficients(y))};
  }
};

XySample sample_X_given_y(Rng& rng, const Vec2& y);

}  // namespace llg
