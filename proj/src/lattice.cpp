#include "llg/lattice.hpp"

#include <limits>

namespace llg {

namespace {

template <int D>
bool visible_impl(const IVec<D>& m, const Shift<D>& alpha) {
  const std::int64_t q = alpha.denominator();
  const IVec<D> qx = m * q + alpha.numerator();
  std::int64_t g = 0;
  for (int i = 0; i < D; ++i) g = std::gcd(g, qx(i) < 0 ? -qx(i) : qx(i));
  if (g == 0) throw PreconditionError("is_visible: the origin has no direction");
  return g <= q;
}

template <int D>
double min_distance_impl(const UnimodularBasis<D>& basis) {
  double radius = std::numeric_limits<double>::infinity();
  for (int i = 0; i < D; ++i) radius = std::min(radius, basis.row(i).norm());
  AffineLattice<D> lat{basis, Shift<D>::zero()};
  double best = radius;
  const Vec<D> r = Vec<D>::Constant(radius);
  scan_box(lat, Vec<D>(-r), r, [&](const Vec<D>& y, const IVec<D>& m) {
    if (m.isZero()) return;
    best = std::min(best, y.norm());
  });
  return best;
}

}  // namespace

bool is_visible(const IVec<2>& m, const Shift<2>& alpha) { return visible_impl<2>(m, alpha); }
bool is_visible(const IVec<3>& m, const Shift<3>& alpha) { return visible_impl<3>(m, alpha); }

UnimodularBasis<2> reduce_basis_2d(const UnimodularBasis<2>& basis) {
  Vec2 b1 = basis.row(0), b2 = basis.row(1);
  if (b1.squaredNorm() > b2.squaredNorm()) std::swap(b1, b2);
  for (int iter = 0; iter < 10000; ++iter) {
    const double mu = std::round(b1.dot(b2) / b1.squaredNorm());
    b2 -= mu * b1;
    if (b2.squaredNorm() >= b1.squaredNorm()) break;
    std::swap(b1, b2);
  }
  if (b1.x() * b2.y() - b1.y() * b2.x() < 0.0) b2 = -b2;
  Mat<2> rows;
  rows.row(0) = b1.transpose();
  rows.row(1) = b2.transpose();
  return UnimodularBasis<2>(rows);
}

AffineLattice<2> reduce(const AffineLattice<2>& lat) {
  const UnimodularBasis<2> reduced = reduce_basis_2d(lat.basis);
  // reduced = U * original with U integral and det U = 1.
  const Mat<2> u_real = reduced.rows() * lat.basis.inverse();
  Eigen::Matrix<std::int64_t, 2, 2> u;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) u(i, j) = static_cast<std::int64_t>(std::llround(u_real(i, j)));
  Eigen::Matrix<std::int64_t, 2, 2> u_inv;
  u_inv << u(1, 1), -u(0, 1), -u(1, 0), u(0, 0);
  // (m + alpha) M = (m U^{-1} + alpha U^{-1}) U M.
  const Eigen::Matrix<std::int64_t, 2, 2> t = u_inv.transpose();
  if (lat.shift.is_rational()) {
    const IVec<2> p = t * lat.shift.numerator();
    return {reduced, Shift<2>::rational(p, lat.shift.denominator())};
  }
  const Vec2 a = t.cast<double>() * lat.shift.value();
  return {reduced, Shift<2>::irrational(a)};
}

double minimum_distance(const UnimodularBasis<2>& basis) {
  return reduce_basis_2d(basis).row(0).norm();
}

double minimum_distance(const UnimodularBasis<3>& basis) { return min_distance_impl<3>(basis); }

}  // namespace llg
