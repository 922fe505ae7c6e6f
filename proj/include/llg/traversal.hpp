// Cell marching along a ray in lattice-coefficient coordinates.
#pragma once

#include <algorithm>
#include <cmath>

#include "llg/lattice.hpp"

namespace llg {

/// Visits candidate lattice points m whose ball of real-space radius `radius`
/// may meet the segment start + t v, t in [t0, t1]. The segment is mapped to
/// coefficient space x(t) = a + t w with radius r' = radius * |M^{-1}|; the
/// dominant axis k of w indexes columns m_k = n, visited in order of increasing t.
/// For each column the other coordinates range over the integer points within
/// r' of x(I_n), I_n = {t : |x_k(t) - n| <= r'}.
///
/// visit(m, t_lower) returns false to stop; t_lower bounds from below the time
/// at which the segment comes within `radius` of any point of this column.
/// Returns the number of candidates visited.
template <int D, typename Visitor>
std::size_t traverse_cells(const AffineLattice<D>& lat, const Vec<D>& start, const Vec<D>& v, double t0, double t1,
                           double radius, Visitor&& visit) {
  if (!(t1 >= t0)) return 0;
  const Mat<D>& minv = lat.basis.inverse();
  const Vec<D> a = minv.transpose() * start - lat.shift.value();
  const Vec<D> w = minv.transpose() * v;
  const double r = radius * lat.basis.inverse_norm() * (1.0 + 1e-12) + 1e-12;
  int k = 0;
  w.cwiseAbs().maxCoeff(&k);
  const double wk = w(k);
  const double xk0 = a(k) + t0 * wk, xk1 = a(k) + t1 * wk;
  const double lo = std::min(xk0, xk1) - r, hi = std::max(xk0, xk1) + r;
  const auto n_first = static_cast<std::int64_t>(std::ceil(lo));
  const auto n_last = static_cast<std::int64_t>(std::floor(hi));
  const std::int64_t step = wk > 0 ? 1 : -1;
  const std::int64_t n_begin = wk > 0 ? n_first : n_last;
  const std::int64_t count = n_last - n_first + 1;
  const double half = r / std::abs(wk);
  std::size_t visited = 0;
  IVec<D> m;
  IVec<D> jmin, jmax;
  for (std::int64_t c = 0; c < count; ++c) {
    const std::int64_t n = n_begin + c * step;
    const double tn = (static_cast<double>(n) - a(k)) / wk;
    const double ta = std::max(t0, tn - half), tb = std::min(t1, tn + half);
    if (ta > tb) continue;
    for (int j = 0; j < D; ++j) {
      if (j == k) {
        jmin(j) = jmax(j) = n;
        continue;
      }
      const double xa = a(j) + ta * w(j), xb = a(j) + tb * w(j);
      jmin(j) = static_cast<std::int64_t>(std::ceil(std::min(xa, xb) - r));
      jmax(j) = static_cast<std::int64_t>(std::floor(std::max(xa, xb) + r));
    }
    bool empty = false;
    for (int j = 0; j < D; ++j) empty = empty || jmin(j) > jmax(j);
    if (empty) continue;
    m = jmin;
    while (true) {
      ++visited;
      if (!visit(static_cast<const IVec<D>&>(m), ta)) return visited;
      int j = 0;
      for (; j < D; ++j) {
        if (j == k) continue;
        if (m(j) < jmax(j)) {
          ++m(j);
          break;
        }
        m(j) = jmin(j);
      }
      if (j == D) break;
    }
  }
  return visited;
}

}  // namespace llg
