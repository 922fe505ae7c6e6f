// Ray-sphere intersection, reflection and the rotation K(v).
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>

namespace llg {

inline constexpr double kTangencyTolerance = 1e-14;

template <typename Scalar, int D>
struct BallEntry {
  Scalar t;                              // entry time along the ray
  Eigen::Matrix<Scalar, D, 1> w;         // unit vector from center to entry point
};

/// First entry of the ray s + t v (t > 0, |v| = 1) into the open ball B_rho(y).
/// The quadratic is solved in the ball's frame: b = (y - s).v, the squared miss
/// distance is |perp|^2, and the entry point is y - sqrt(rho^2 - |perp|^2) v + ... .
/// Near-tangent rays (discriminant <= kTangencyTolerance) do not enter.
template <typename DerivedS, typename DerivedV, typename DerivedY>
auto ray_ball_entry(const Eigen::MatrixBase<DerivedS>& s, const Eigen::MatrixBase<DerivedV>& v,
                    const Eigen::MatrixBase<DerivedY>& y, typename DerivedS::Scalar rho)
    -> std::optional<BallEntry<typename DerivedS::Scalar, DerivedS::RowsAtCompileTime>> {
  using Scalar = typename DerivedS::Scalar;
  constexpr int D = DerivedS::RowsAtCompileTime;
  const Eigen::Matrix<Scalar, D, 1> delta = y - s;
  const Scalar b = delta.dot(v);
  if (b <= 0) return std::nullopt;
  const Eigen::Matrix<Scalar, D, 1> perp = delta - b * v;
  const Scalar disc = rho * rho - perp.squaredNorm();
  if (disc <= kTangencyTolerance * rho * rho) return std::nullopt;
  const Scalar root = std::sqrt(disc);
  const Scalar t = b - root;
  if (t <= 0) return std::nullopt;
  // entry point minus center = (s + t v) - y = -perp - root v
  Eigen::Matrix<Scalar, D, 1> w = -perp - root * v;
  w /= rho;
  w.normalize();
  return BallEntry<Scalar, D>{t, w};
}

/// Elastic reflection v1 = v0 - 2 (v0.w1) w1.
template <typename DerivedV, typename DerivedW>
auto reflect(const Eigen::MatrixBase<DerivedV>& v0, const Eigen::MatrixBase<DerivedW>& w1) {
  using Scalar = typename DerivedV::Scalar;
  constexpr int D = DerivedV::RowsAtCompileTime;
  return Eigen::Matrix<Scalar, D, 1>(v0 - 2 * v0.dot(w1) * w1);
}

template <typename Scalar, int D>
struct RotationResult {
  Eigen::Matrix<Scalar, D, D> K;
  bool singular = false;  // v = -e1
};

/// The rotation K(v) in SO(d) with v K(v) = e1 (row-vector convention), built as
/// E(-(theta / |v_perp|) v_perp) with theta = 2 asin(|v - e1| / 2) and
/// E(w) = exp([[0, w], [-w^T, 0]]). K(e1) = I. At v = -e1 the construction
/// degenerates: -I is returned in even dimension and diag(-1, -1, 1, ...) in
/// odd dimension, where -I is not a rotation.
template <typename Derived>
auto K_of_v_checked(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  constexpr int D = Derived::RowsAtCompileTime;
  using MatD = Eigen::Matrix<Scalar, D, D>;
  RotationResult<Scalar, D> out{MatD::Identity(), false};
  const Eigen::Matrix<Scalar, D - 1, 1> vp = v.template tail<D - 1>();
  const Scalar vp_norm = vp.norm();
  if (vp_norm == 0) {
    if (v(0) < 0) {
      out.singular = true;
      out.K = -MatD::Identity();
      if (D % 2 == 1) out.K(D - 1, D - 1) = 1;
    }
    return out;
  }
  Eigen::Matrix<Scalar, D, 1> diff = v;
  diff(0) -= 1;
  const Scalar theta = 2 * std::asin(std::min<Scalar>(1, diff.norm() / 2));
  const Eigen::Matrix<Scalar, D - 1, 1> w = -(theta / vp_norm) * vp;
  MatD A = MatD::Zero();
  A.template block<1, D - 1>(0, 1) = w.transpose();
  A.template block<D - 1, 1>(1, 0) = -w;
  // A^3 = -theta^2 A, so exp(A) = I + (sin theta / theta) A + ((1 - cos theta) / theta^2) A^2.
  const Scalar s = std::sin(theta) / theta;
  const Scalar half = std::sin(theta / 2) / theta;
  const Scalar c = 2 * half * half;
  out.K = MatD::Identity() + s * A + c * (A * A);
  return out;
}

template <typename Derived>
auto K_of_v(const Eigen::MatrixBase<Derived>& v) {
  return K_of_v_checked(v).K;
}

}  // namespace llg
