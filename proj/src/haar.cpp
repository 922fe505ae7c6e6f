#include "llg/haar.hpp"

#include <cmath>

#include "llg/special.hpp"

namespace llg {

UnimodularBasis<2> basis_from_shape(double x, double y, double theta) {
  const double s = 1.0 / std::sqrt(y);
  Mat<2> B;
  B << s, 0.0, x * s, y * s;
  Mat<2> R;
  R << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return UnimodularBasis<2>(B * R);
}

HaarLatticeSample sample_X1(Rng& rng, std::size_t* proposals) {
  HaarLatticeSample s;
  while (true) {
    if (proposals) ++*proposals;
    const double x = rng.uniform() - 0.5;
    const double y = kFundamentalY0 / (1.0 - rng.uniform());
    if (x * x + y * y >= 1.0) {
      s.x = x;
      s.y = y;
      break;
    }
  }
  s.theta = 2.0 * M_PI * rng.uniform();
  s.basis = basis_from_shape(s.x, s.y, s.theta);
  return s;
}

AffineHaarSample sample_X(Rng& rng) {
  AffineHaarSample s;
  s.lattice = sample_X1(rng);
  s.u = Vec2(rng.uniform(), rng.uniform());
  return s;
}

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace

SL2Mod::SL2Mod(std::int64_t q) : q_(q) {
  if (q < 1) throw PreconditionError("SL(2, Z/qZ) needs q >= 1");
  if (q > kMaxModulus) throw PreconditionError("SL(2, Z/qZ) enumeration is limited to q <= 50");
  std::int64_t rest = q;
  for (const std::int64_t p : prime_divisors(q)) {
    std::int64_t pk = 1;
    while (rest % p == 0) {
      rest /= p;
      pk *= p;
    }
    Factor f{pk, {}};
    for (std::int64_t a = 0; a < pk; ++a)
      for (std::int64_t b = 0; b < pk; ++b)
        for (std::int64_t c = 0; c < pk; ++c)
          for (std::int64_t d = 0; d < pk; ++d)
            if (mod(a * d - b * c, pk) == 1 % pk) {
              IMat2 g;
              g << a, b, c, d;
              f.elements.push_back(g);
            }
    factors_.push_back(std::move(f));
  }
}

std::uint64_t SL2Mod::order() const {
  std::uint64_t n = 1;
  for (const auto& f : factors_) n *= f.elements.size();
  return n;
}

IMat2 SL2Mod::element(std::uint64_t index) const {
  if (index >= order()) throw PreconditionError("SL2Mod::element: index out of range");
  // Chinese remainder: the entry x mod q with x = e_i mod (p_i^k_i) for each factor.
  if (factors_.empty()) return IMat2::Identity();
  IMat2 out = IMat2::Zero();
  std::int64_t modulus = 1;
  for (const auto& f : factors_) {
    const IMat2& e = f.elements[index % f.elements.size()];
    index /= f.elements.size();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::int64_t x = out(i, j);
        while (mod(x, f.modulus) != e(i, j)) x += modulus;
        out(i, j) = x;
      }
    modulus *= f.modulus;
  }
  return out;
}

std::uint64_t sl2_order_formula(std::int64_t q) {
  double n = static_cast<double>(q) * q * q;
  for (const std::int64_t p : prime_divisors(q)) n *= 1.0 - 1.0 / static_cast<double>(p * p);
  return static_cast<std::uint64_t>(std::llround(n));
}

XqSample sample_Xq(Rng& rng, const Shift<2>& alpha, const SL2Mod& group) {
  if (!alpha.is_rational() || alpha.denominator() != group.modulus())
    throw PreconditionError("sample_Xq: alpha must be rational with denominator equal to the group modulus");
  XqSample s;
  s.lattice = sample_X1(rng);
  s.gamma = group.sample(rng);
  // Row vector alpha gamma, column form gamma^T p / q.
  const IVec<2> p = s.gamma.transpose() * alpha.numerator();
  s.alpha_gamma = Shift<2>::rational(p, alpha.denominator());
  return s;
}

XySample sample_X_given_y(Rng& rng, const Vec2& y) {
  XySample s;
  s.lattice = sample_X1(rng);
  s.y = y;
  return s;
}

}  // namespace llg
