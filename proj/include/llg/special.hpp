// Number-theoretic constants: zeta values and the visible-point density kappa_q.
#pragma once

#include <cstdint>
#include <vector>

namespace llg {

/// Distinct prime divisors of n (n >= 1), increasing.
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// Moebius function.
int mobius(std::int64_t n);

/// Riemann zeta at a real s > 1 (alternating-series acceleration of eta).
double riemann_zeta(double s);

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s}, s > 1, a > 0 (Euler–Maclaurin).
double hurwitz_zeta(double s, double a);

/// kappa_q = sum_{(n,q)=1} mu(n) n^{-d} * sum_{1<=t<=q,(t,q)=1} t^{-d}
/// evaluated through the Euler product of the Moebius sum.
double kappa(std::int64_t q, int d);

/// kappa_q from the coprime-sum form (sum_{(n,q)=1} n^{-d})^{-1} sum_t t^{-d},
/// with the coprime sum assembled from Hurwitz zeta values.
double kappa_coprime_form(std::int64_t q, int d);

}  // namespace llg
