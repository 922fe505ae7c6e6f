#include "llg/special.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace llg {

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("prime_divisors: n must be positive");
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

int mobius(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("mobius: n must be positive");
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      sign = -sign;
    }
  }
  if (n > 1) sign = -sign;
  return sign;
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw std::invalid_argument("riemann_zeta: need s > 1");
  // Borwein's algorithm 2; error about 3 / (3 + sqrt 8)^n relative to eta.
  constexpr int n = 40;
  std::vector<double> d(n + 1);
  double term = 1.0 / n;  // (n+i-1)! 4^i / ((n-i)! (2i)!) at i = 0, times n
  double acc = term;
  d[0] = n * acc;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
    acc += term;
    d[i] = n * acc;
  }
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * (d[k] - d[n]) / std::pow(k + 1.0, s);
  }
  const double eta = -sum / d[n];
  return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

double hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0)) throw std::invalid_argument("hurwitz_zeta: need s > 1, a > 0");
  constexpr int N = 20;
  // B_{2j} / (2j)!
  static constexpr double kB[] = {1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,
                                  -1.0 / 1209600.0,    1.0 / 47900160.0,      -691.0 / 1307674368000.0,
                                  1.0 / 74724249600.0, -3617.0 / 10670622842880000.0};
  double sum = 0.0;
  for (int k = N - 1; k >= 0; --k) sum += std::pow(k + a, -s);
  const double x = N + a;
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double power = std::pow(x, -s - 1.0);
  for (int j = 0; j < 8; ++j) {
    sum += kB[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= x * x;
  }
  return sum;
}

namespace {

void check_args(std::int64_t q, int d) {
  if (q < 1 || d < 2) throw std::invalid_argument("kappa: need q >= 1, d >= 2");
}

double coprime_head(std::int64_t q, int d) {
  double s = 0.0;
  for (std::int64_t t = q; t >= 1; --t)
    if (std::gcd(t, q) == 1) s += std::pow(static_cast<double>(t), -d);
  return s;
}

}  // namespace

double kappa(std::int64_t q, int d) {
  check_args(q, d);
  double mobius_sum = 1.0 / riemann_zeta(d);
  for (const std::int64_t p : prime_divisors(q)) mobius_sum /= 1.0 - std::pow(static_cast<double>(p), -d);
  return mobius_sum * coprime_head(q, d);
}

double kappa_coprime_form(std::int64_t q, int d) {
  check_args(q, d);
  // sum over n = t + k q, (t, q) = 1, 1 <= t <= q.
  double full = 0.0;
  const double qd = static_cast<double>(q);
  for (std::int64_t t = q; t >= 1; --t)
    if (std::gcd(t, q) == 1) full += hurwitz_zeta(d, static_cast<double>(t) / qd);
  full *= std::pow(qd, -d);
  return coprime_head(q, d) / full;
}

}  // namespace llg
