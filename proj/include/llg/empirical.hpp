// Empirical distributions and Kolmogorov–Smirnov distances.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace llg {

class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  /// Right-continuous F(x) = #{s <= x} / n.
  double cdf(double x) const;
  /// #{s >= x} / n.
  double survival(double x) const;
  /// sqrt(p (1 - p) / n) at p = cdf(x).
  double cdf_stderr(double x) const;
  double mean() const;

 private:
  std::vector<double> sorted_;
};

/// Two-sample sup_x |F_a(x) - F_b(x)|.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// One-sample sup_x |F_a(x) - G(x)| against a continuous CDF G.
double ks_distance(const EmpiricalDistribution& a, const std::function<double(double)>& cdf);

/// sup |a_i - b_i| over two equally sized curves.
double sup_difference(const std::vector<double>& a, const std::vector<double>& b);

/// Sample mean and standard error of the mean.
struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanEstimate mean_and_stderr(const std::vector<double>& values);

}  // namespace llg
