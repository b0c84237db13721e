#include "empvix/statistics.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "empvix/error.h"

namespace empvix {

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_uniform(std::span<const double> samples, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("ks_uniform: need lo < hi");
  return ks_statistic(samples, [lo, hi](double c) { return std::clamp((c - lo) / (hi - lo), 0.0, 1.0); });
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("ks_critical_value: need n > 0 and alpha in (0, 1)");
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double rn = std::sqrt(static_cast<double>(n));
  return c / (rn + 0.12 + 0.11 / rn);
}

}  // namespace empvix
