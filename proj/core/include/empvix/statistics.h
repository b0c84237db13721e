#ifndef EMPVIX_STATISTICS_H_
#define EMPVIX_STATISTICS_H_

#include <cstddef>
#include <functional>
#include <span>

namespace empvix {

// One-sample Kolmogorov-Smirnov distance sup_c |F_n(c) - cdf(c)|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

// KS distance against the uniform law on [lo, hi].
double ks_uniform(std::span<const double> samples, double lo, double hi);

// Critical value of the KS distance at significance `alpha` for n samples
// (asymptotic Kolmogorov quantile with Stephens' finite-n correction).
double ks_critical_value(std::size_t n, double alpha);

}  // namespace empvix

#endif  // EMPVIX_STATISTICS_H_
