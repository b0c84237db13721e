#ifndef EMPVIX_SPECTRAL_PRICER_H_
#define EMPVIX_SPECTRAL_PRICER_H_

#include <optional>
#include <span>
#include <vector>

#include "empvix/empirical_map.h"

namespace empvix {

// Futures, calls and puts on VIX_T = h~(X_T) priced by the Legendre
// eigen-expansion of the factor semigroup:
//
//   E[payoff(X_T) | X_t = x] = sum_n b_n exp(-k n (n + 1) (T - t) / 2) P_n(x),
//   b_n = (2n + 1) / 2 <payoff, P_n>.

// Orders 0..30; futures are exact for a degree-30 map.
inline constexpr int kDefaultTerms = 31;

// Call/put series values in (-kNegativeClip, 0) are reported as 0.
inline constexpr double kNegativeClip = 1e-8;

enum class Payoff { kFutures, kCall, kPut };

const char* to_string(Payoff payoff);

struct PricingParams {
  double k = 1.0;  // factor mean-reversion speed, 1/years
  double r = 0.0;  // risk-free rate, 1/years
  double T = 1.0;  // maturity, years
  double K = 0.0;  // strike, decimal VIX (options only)

  // Throws DomainError unless k > 0, T > 0 and (for options) K > 0.
  void validate(Payoff payoff) const;
};

struct SpectralCoeffs {
  Payoff payoff = Payoff::kFutures;
  double strike = 0.0;
  std::vector<double> b;  // b_0 .. b_{N-1}

  int terms() const { return static_cast<int>(b.size()); }
};

// x* in (-1, 1) with h~(x*) = K, or nothing when K is outside (h_min, h_max).
std::optional<double> payoff_kink(const QuantileMap& map, double K);

// Exact: the map already stores the Legendre coefficients of h~.
SpectralCoeffs project_futures(const QuantileMap& map, int n_terms = kDefaultTerms);

// (h~ - K)^+ and (K - h~)^+, by Gauss-Legendre quadrature split at the kink.
// Each piece is a polynomial, so the projection is exact when the rule
// order covers degree + n_terms.
SpectralCoeffs project_call(const QuantileMap& map, double K, int n_terms = kDefaultTerms);
SpectralCoeffs project_put(const QuantileMap& map, double K, int n_terms = kDefaultTerms);

// Undiscounted conditional expectation after `tau` years from state x.
double expected_payoff(double tau, double x, const SpectralCoeffs& coeffs, double k);

// Price at time t in [0, T] from state x. Throws DomainError for t > T,
// t < 0 or |x| > 1, and std::invalid_argument for coefficients of the wrong
// payoff. Option prices below -kNegativeClip raise NumericalError.
double price_futures(double t, double x, const SpectralCoeffs& coeffs, const PricingParams& params);
double price_call(double t, double x, const SpectralCoeffs& coeffs, const PricingParams& params);
double price_put(double t, double x, const SpectralCoeffs& coeffs, const PricingParams& params);

// Prices by VIX level (rows) and number of series terms (columns).
struct TruncationReport {
  std::vector<double> vix_levels;
  std::vector<double> factor_values;
  std::vector<int> term_counts;
  std::vector<std::vector<double>> futures;
  std::vector<std::vector<double>> calls;
};

// Each VIX level is mapped to x through h_inverse (out-of-range is an error).
// Call entries are the discounted truncated sums without the clipping rule.
TruncationReport truncation_report(const QuantileMap& map, std::span<const double> vix_levels,
                                   std::span<const int> term_counts, double t,
                                   const PricingParams& params);

}  // namespace empvix

#endif  // EMPVIX_SPECTRAL_PRICER_H_
