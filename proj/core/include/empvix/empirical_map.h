#ifndef EMPVIX_EMPIRICAL_MAP_H_
#define EMPVIX_EMPIRICAL_MAP_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "empvix/market_data.h"

namespace empvix {

// Empirical CDF of historical levels: F(c) = #{x_i <= c} / n.
class StepCdf {
 public:
  // Throws InputError on empty or non-finite input.
  explicit StepCdf(std::vector<double> levels);

  double operator()(double c) const;

  // Generalized inverse: smallest sample c with F(c) >= u; quantile(0) is the
  // sample minimum. Throws DomainError outside [0, 1].
  double quantile(double u) const;

  std::span<const double> sorted_levels() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

StepCdf ecdf(const MarketSeries& series);

// Points of the uniform u-grid used for fitting and for validating h.
inline constexpr int kFitGridPoints = 2001;

// Relative decrease of h allowed between adjacent grid points.
inline constexpr double kMonotoneTolerance = 1e-6;

// The fitted quantile function h : [0, 1] -> decimal VIX.
//
// h is stored as the Legendre series of h~(x) = h((x + 1) / 2) on [-1, 1],
// which is what the spectral pricer consumes and stays well conditioned at
// degree 30 and beyond. Immutable after construction.
class QuantileMap {
 public:
  // Validates positivity and monotonicity on the fit grid; throws FitError.
  explicit QuantileMap(std::vector<double> legendre_coeffs, std::string source_hash = "");

  // h(u) = sum_i coeffs[i] u^i. The basis change runs in 100-digit arithmetic;
  // degree-30 monomial coefficients on [0, 1] cancel across ~18 digits.
  static QuantileMap from_monomial(std::span<const double> coeffs, std::string source_hash = "");

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& legendre_coeffs() const { return coeffs_; }
  double h_min() const { return h_min_; }
  double h_max() const { return h_max_; }
  const std::string& source_hash() const { return source_hash_; }

  // h(u); throws DomainError outside [0, 1].
  double operator()(double u) const;
  // h~(x) = h((x + 1) / 2); throws DomainError outside [-1, 1].
  double tilde(double x) const;

  // Largest drop of h between adjacent fit-grid points (0 if monotone).
  double worst_decrease() const { return worst_decrease_; }

 private:
  std::vector<double> coeffs_;
  std::string source_hash_;
  double h_min_ = 0.0;
  double h_max_ = 0.0;
  double worst_decrease_ = 0.0;
};

double h_eval(const QuantileMap& map, double u);

// Factor value x in [-1, 1] with h((x + 1) / 2) = vix, by bisection on u.
// Throws DomainError if vix is outside [h_min, h_max].
double h_inverse(const QuantileMap& map, double vix);

// Unchecked least-squares fit of u -> quantile(u) on the fit grid.
struct QuantileFit {
  std::vector<double> legendre_coeffs;
  double max_deviation = 0.0;   // max grid |fit - step quantile|
  double worst_decrease = 0.0;  // max drop between adjacent grid points
  double worst_decrease_u = 0.0;
  double min_value = 0.0;       // min of the fit over the grid
  double h_min = 0.0;
  double h_max = 0.0;
};

// Householder QR on the shifted-Legendre design matrix. Throws FitError if
// the system is rank deficient or there are fewer than degree + 1 samples.
QuantileFit fit_quantile_least_squares(const StepCdf& cdf, int degree);

// As above, then enforces h > 0 and the monotonicity tolerance.
QuantileMap fit_quantile_polynomial(const StepCdf& cdf, int degree,
                                    std::string source_hash = "");

// 64-bit FNV-1a of the series' canonical CSV form, as 16 hex digits.
std::string source_hash(const MarketSeries& series);

// {degree, basis, coeffs[], h_min, h_max, source_hash}.
std::string to_json(const QuantileMap& map);
QuantileMap quantile_map_from_json(std::string_view text);
void save_quantile_map(const QuantileMap& map, const std::filesystem::path& path);
QuantileMap load_quantile_map(const std::filesystem::path& path);

}  // namespace empvix

#endif  // EMPVIX_EMPIRICAL_MAP_H_
