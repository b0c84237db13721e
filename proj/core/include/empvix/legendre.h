#ifndef EMPVIX_LEGENDRE_H_
#define EMPVIX_LEGENDRE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace empvix {

// Gauss-Legendre nodes and weights on [-1, 1]. Exact for polynomials of
// degree <= 2 * order() - 1.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }
};

// Order used for inner products unless stated otherwise; exact to degree 127.
inline constexpr int kDefaultQuadratureOrder = 64;

// P_n(x) by the three-term recurrence. Throws DomainError if |x| > 1 or n < 0.
double legendre_eval(int n, double x);

// P_0(x) .. P_{n_max}(x) written into `out` (size n_max + 1). No domain check.
void legendre_values(double x, std::span<double> out);

// Sum_n coeffs[n] * P_n(x), Clenshaw's algorithm.
double legendre_series_eval(std::span<const double> coeffs, double x);

// Coefficients a_n of a function in the P_n basis.
class LegendreSeries {
 public:
  LegendreSeries() = default;
  explicit LegendreSeries(std::vector<double> coeffs);

  double operator()(double x) const { return legendre_series_eval(coeffs_, x); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int max_order() const { return static_cast<int>(coeffs_.size()) - 1; }

 private:
  std::vector<double> coeffs_;
};

// Newton iteration on P_m, converged to 1e-14. Throws DomainError if m < 1.
QuadratureRule gauss_rule(int m);

// Shared immutable rule of kDefaultQuadratureOrder nodes.
const QuadratureRule& default_rule();

// Integral of f over [a, b] with the rule mapped affinely.
double integrate(const std::function<double(double)>& f, const QuadratureRule& rule,
                 double a, double b);

// Integral of f over [-1, 1], split at the sorted breakpoints in `kinks` so
// each smooth piece gets its own mapped rule.
double integrate_piecewise(const std::function<double(double)>& f, const QuadratureRule& rule,
                           std::span<const double> kinks = {});

// <f, P_n> = integral of f * P_n over [-1, 1].
double inner_product(const std::function<double(double)>& f, int n, const QuadratureRule& rule,
                     std::span<const double> kinks = {});

// Exact change of basis sum_j c_j x^j -> sum_n a_n P_n(x). Uses a cached
// upper-triangular conversion matrix per degree.
LegendreSeries monomial_to_legendre(std::span<const double> coeffs);

// Same basis change in any field type (used with extended precision).
template <typename Real>
std::vector<Real> monomial_to_legendre_coeffs(const std::vector<Real>& monomial) {
  const std::size_t size = monomial.size();
  std::vector<Real> result(size, Real(0));
  // power holds the Legendre coefficients of x^j.
  std::vector<Real> power(size + 1, Real(0));
  std::vector<Real> next(size + 1, Real(0));
  power[0] = Real(1);
  for (std::size_t j = 0; j < size; ++j) {
    for (std::size_t n = 0; n <= j; ++n) result[n] += monomial[j] * power[n];
    if (j + 1 == size) break;
    std::fill(next.begin(), next.end(), Real(0));
    // x P_n = ((n + 1) P_{n+1} + n P_{n-1}) / (2n + 1)
    for (std::size_t n = 0; n <= j; ++n) {
      if (power[n] == Real(0)) continue;
      const Real denom = Real(2 * n + 1);
      next[n + 1] += power[n] * Real(n + 1) / denom;
      if (n > 0) next[n - 1] += power[n] * Real(n) / denom;
    }
    power.swap(next);
  }
  return result;
}

}  // namespace empvix

#endif  // EMPVIX_LEGENDRE_H_
