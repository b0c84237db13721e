#include "empvix/legendre.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "empvix/error.h"

namespace empvix {

namespace {

constexpr double kNewtonTolerance = 1e-14;

// P_m(x) and P_m'(x) for |x| < 1.
std::pair<double, double> legendre_with_derivative(int m, double x) {
  double p_prev = 1.0;
  double p = x;
  if (m == 0) return {1.0, 0.0};
  for (int k = 1; k < m; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  const double dp = m * (x * p - p_prev) / (x * x - 1.0);
  return {p, dp};
}

// Column j holds the Legendre coefficients of x^j.
const std::vector<std::vector<double>>& conversion_matrix(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(size);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<double>> columns;
  columns.reserve(size);
  std::vector<double> unit(size, 0.0);
  for (std::size_t j = 0; j < size; ++j) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[j] = 1.0;
    columns.push_back(monomial_to_legendre_coeffs(unit));
  }
  return cache.emplace(size, std::move(columns)).first->second;
}

}  // namespace

double legendre_eval(int n, double x) {
  if (n < 0) throw DomainError("legendre_eval: negative order " + std::to_string(n));
  if (!(std::fabs(x) <= 1.0)) {
    throw DomainError("legendre_eval: x = " + std::to_string(x) + " outside [-1, 1]");
  }
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  return p;
}

void legendre_values(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = ((2.0 * kd + 1.0) * x * out[k] - kd * out[k - 1]) / (kd + 1.0);
  }
}

double legendre_series_eval(std::span<const double> coeffs, double x) {
  // Clenshaw with alpha_k = (2k+1)x/(k+1), beta_{k+1} = -(k+1)/(k+2).
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const double k = static_cast<double>(i);
    const double b0 = coeffs[i] + (2.0 * k + 1.0) / (k + 1.0) * x * b1 -
                      (k + 1.0) / (k + 2.0) * b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

LegendreSeries::LegendreSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("LegendreSeries: needs at least one coefficient");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw NumericalError("LegendreSeries: non-finite coefficient");
  }
}

QuadratureRule gauss_rule(int m) {
  if (m < 1) throw DomainError("gauss_rule: order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's initial guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, d] = legendre_with_derivative(m, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::fabs(dx) < kNewtonTolerance) break;
    }
    if (m % 2 == 1 && i == half - 1) x = 0.0;
    const auto [p, d] = legendre_with_derivative(m, x);
    (void)p;
    dp = d;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = gauss_rule(kDefaultQuadratureOrder);
  return rule;
}

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule, double a,
                 double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (int j = 0; j < rule.order(); ++j) {
    sum += rule.weights[j] * f(mid + half * rule.nodes[j]);
  }
  return half * sum;
}

double integrate_piecewise(const std::function<double(double)>& f, const QuadratureRule& rule,
                           std::span<const double> kinks) {
  double sum = 0.0;
  double left = -1.0;
  for (double k : kinks) {
    if (k <= left || k >= 1.0) continue;
    sum += integrate(f, rule, left, k);
    left = k;
  }
  return sum + integrate(f, rule, left, 1.0);
}

double inner_product(const std::function<double(double)>& f, int n, const QuadratureRule& rule,
                     std::span<const double> kinks) {
  return integrate_piecewise([&](double x) { return f(x) * legendre_eval(n, x); }, rule, kinks);
}

LegendreSeries monomial_to_legendre(std::span<const double> coeffs) {
  if (coeffs.empty()) throw DomainError("monomial_to_legendre: empty coefficient list");
  const auto& matrix = conversion_matrix(coeffs.size());
  std::vector<double> out(coeffs.size(), 0.0);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    for (std::size_t n = 0; n <= j; ++n) out[n] += coeffs[j] * matrix[j][n];
  }
  return LegendreSeries(std::move(out));
}

}  // namespace empvix
