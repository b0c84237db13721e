#include "empvix/three_halves.h"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "empvix/error.h"
#include "empvix/legendre.h"

namespace empvix {

namespace {

constexpr double kSeriesTolerance = 1e-16;
constexpr double kAsymptoticThreshold = 30.0;
constexpr int kMaxSeriesTerms = 5000;

// exp(-z) I_nu(z) by the power series, each term carried with the scaling.
double scaled_series(double nu, double z) {
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double half = 0.5 * z;
  const double quarter_sq = half * half;
  double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0) - z);
  double sum = term;
  for (int m = 0; m < kMaxSeriesTerms; ++m) {
    term *= quarter_sq / ((m + 1.0) * (m + 1.0 + nu));
    sum += term;
    // Terms grow until m ~ z/2; stop only once they are shrinking.
    if (m + 1.0 > half && term <= kSeriesTolerance * sum) break;
  }
  return sum;
}

// sqrt(2 pi z) exp(-z) I_nu(z) by the large-argument expansion; false when
// the expansion stalls before reaching full precision.
bool scaled_asymptotic(double nu, double z, double* out) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev_abs = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    const double abs_term = std::fabs(term);
    if (abs_term > prev_abs && k > 1) return false;
    sum += term;
    if (abs_term <= kSeriesTolerance * std::fabs(sum)) {
      *out = sum / std::sqrt(2.0 * std::numbers::pi * z);
      return true;
    }
    prev_abs = abs_term;
  }
  return false;
}

const QuadratureRule& rule_of_order(int order) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_rule(order)).first;
  return it->second;
}

}  // namespace

void ThreeHalvesParams::validate() const {
  if (!(beta < 0.0)) throw DomainError("3/2 model: beta must be < 0");
  if (!(k32 > 0.0)) throw DomainError("3/2 model: k32 must be > 0");
  if (!(K > 0.0)) throw DomainError("3/2 model: strike must be > 0");
  if (!(t >= 0.0 && t < T)) throw DomainError("3/2 model: need 0 <= t < T");
  if (!std::isfinite(alpha) || !std::isfinite(r)) {
    throw DomainError("3/2 model: alpha and r must be finite");
  }
}

double bessel_i_scaled(double nu, double z) {
  if (!(nu >= 0.0) || !(z >= 0.0)) throw DomainError("bessel_i: need nu >= 0 and z >= 0");
  if (z > kAsymptoticThreshold) {
    double value = 0.0;
    if (scaled_asymptotic(nu, z, &value)) return value;
  }
  return scaled_series(nu, z);
}

double log_bessel_i(double nu, double z) {
  if (!(z > 0.0)) throw DomainError("log_bessel_i: need z > 0");
  return std::log(bessel_i_scaled(nu, z)) + z;
}

double bessel_i(double nu, double z, bool* overflow) {
  if (overflow) *overflow = false;
  if (!(nu >= 0.0) || !(z >= 0.0)) throw DomainError("bessel_i: need nu >= 0 and z >= 0");
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  const double log_value = log_bessel_i(nu, z);
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    if (overflow) *overflow = true;
    return std::numeric_limits<double>::infinity();
  }
  if (z <= kAsymptoticThreshold) {
    // Unscaled series directly; avoids the exp/log round trip at small z.
    return scaled_series(nu, z) * std::exp(z);
  }
  return std::exp(log_value);
}

double price_call_32(double V, const ThreeHalvesParams& params, int quad_points,
                     Evaluation evaluation) {
  params.validate();
  if (!(V > 0.0)) throw DomainError("3/2 model: V must be > 0");
  if (quad_points < 64) throw DomainError("3/2 model: quad_points must be >= 64");

  const double tau = params.T - params.t;
  const double k2 = params.k32 * params.k32;
  const double nu = 1.0 - 2.0 * params.beta / k2;
  const double half_nu = 0.5 * nu;  // 1/2 - beta / k^2
  const double p = -std::expm1(-params.alpha * tau);
  // c = 2 alpha / (k^2 p), with the alpha -> 0 limit 2 / (k^2 tau).
  const double c = params.alpha == 0.0 ? 2.0 / (k2 * tau) : 2.0 * params.alpha / (k2 * p);
  const double decay = std::exp(-params.alpha * tau);
  const double discount = std::exp(-params.r * tau);

  const double upper = 1.0 / params.K;
  const double s_lo = std::log(1e-12 * upper);
  const double s_hi = std::log(upper);
  const QuadratureRule& rule = rule_of_order(quad_points);
  const double half = 0.5 * (s_hi - s_lo);
  const double mid = 0.5 * (s_hi + s_lo);

  double integral = 0.0;
  if (evaluation == Evaluation::kLogScaled) {
    // Transition density of Y = 1/V at u, in log form.
    const double log_front = std::log(c) - c * decay / V + half_nu * (std::log(V) + params.alpha * tau);
    for (int j = 0; j < rule.order(); ++j) {
      const double s = mid + half * rule.nodes[j];
      const double u = std::exp(s);
      const double z = 2.0 * c * std::sqrt(u * decay / V);
      const double log_density =
          log_front - c * u + half_nu * s + std::log(bessel_i_scaled(nu, z)) + z;
      integral += rule.weights[j] * u * (1.0 / u - params.K) * std::exp(log_density);
    }
    integral *= half;
    return discount * integral;
  }

  const double prefactor = 2.0 * params.alpha * discount / (k2 * p) *
                           std::exp(-2.0 * params.alpha * decay / (k2 * V * p)) *
                           std::pow(V, half_nu) * std::exp(params.alpha * tau * half_nu);
  for (int j = 0; j < rule.order(); ++j) {
    const double s = mid + half * rule.nodes[j];
    const double u = std::exp(s);
    const double z = 4.0 * params.alpha * std::sqrt(u) * std::exp(-0.5 * params.alpha * tau) /
                     (k2 * std::sqrt(V) * p);
    integral += rule.weights[j] * u * std::pow(u, half_nu) * (1.0 / u - params.K) *
                std::exp(-2.0 * params.alpha * u / (k2 * p)) * bessel_i(nu, z);
  }
  integral *= half;
  const double price = prefactor * integral;
  if (!std::isfinite(price) || !std::isfinite(prefactor) || !std::isfinite(integral)) {
    throw NumericalError(
        "3/2 call price left double range in direct evaluation; use log-scaled evaluation");
  }
  return price;
}

}  // namespace empvix
