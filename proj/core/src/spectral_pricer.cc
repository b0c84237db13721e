#include "empvix/spectral_pricer.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "empvix/error.h"
#include "empvix/legendre.h"

namespace empvix {

namespace {

void check_terms(int n_terms) {
  if (n_terms < 1) throw DomainError("spectral pricer: need at least one series term");
}

// Gauss order exact for payoff pieces of degree `degree` times P_{n_terms-1}.
const QuadratureRule& rule_for(int degree, int n_terms) {
  const int needed = (degree + n_terms) / 2 + 1;
  if (needed <= kDefaultQuadratureOrder) return default_rule();
  thread_local QuadratureRule rule;
  if (rule.order() != needed) rule = gauss_rule(needed);
  return rule;
}

// b_n = (2n + 1) / 2 * integral of payoff * P_n, the payoff being a
// polynomial on each side of the kink.
template <typename PayoffFn>
std::vector<double> project(const QuadratureRule& rule, int n_terms, std::optional<double> kink,
                            PayoffFn payoff) {
  std::vector<double> b(static_cast<std::size_t>(n_terms), 0.0);
  std::vector<double> p(static_cast<std::size_t>(n_terms));
  auto add_piece = [&](double a, double c) {
    const double half = 0.5 * (c - a);
    const double mid = 0.5 * (c + a);
    for (int j = 0; j < rule.order(); ++j) {
      const double x = mid + half * rule.nodes[j];
      const double w = half * rule.weights[j] * payoff(x);
      if (w == 0.0) continue;
      legendre_values(x, p);
      for (int n = 0; n < n_terms; ++n) b[n] += w * p[n];
    }
  };
  if (kink) {
    add_piece(-1.0, *kink);
    add_piece(*kink, 1.0);
  } else {
    add_piece(-1.0, 1.0);
  }
  for (int n = 0; n < n_terms; ++n) b[n] *= 0.5 * (2.0 * n + 1.0);
  return b;
}

void check_state(double t, double x, const PricingParams& params) {
  if (!(t >= 0.0)) throw DomainError("pricing time t must be >= 0");
  if (t > params.T) {
    std::ostringstream msg;
    msg << "pricing time t = " << t << " is after maturity T = " << params.T;
    throw DomainError(msg.str());
  }
  if (!(std::fabs(x) <= 1.0)) throw DomainError("factor state x must lie in [-1, 1]");
}

void check_payoff(const SpectralCoeffs& coeffs, Payoff expected) {
  if (coeffs.payoff != expected) {
    throw std::invalid_argument(std::string("coefficients are for ") + to_string(coeffs.payoff) +
                                ", not " + to_string(expected));
  }
}

double clip_option(double value) {
  if (value >= 0.0) return value;
  if (value > -kNegativeClip) return 0.0;
  std::ostringstream msg;
  msg << "option series is negative (" << value
      << "); increase the number of terms or check the model";
  throw NumericalError(msg.str());
}

}  // namespace

const char* to_string(Payoff payoff) {
  switch (payoff) {
    case Payoff::kFutures:
      return "futures";
    case Payoff::kCall:
      return "call";
    case Payoff::kPut:
      return "put";
  }
  return "unknown";
}

void PricingParams::validate(Payoff payoff) const {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("pricing: k must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("pricing: T must be > 0");
  if (!std::isfinite(r)) throw DomainError("pricing: r must be finite");
  if (payoff != Payoff::kFutures && !(K > 0.0)) throw DomainError("pricing: strike must be > 0");
}

std::optional<double> payoff_kink(const QuantileMap& map, double K) {
  if (!(K > map.h_min() && K < map.h_max())) return std::nullopt;
  return h_inverse(map, K);
}

SpectralCoeffs project_futures(const QuantileMap& map, int n_terms) {
  check_terms(n_terms);
  SpectralCoeffs out;
  out.payoff = Payoff::kFutures;
  out.b.assign(static_cast<std::size_t>(n_terms), 0.0);
  const auto& a = map.legendre_coeffs();
  std::copy_n(a.begin(), std::min(a.size(), out.b.size()), out.b.begin());
  return out;
}

SpectralCoeffs project_call(const QuantileMap& map, double K, int n_terms) {
  check_terms(n_terms);
  SpectralCoeffs out;
  out.payoff = Payoff::kCall;
  out.strike = K;
  if (K >= map.h_max()) {
    out.b.assign(static_cast<std::size_t>(n_terms), 0.0);
  } else if (K <= map.h_min()) {
    out.b = project_futures(map, n_terms).b;
    out.b[0] -= K;
  } else {
    const auto& a = map.legendre_coeffs();
    out.b = project(rule_for(map.degree(), n_terms), n_terms, payoff_kink(map, K),
                    [&](double x) { return std::max(legendre_series_eval(a, x) - K, 0.0); });
  }
  return out;
}

SpectralCoeffs project_put(const QuantileMap& map, double K, int n_terms) {
  check_terms(n_terms);
  SpectralCoeffs out;
  out.payoff = Payoff::kPut;
  out.strike = K;
  if (K <= map.h_min()) {
    out.b.assign(static_cast<std::size_t>(n_terms), 0.0);
  } else if (K >= map.h_max()) {
    out.b = project_futures(map, n_terms).b;
    for (double& v : out.b) v = -v;
    out.b[0] += K;
  } else {
    const auto& a = map.legendre_coeffs();
    out.b = project(rule_for(map.degree(), n_terms), n_terms, payoff_kink(map, K),
                    [&](double x) { return std::max(K - legendre_series_eval(a, x), 0.0); });
  }
  return out;
}

double expected_payoff(double tau, double x, const SpectralCoeffs& coeffs, double k) {
  std::vector<double> p(coeffs.b.size());
  legendre_values(x, p);
  double sum = 0.0;
  for (std::size_t n = 0; n < coeffs.b.size(); ++n) {
    const double nd = static_cast<double>(n);
    sum += coeffs.b[n] * std::exp(-0.5 * k * nd * (nd + 1.0) * tau) * p[n];
  }
  return sum;
}

double price_futures(double t, double x, const SpectralCoeffs& coeffs,
                     const PricingParams& params) {
  check_payoff(coeffs, Payoff::kFutures);
  params.validate(Payoff::kFutures);
  check_state(t, x, params);
  return expected_payoff(params.T - t, x, coeffs, params.k);
}

double price_call(double t, double x, const SpectralCoeffs& coeffs, const PricingParams& params) {
  check_payoff(coeffs, Payoff::kCall);
  params.validate(Payoff::kCall);
  check_state(t, x, params);
  const double tau = params.T - t;
  return clip_option(std::exp(-params.r * tau) * expected_payoff(tau, x, coeffs, params.k));
}

double price_put(double t, double x, const SpectralCoeffs& coeffs, const PricingParams& params) {
  check_payoff(coeffs, Payoff::kPut);
  params.validate(Payoff::kPut);
  check_state(t, x, params);
  const double tau = params.T - t;
  return clip_option(std::exp(-params.r * tau) * expected_payoff(tau, x, coeffs, params.k));
}

TruncationReport truncation_report(const QuantileMap& map, std::span<const double> vix_levels,
                                   std::span<const int> term_counts, double t,
                                   const PricingParams& params) {
  params.validate(Payoff::kCall);
  if (!(t >= 0.0 && t <= params.T)) throw DomainError("truncation_report: need 0 <= t <= T");
  TruncationReport report;
  report.vix_levels.assign(vix_levels.begin(), vix_levels.end());
  report.term_counts.assign(term_counts.begin(), term_counts.end());
  for (double v : vix_levels) report.factor_values.push_back(h_inverse(map, v));
  report.futures.assign(vix_levels.size(), std::vector<double>(term_counts.size()));
  report.calls.assign(vix_levels.size(), std::vector<double>(term_counts.size()));
  for (std::size_t c = 0; c < term_counts.size(); ++c) {
    const SpectralCoeffs fut = project_futures(map, term_counts[c]);
    const SpectralCoeffs call = project_call(map, params.K, term_counts[c]);
    for (std::size_t r = 0; r < vix_levels.size(); ++r) {
      report.futures[r][c] = price_futures(t, report.factor_values[r], fut, params);
      // Raw truncated sums: short series can dip below zero and that is what
      // the report is meant to show.
      report.calls[r][c] = std::exp(-params.r * (params.T - t)) *
                           expected_payoff(params.T - t, report.factor_values[r], call, params.k);
    }
  }
  return report;
}

}  // namespace empvix
