#include "empvix/calibrator.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "empvix/error.h"
#include "empvix/legendre.h"
#include "empvix/three_halves.h"

namespace empvix {

namespace {

constexpr double kGoldenWidth = 1e-6;
constexpr int kScanPoints = 1001;
constexpr int kParabolicSteps = 8;

double checked(double value, double k) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "calibration objective is not finite at k = " << k;
    throw NumericalError(msg.str());
  }
  return value;
}

// Minimal Nelder-Mead on R^2.
struct Simplex {
  std::array<std::array<double, 2>, 3> points;
  std::array<double, 3> values;
};

std::pair<std::array<double, 2>, double> nelder_mead(
    const std::function<double(const std::array<double, 2>&)>& f, std::array<double, 2> start,
    std::array<double, 2> step, int max_iter, int* evaluations) {
  Simplex s;
  s.points = {start, start, start};
  s.points[1][0] += step[0];
  s.points[2][1] += step[1];
  for (int i = 0; i < 3; ++i) s.values[i] = f(s.points[i]);
  *evaluations += 3;
  auto eval = [&](const std::array<double, 2>& p) {
    ++*evaluations;
    return f(p);
  };
  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s.values[a] < s.values[b]; });
    const auto best = s.points[idx[0]];
    const auto worst = s.points[idx[2]];
    const double f_best = s.values[idx[0]];
    const double f_second = s.values[idx[1]];
    const double f_worst = s.values[idx[2]];

    double size = 0.0;
    for (int i = 1; i < 3; ++i) {
      size = std::max(size, std::hypot(s.points[idx[i]][0] - best[0], s.points[idx[i]][1] - best[1]));
    }
    if (size < 1e-10 && std::fabs(f_worst - f_best) <= 1e-14 * std::fabs(f_best) + 1e-30) break;

    std::array<double, 2> centroid;
    for (int d = 0; d < 2; ++d) centroid[d] = 0.5 * (best[d] + s.points[idx[1]][d]);
    auto along = [&](double coef) {
      return std::array<double, 2>{centroid[0] + coef * (worst[0] - centroid[0]),
                                   centroid[1] + coef * (worst[1] - centroid[1])};
    };
    const auto reflected = along(-1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected < f_best) {
      const auto expanded = along(-2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        s.points[idx[2]] = expanded;
        s.values[idx[2]] = f_expanded;
      } else {
        s.points[idx[2]] = reflected;
        s.values[idx[2]] = f_reflected;
      }
      continue;
    }
    if (f_reflected < f_second) {
      s.points[idx[2]] = reflected;
      s.values[idx[2]] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < f_worst;
    const auto contracted = along(outside ? -0.5 : 0.5);
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : f_worst)) {
      s.points[idx[2]] = contracted;
      s.values[idx[2]] = f_contracted;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      auto& p = s.points[idx[i]];
      for (int d = 0; d < 2; ++d) p[d] = best[d] + 0.5 * (p[d] - best[d]);
      s.values[idx[i]] = eval(p);
    }
  }
  const int best = static_cast<int>(std::min_element(s.values.begin(), s.values.end()) -
                                    s.values.begin());
  return {s.points[best], s.values[best]};
}

}  // namespace

void CalibrationProblem::validate() const {
  if (observations.empty()) throw InputError("calibration: need at least one observation");
  for (const auto& obs : observations) empvix::validate(obs);
  if (!(k_lo > 0.0) || !(k_lo < k_hi) || !std::isfinite(k_hi)) {
    throw DomainError("calibration: need 0 < k_lo < k_hi");
  }
  if (!(K > 0.0)) throw DomainError("calibration: strike must be > 0");
  if (n_terms < 1) throw DomainError("calibration: need at least one series term");
}

CallObjective::CallObjective(const CalibrationProblem& problem) {
  problem.validate();
  const SpectralCoeffs call = project_call(problem.map, problem.K, problem.n_terms);
  std::vector<double> p(call.b.size());
  for (const auto& obs : problem.observations) {
    const double x = h_inverse(problem.map, obs.vix);
    legendre_values(x, p);
    std::vector<double> nu(call.b.size());
    for (std::size_t n = 0; n < nu.size(); ++n) nu[n] = call.b[n] * p[n];
    nu_.push_back(std::move(nu));
    x_.push_back(x);
    tau_.push_back(obs.tau);
    discount_.push_back(std::exp(-problem.r * obs.tau));
    observed_.push_back(obs.call_price);
  }
}

std::vector<double> CallObjective::model_prices(double k) const {
  if (!(k > 0.0)) throw DomainError("objective: k must be > 0");
  std::vector<double> prices(nu_.size());
  for (std::size_t i = 0; i < nu_.size(); ++i) {
    double sum = 0.0;
    for (std::size_t n = 0; n < nu_[i].size(); ++n) {
      const double nd = static_cast<double>(n);
      sum += nu_[i][n] * std::exp(-0.5 * nd * (nd + 1.0) * tau_[i] * k);
    }
    prices[i] = discount_[i] * sum;
  }
  return prices;
}

double CallObjective::operator()(double k) const {
  const auto prices = model_prices(k);
  double sse = 0.0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    const double e = prices[i] - observed_[i];
    sse += e * e;
  }
  return sse;
}

double objective_k(double k, const CalibrationProblem& problem) {
  if (!(k > 0.0)) throw DomainError("objective: k must be > 0");
  return CallObjective(problem)(k);
}

CalibrationReport calibrate_k(const CalibrationProblem& problem) {
  const CallObjective objective(problem);
  CalibrationReport report;
  auto f = [&](double k) {
    ++report.evaluations;
    return checked(objective(k), k);
  };

  // Bracket with a linear and a logarithmic scan; the union resolves both
  // slow (k ~ k_lo) and fast speeds.
  std::vector<double> grid;
  grid.reserve(2 * kScanPoints);
  const double lo = problem.k_lo;
  const double hi = problem.k_hi;
  for (int i = 0; i < kScanPoints; ++i) {
    const double w = static_cast<double>(i) / (kScanPoints - 1);
    grid.push_back(lo + w * (hi - lo));
    grid.push_back(lo * std::pow(hi / lo, w));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> values(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f(grid[i]);
    if (values[i] < values[best]) best = i;
  }
  double k_best = grid[best];
  double f_best = values[best];

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[best + 1 == grid.size() ? best : best + 1];
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > kGoldenWidth) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  for (const auto& [k, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v < f_best) {
      k_best = k;
      f_best = v;
    }
  }

  // Successive parabolic interpolation through the best point and its
  // golden-section neighbours.
  double x0 = a;
  double x1 = k_best;
  double x2 = b;
  double f0 = f(x0);
  double f1 = f_best;
  double f2 = f(x2);
  for (int step = 0; step < kParabolicSteps; ++step) {
    const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
    const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
    if (den == 0.0) break;
    const double x = x1 - 0.5 * num / den;
    if (!(x > std::min(x0, x2) && x < std::max(x0, x2)) || x == x1) break;
    const double fx = f(x);
    if (fx >= f1) break;
    if (x < x1) {
      x2 = x1;
      f2 = f1;
    } else {
      x0 = x1;
      f0 = f1;
    }
    x1 = x;
    f1 = fx;
  }
  if (f1 < f_best) {
    k_best = x1;
    f_best = f1;
  }

  report.k_hat = k_best;
  report.sse = f_best;
  const auto prices = objective.model_prices(k_best);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    report.residuals.push_back(prices[i] - problem.observations[i].call_price);
  }
  const double edge = kGoldenWidth;
  report.at_bound = (k_best - lo) <= edge || (hi - k_best) <= edge;
  return report;
}

ThreeHalvesFit calibrate_32(const std::vector<OptionObservation>& observations, double k32,
                            double K, double r) {
  if (observations.empty()) throw InputError("calibrate_32: need at least one observation");
  for (const auto& obs : observations) validate(obs);
  if (!(k32 > 0.0)) throw DomainError("calibrate_32: k32 must be > 0");
  if (!(K > 0.0)) throw DomainError("calibrate_32: strike must be > 0");

  bool any_finite = false;
  auto sse = [&](const std::array<double, 2>& p) {
    ThreeHalvesParams params;
    params.alpha = p[0];
    params.beta = -std::exp(p[1]);
    params.k32 = k32;
    params.r = r;
    params.K = K;
    double total = 0.0;
    for (const auto& obs : observations) {
      params.t = 0.0;
      params.T = obs.tau;
      double price = std::numeric_limits<double>::quiet_NaN();
      try {
        price = price_call_32(obs.vix, params);
      } catch (const NumericalError&) {
      }
      if (!std::isfinite(price)) return std::numeric_limits<double>::infinity();
      const double e = price - obs.call_price;
      total += e * e;
    }
    any_finite = true;
    return total;
  };

  ThreeHalvesFit fit;
  fit.sse = std::numeric_limits<double>::infinity();
  std::array<double, 2> best_point{};
  for (double alpha0 : {0.5, 1.0, 2.0, 4.0}) {
    for (double beta0 : {-1.0, -3.0, -6.0}) {
      const auto [point, value] = nelder_mead(sse, {alpha0, std::log(-beta0)}, {0.25, 0.25}, 4000,
                                              &fit.evaluations);
      if (value < fit.sse) {
        fit.sse = value;
        best_point = point;
      }
    }
  }
  if (!any_finite) throw NumericalError("calibrate_32: no candidate produced finite prices");
  // Restart from the incumbent to shake off a collapsed simplex.
  const auto [point, value] = nelder_mead(sse, best_point, {0.05, 0.05}, 4000, &fit.evaluations);
  if (value < fit.sse) {
    fit.sse = value;
    best_point = point;
  }
  fit.alpha = best_point[0];
  fit.beta = -std::exp(best_point[1]);
  return fit;
}

}  // namespace empvix
