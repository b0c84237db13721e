#include "empvix/jacobi_diffusion.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "empvix/error.h"
#include "empvix/legendre.h"
#include "empvix/statistics.h"

namespace empvix {

void DiffusionParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("diffusion: k must be > 0");
  if (!(x0 > -1.0 && x0 < 1.0)) throw DomainError("diffusion: x0 must lie in (-1, 1)");
}

double step_euler(double x, double k, double dt, double z) {
  const double variance = k * std::max(1.0 - x * x, 0.0) * dt;
  const double next = x - k * x * dt + std::sqrt(variance) * z;
  return std::clamp(next, -1.0 + kBoundaryGuard, 1.0 - kBoundaryGuard);
}

SamplePath simulate_path(const DiffusionParams& params, double horizon, double dt,
                         std::uint64_t seed) {
  params.validate();
  if (!(dt > 0.0) || !(horizon > 0.0) || dt > horizon) {
    throw DomainError("simulate_path: need 0 < dt <= horizon");
  }
  // The relative nudge keeps e.g. horizon = 33, dt = 33/n from losing a step.
  const auto steps = static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-12)));
  SamplePath path;
  path.times.resize(steps + 1);
  path.states.resize(steps + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double x = params.x0;
  path.times[0] = 0.0;
  path.states[0] = x;
  for (std::size_t i = 1; i <= steps; ++i) {
    x = step_euler(x, params.k, dt, normal(rng));
    path.times[i] = static_cast<double>(i) * dt;
    path.states[i] = x;
  }
  return path;
}

double transition_density(double t, double x, double y, double k, int n_terms) {
  if (!(t > 0.0)) throw DomainError("transition_density: t must be > 0");
  if (!(std::fabs(x) <= 1.0) || !(std::fabs(y) <= 1.0)) {
    throw DomainError("transition_density: states must lie in [-1, 1]");
  }
  if (n_terms < 1) throw DomainError("transition_density: n_terms must be >= 1");
  std::vector<double> px(static_cast<std::size_t>(n_terms));
  std::vector<double> py(static_cast<std::size_t>(n_terms));
  legendre_values(x, px);
  legendre_values(y, py);
  double sum = 0.0;
  for (int n = 0; n < n_terms; ++n) {
    const double decay = std::exp(-0.5 * k * n * (n + 1.0) * t);
    if (decay == 0.0) break;
    sum += 0.5 * (2.0 * n + 1.0) * decay * px[n] * py[n];
  }
  return sum;
}

double stationarity_test(const SamplePath& path, double burn_in, std::size_t stride) {
  if (path.times.empty() || !(path.times.back() > burn_in)) {
    throw DomainError("stationarity_test: path horizon must exceed burn_in");
  }
  if (stride == 0) throw DomainError("stationarity_test: stride must be >= 1");
  std::vector<double> kept;
  std::size_t first = 0;
  while (first < path.times.size() && path.times[first] < burn_in) ++first;
  for (std::size_t i = first; i < path.states.size(); i += stride) kept.push_back(path.states[i]);
  return ks_uniform(kept, -1.0, 1.0);
}

}  // namespace empvix
