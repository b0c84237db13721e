#ifndef EMPVIX_JACOBI_DIFFUSION_H_
#define EMPVIX_JACOBI_DIFFUSION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace empvix {

// The factor process dX = -k X dt + sqrt(k (1 - X^2)) dW on (-1, 1). Its
// generator has eigenfunctions P_n with eigenvalues -k n (n + 1) / 2 and its
// unique invariant law is U[-1, 1].

// Euler steps are clamped into [-1 + kBoundaryGuard, 1 - kBoundaryGuard].
inline constexpr double kBoundaryGuard = 1e-9;

inline constexpr int kDefaultDensityTerms = 40;

struct DiffusionParams {
  double k = 1.0;   // mean-reversion speed, 1/years
  double x0 = 0.0;  // initial state

  // Throws DomainError unless k > 0 and -1 < x0 < 1.
  void validate() const;
};

struct SamplePath {
  std::vector<double> times;   // years, uniform grid starting at 0
  std::vector<double> states;  // factor values
};

// One full-truncation Euler step driven by the standard normal draw z.
double step_euler(double x, double k, double dt, double z);

// floor(horizon / dt) + 1 points; identical output for identical seed.
SamplePath simulate_path(const DiffusionParams& params, double horizon, double dt,
                         std::uint64_t seed);

// p(t, x, y) = sum_{n < n_terms} (2n + 1) / 2 exp(-k n (n + 1) t / 2) P_n(x) P_n(y).
// Truncation can leave small negative values at very short t.
// Throws DomainError for t <= 0 (the initial law is a point mass).
double transition_density(double t, double x, double y, double k,
                          int n_terms = kDefaultDensityTerms);

// KS distance between the states recorded at times >= burn_in (every
// `stride`-th one) and U[-1, 1].
double stationarity_test(const SamplePath& path, double burn_in, std::size_t stride = 1);

}  // namespace empvix

#endif  // EMPVIX_JACOBI_DIFFUSION_H_
