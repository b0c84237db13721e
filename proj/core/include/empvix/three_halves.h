#ifndef EMPVIX_THREE_HALVES_H_
#define EMPVIX_THREE_HALVES_H_

namespace empvix {

// Benchmark: VIX itself follows the 3/2 process
//
//   dV = (alpha V + beta V^2) dt + k32 V^{3/2} dW,   beta < 0,
//
// under which Y = 1/V is a CIR process and a call has a closed form as a
// Bessel-kernel integral over u = Y_T in (0, 1/K].

struct ThreeHalvesParams {
  double alpha = 0.0;  // linear drift coefficient, 1/years
  double beta = -1.0;  // quadratic drift coefficient, must be < 0
  double k32 = 1.0;    // volatility coefficient
  double r = 0.0;
  double K = 0.2;      // strike, decimal VIX
  double T = 1.0;
  double t = 0.0;

  // Throws DomainError unless beta < 0, k32 > 0, K > 0 and 0 <= t < T.
  void validate() const;
};

// Modified Bessel function of the first kind. Power series, or the
// large-argument expansion for z > 30 when it converges to full precision.
// Returns +inf and sets *overflow when I_nu(z) exceeds double range.
double bessel_i(double nu, double z, bool* overflow = nullptr);

// exp(-z) I_nu(z); finite for every z >= 0.
double bessel_i_scaled(double nu, double z);

// log I_nu(z) for z > 0.
double log_bessel_i(double nu, double z);

enum class Evaluation {
  kLogScaled,  // every exp * Bessel product formed in log space
  kDirect,     // the closed form as written; overflows at long maturities
};

inline constexpr int kDefaultQuadPoints = 256;

// Call price C(V, t) by Gauss-Legendre quadrature in s = log u over
// [log(1e-12 / K), log(1 / K)]. quad_points must be >= 64.
// Throws NumericalError when a direct evaluation leaves double range.
double price_call_32(double V, const ThreeHalvesParams& params,
                     int quad_points = kDefaultQuadPoints,
                     Evaluation evaluation = Evaluation::kLogScaled);

}  // namespace empvix

#endif  // EMPVIX_THREE_HALVES_H_
