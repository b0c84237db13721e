#ifndef EMPVIX_CALIBRATOR_H_
#define EMPVIX_CALIBRATOR_H_

#include <vector>

#include "empvix/empirical_map.h"
#include "empvix/market_data.h"
#include "empvix/spectral_pricer.h"

namespace empvix {

// Least-squares fit of the factor speed k to observed call prices. Each
// observation is priced with its own time to expiry tau_i.
struct CalibrationProblem {
  std::vector<OptionObservation> observations;
  QuantileMap map;
  double r = 0.0;
  double K = 0.2;
  double k_lo = 1e-3;
  double k_hi = 50.0;
  int n_terms = kDefaultTerms;

  // Throws DomainError / InputError for an unusable problem.
  void validate() const;
};

// Sum of squared call-price errors as a function of k. Everything that does
// not depend on k is precomputed:
//   nu_{i,n} = (2n + 1) / 2 <(h~ - K)^+, P_n> P_n(x_i),  x_i = h_inverse(vix_i),
// so an evaluation is one exponential per (i, n).
class CallObjective {
 public:
  explicit CallObjective(const CalibrationProblem& problem);

  // Throws DomainError for k <= 0.
  double operator()(double k) const;
  std::vector<double> model_prices(double k) const;
  const std::vector<double>& factor_values() const { return x_; }

 private:
  std::vector<std::vector<double>> nu_;
  std::vector<double> x_;
  std::vector<double> tau_;
  std::vector<double> discount_;
  std::vector<double> observed_;
};

double objective_k(double k, const CalibrationProblem& problem);

struct CalibrationReport {
  double k_hat = 0.0;
  double sse = 0.0;
  std::vector<double> residuals;  // model - observed, per observation
  bool at_bound = false;          // k_hat sits on k_lo or k_hi
  int evaluations = 0;
};

// Grid bracketing over [k_lo, k_hi], golden-section search to width 1e-6,
// then parabolic refinement. Throws NumericalError if the objective is not
// finite somewhere on the search path.
CalibrationReport calibrate_k(const CalibrationProblem& problem);

struct ThreeHalvesFit {
  double alpha = 0.0;
  double beta = 0.0;
  double sse = 0.0;
  int evaluations = 0;
};

// Nelder-Mead over (alpha, log(-beta)) so beta stays negative; several
// starting simplices, best result kept. Throws NumericalError if no
// candidate produces finite prices.
ThreeHalvesFit calibrate_32(const std::vector<OptionObservation>& observations, double k32,
                            double K, double r);

}  // namespace empvix

#endif  // EMPVIX_CALIBRATOR_H_
