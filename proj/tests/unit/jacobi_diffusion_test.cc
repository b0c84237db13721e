#include "empvix/jacobi_diffusion.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "empvix/empirical_map.h"
#include "empvix/error.h"
#include "empvix/legendre.h"
#include "empvix/statistics.h"
#include "support/fixture.h"
#include "support/oracles.h"

namespace empvix {
namespace {

constexpr double kReferenceK = 2.362;

TEST(StepEuler, Examples) {
  EXPECT_EQ(step_euler(0.0, 1.0, 0.01, 0.0), 0.0);
  EXPECT_NEAR(step_euler(0.5, 1.0, 0.01, 0.0), 0.495, 1e-15);
  EXPECT_LE(step_euler(1.0 - kBoundaryGuard, 2.0, 0.01, 50.0), 1.0 - kBoundaryGuard);
  EXPECT_GE(step_euler(-1.0 + kBoundaryGuard, 2.0, 0.01, -50.0), -1.0 + kBoundaryGuard);
  EXPECT_LE(step_euler(0.99, 2.0, 0.1, 40.0), 1.0 - kBoundaryGuard);
}

TEST(SimulatePath, DeterministicForSeed) {
  const DiffusionParams params{kReferenceK, 0.1};
  const SamplePath a = simulate_path(params, 2.0, 1e-3, 42);
  const SamplePath b = simulate_path(params, 2.0, 1e-3, 42);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.times, b.times);
  const SamplePath c = simulate_path(params, 2.0, 1e-3, 43);
  EXPECT_NE(a.states, c.states);
}

TEST(SimulatePath, LengthAndGrid) {
  const DiffusionParams params{1.0, 0.0};
  EXPECT_EQ(simulate_path(params, 0.25, 0.25, 1).states.size(), 2u);
  const SamplePath p = simulate_path(params, 1.0, 0.3, 1);
  EXPECT_EQ(p.states.size(), 4u);
  EXPECT_NEAR(p.times.back(), 0.9, 1e-15);
  EXPECT_EQ(simulate_path(params, 33.0, 1.0 / 2520.0, 1).states.size(), 33u * 2520u + 1u);
  EXPECT_EQ(p.states.front(), 0.0);
}

TEST(SimulatePath, StatesStayInsideTheGuard) {
  const SamplePath p = simulate_path({8.0, 0.9}, 20.0, 1e-2, 5);
  for (double x : p.states) {
    EXPECT_GE(x, -1.0 + kBoundaryGuard);
    EXPECT_LE(x, 1.0 - kBoundaryGuard);
  }
}

TEST(SimulatePath, InvalidArgumentsAreDomainErrors) {
  EXPECT_THROW(simulate_path({0.0, 0.0}, 1.0, 0.1, 1), DomainError);
  EXPECT_THROW(simulate_path({1.0, 1.0}, 1.0, 0.1, 1), DomainError);
  EXPECT_THROW(simulate_path({1.0, 0.0}, 1.0, 2.0, 1), DomainError);
  EXPECT_THROW(simulate_path({1.0, 0.0}, 1.0, 0.0, 1), DomainError);
}

TEST(SimulatePath, MappedPathMatchesTheFittedLaw) {
  const QuantileMap& map = testing::synthetic_map();
  const double dt = 1.0 / 2520.0;
  const SamplePath path = simulate_path({kReferenceK, 0.0}, 33.0, dt, 7);
  // Points 3/k years apart are close to independent.
  const auto stride = static_cast<std::size_t>(std::ceil(3.0 / kReferenceK / dt));
  std::vector<double> vix;
  for (std::size_t i = stride; i < path.states.size(); i += stride) {
    vix.push_back(map(0.5 * (path.states[i] + 1.0)));
  }
  const auto cdf = [&map](double c) {
    if (c <= map.h_min()) return 0.0;
    if (c >= map.h_max()) return 1.0;
    return 0.5 * (h_inverse(map, c) + 1.0);
  };
  EXPECT_LT(ks_statistic(vix, cdf), ks_critical_value(vix.size(), 0.01));
}

TEST(TransitionDensity, ConservesProbability) {
  const QuadratureRule& rule = default_rule();
  for (double t : {0.05, 0.5, 5.0}) {
    const double mass =
        integrate([t](double y) { return transition_density(t, 0.3, y, kReferenceK); }, rule, -1, 1);
    EXPECT_NEAR(mass, 1.0, 1e-8) << t;
  }
}

TEST(TransitionDensity, ConvergesToTheUniformLaw) {
  // Beyond n = 0 the density is dominated by (3/2) e^{-kt} x y.
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double y = -1.0 + i / 100.0;
    const double p = transition_density(20.0, 0.3, y, 1.0);
    EXPECT_NEAR(p - 0.5, 1.5 * std::exp(-20.0) * 0.3 * y, 1e-15);
    worst = std::max(worst, std::fabs(p - 0.5));
  }
  EXPECT_NEAR(worst, 1.5 * std::exp(-20.0) * 0.3, 1e-15);
  EXPECT_LT(worst, 1e-9);
}

TEST(TransitionDensity, IsSymmetric) {
  for (double x : {-0.9, -0.2, 0.4}) {
    for (double y : {-0.5, 0.1, 0.95}) {
      EXPECT_NEAR(transition_density(0.1, x, y, 1.3), transition_density(0.1, y, x, 1.3), 1e-14);
    }
  }
}

TEST(TransitionDensity, Errors) {
  EXPECT_THROW(transition_density(0.0, 0.1, 0.2, 1.0), DomainError);
  EXPECT_THROW(transition_density(-1.0, 0.1, 0.2, 1.0), DomainError);
  EXPECT_THROW(transition_density(1.0, 1.1, 0.2, 1.0), DomainError);
  EXPECT_THROW(transition_density(1.0, 0.1, 0.2, 1.0, 0), DomainError);
}

void expect_nonnegative(double k, double t, int n_terms) {
  for (double x : {-0.95, -0.5, 0.0, 0.7}) {
    for (int j = 0; j <= 100; ++j) {
      const double y = -1.0 + j / 50.0;
      EXPECT_GE(transition_density(t, x, y, k, n_terms), -1e-8)
          << "k=" << k << " t=" << t << " x=" << x << " y=" << y;
    }
  }
}

TEST(TransitionDensityProperty, NonNegativeUpToTruncation) {
  for (double k : {0.5, 1.0, kReferenceK, 6.0}) {
    for (double t : {0.05, 0.3, 2.0}) expect_nonnegative(k, t, kDefaultDensityTerms);
  }
  expect_nonnegative(kReferenceK, 0.02, kDefaultDensityTerms);
  expect_nonnegative(6.0, 0.01, kDefaultDensityTerms);
}

TEST(TransitionDensityProperty, ShortHorizonsNeedMoreTerms) {
  // At k t = 0.005 forty terms leave visible ringing; more terms remove it.
  double worst = 0.0;
  for (int j = 0; j <= 100; ++j) {
    worst = std::min(worst, transition_density(0.01, 0.0, -1.0 + j / 50.0, 0.5));
  }
  EXPECT_LT(worst, -1e-8);
  expect_nonnegative(0.5, 0.01, 160);
  expect_nonnegative(1.0, 0.01, 160);
}

TEST(TransitionDensityProperty, ChapmanKolmogorov) {
  const QuadratureRule& rule = default_rule();
  for (double x : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
    for (double y : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
      const double composed = integrate(
          [&](double z) { return transition_density(0.1, x, z, 1.0) * transition_density(0.1, z, y, 1.0); },
          rule, -1.0, 1.0);
      EXPECT_NEAR(transition_density(0.2, x, y, 1.0), composed, 1e-6) << x << " " << y;
    }
  }
}

TEST(TransitionDensityProperty, MatchesEulerHistogram) {
  constexpr int kBins = 40;
  constexpr double kT = 0.25;
  constexpr double kX0 = 0.3;
  std::vector<std::function<double(double)>> indicators;
  for (int b = 0; b < kBins; ++b) {
    const double lo = -1.0 + 2.0 * b / kBins;
    const double hi = lo + 2.0 / kBins;
    indicators.push_back([lo, hi, b](double x) {
      return (x >= lo && (x < hi || (b == kBins - 1 && x <= hi))) ? 1.0 : 0.0;
    });
  }
  const auto mc = testing::mc_jacobi(kX0, kReferenceK, kT, 1e-3, 100000, 99, indicators);
  const QuadratureRule rule = gauss_rule(16);
  double tv = 0.0;
  for (int b = 0; b < kBins; ++b) {
    const double lo = -1.0 + 2.0 * b / kBins;
    const double mass = integrate([](double y) { return transition_density(kT, kX0, y, kReferenceK); },
                                  rule, lo, lo + 2.0 / kBins);
    tv += 0.5 * std::fabs(mass - mc[b].mean);
  }
  EXPECT_LT(tv, 0.02);
}

TEST(StationarityTest, IidUniformPasses) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SamplePath path;
  for (int i = 0; i < 5000; ++i) {
    path.times.push_back(i * 0.01);
    path.states.push_back(u(rng));
  }
  EXPECT_LT(stationarity_test(path, 0.0), ks_critical_value(5000, 0.01));
}

TEST(StationarityTest, SubsampledEulerPathPasses) {
  const double dt = 1e-3;
  const SamplePath path = simulate_path({kReferenceK, 0.0}, 100.0, dt, 2718);
  const auto stride = static_cast<std::size_t>(std::ceil(3.0 / kReferenceK / dt));
  const double burn_in = 5.0;
  const std::size_t kept = (path.states.size() - static_cast<std::size_t>(burn_in / dt) + stride - 1) / stride;
  EXPECT_LT(stationarity_test(path, burn_in, stride), ks_critical_value(kept, 0.01));
}

TEST(StationarityTest, ConstantPathIsHalf) {
  SamplePath path{{0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}};
  EXPECT_NEAR(stationarity_test(path, 0.0), 0.5, 1e-15);
  EXPECT_THROW(stationarity_test(path, 5.0), DomainError);
}

}  // namespace
}  // namespace empvix
