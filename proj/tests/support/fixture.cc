#include "support/fixture.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>

#include <math.h>  // boost 1.74 pchip calls unqualified isnan

#include <boost/math/interpolators/pchip.hpp>

#include "support/oracles.h"

#ifndef EMPVIX_VIX_HISTORY_DEFAULT
#define EMPVIX_VIX_HISTORY_DEFAULT ""
#endif

namespace empvix::testing {

namespace {

constexpr std::size_t kSyntheticDays = 8317;
constexpr double kSyntheticK = 2.362;

// (u, level) anchors of the synthetic law.
constexpr std::array<std::pair<double, double>, 16> kAnchors{{
    {0.0, 0.0914},
    {0.01, 0.105},
    {0.05, 0.114},
    {0.10, 0.121},
    {0.25, 0.139},
    {0.50, 0.176},
    {0.6156, 0.2016},
    {0.6599, 0.2113},
    {0.7071, 0.2213},
    {0.75, 0.228},
    {0.7926, 0.2441},
    {0.90, 0.286},
    {0.95, 0.33},
    {0.99, 0.45},
    {0.999, 0.65},
    {1.0, 0.8269},
}};

const boost::math::interpolators::pchip<std::vector<double>>& interpolant() {
  static const auto spline = [] {
    std::vector<double> u;
    std::vector<double> log_level;
    for (const auto& [a, level] : kAnchors) {
      u.push_back(a);
      log_level.push_back(std::log(level));
    }
    return boost::math::interpolators::pchip<std::vector<double>>(std::move(u),
                                                                  std::move(log_level));
  }();
  return spline;
}

MarketSeries build_history() {
  std::mt19937_64 rng(20221209);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> levels(kSyntheticDays);
  for (std::size_t i = 0; i < kSyntheticDays; ++i) {
    levels[i] = synthetic_quantile((static_cast<double>(i) + unit(rng)) / kSyntheticDays);
  }
  std::sort(levels.begin(), levels.end());

  // Daily Jacobi path; the level of day i is the one whose rank matches x_i.
  NormalSource normal(7);
  std::vector<double> x(kSyntheticDays);
  double state = 0.0;
  const double dt = 1.0 / 252.0;
  const int substeps = 10;
  for (std::size_t i = 0; i < kSyntheticDays; ++i) {
    for (int s = 0; s < substeps; ++s) {
      state = euler_jacobi(state, kSyntheticK, dt / substeps, normal());
    }
    x[i] = state;
  }
  std::vector<std::size_t> order(kSyntheticDays);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<Quote> quotes(kSyntheticDays);
  for (std::size_t r = 0; r < kSyntheticDays; ++r) quotes[order[r]].level = levels[r];
  std::chrono::sys_days day{std::chrono::year{1990} / 1 / 2};
  for (std::size_t i = 0; i < kSyntheticDays; ++i) {
    while (std::chrono::weekday{day}.iso_encoding() > 5) day += std::chrono::days{1};
    quotes[i].date = Date{day};
    day += std::chrono::days{1};
  }
  return MarketSeries(std::move(quotes));
}

}  // namespace

double synthetic_quantile(double u) { return std::exp(interpolant()(std::clamp(u, 0.0, 1.0))); }

const MarketSeries& synthetic_history() {
  static const MarketSeries series = build_history();
  return series;
}

const QuantileMap& synthetic_map() {
  static const QuantileMap map =
      fit_quantile_polynomial(ecdf(synthetic_history()), 30, source_hash(synthetic_history()));
  return map;
}

QuantileMap linear_map() {
  const std::array<double, 2> coeffs{0.1, 0.3};
  return QuantileMap::from_monomial(coeffs);
}

const std::vector<WeeklyOptionRow>& weekly_option_rows() {
  static const std::vector<WeeklyOptionRow> rows{
      {0.24406, 0.07926, 0.364, 0.5852}, {0.23886, 0.07966, 0.345, 0.5460},
      {0.21125, 0.06875, 0.326, 0.3198}, {0.20716, 0.06690, 0.307, 0.2813},
      {0.22144, 0.06474, 0.288, 0.4159}, {0.22828, 0.06256, 0.268, 0.4686},
      {0.21362, 0.06178, 0.249, 0.3430}, {0.21725, 0.05838, 0.225, 0.3783},
      {0.22125, 0.04835, 0.208, 0.4142}, {0.20164, 0.03815, 0.192, 0.2312},
  };
  return rows;
}

std::vector<OptionObservation> weekly_option_observations() {
  std::vector<OptionObservation> out;
  const double horizon = weekly_option_rows().front().tau;
  for (const WeeklyOptionRow& row : weekly_option_rows()) {
    out.push_back({horizon - row.tau, row.vix, row.call_price, row.tau});
  }
  return out;
}

std::filesystem::path vix_history_path() {
  if (const char* env = std::getenv("EMPVIX_VIX_HISTORY"); env != nullptr && *env != '\0') {
    return env;
  }
  return EMPVIX_VIX_HISTORY_DEFAULT;
}

std::optional<MarketSeries> vix_history() {
  const auto path = vix_history_path();
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  const MarketSeries all = load_vix_csv(path);
  const Date first{std::chrono::year{1990} / 1 / 2};
  const Date last{std::chrono::year{2022} / 12 / 30};
  std::vector<Quote> window;
  for (const Quote& q : all.entries()) {
    if (q.date >= first && q.date <= last) window.push_back(q);
  }
  return MarketSeries(std::move(window));
}

std::filesystem::path write_temp_file(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "empvix_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace empvix::testing
