#ifndef EMPVIX_TESTS_SUPPORT_FIXTURE_H_
#define EMPVIX_TESTS_SUPPORT_FIXTURE_H_

#include <filesystem>
#include <optional>
#include <vector>

#include "empvix/empirical_map.h"
#include "empvix/market_data.h"

namespace empvix::testing {

// Quantile function of a synthetic VIX-like marginal law: monotone cubic
// interpolation of log-levels through fixed anchors, range [0.0914, 0.8269].
double synthetic_quantile(double u);

// 8317 business-day closes from 1990-01-02 whose marginal follows
// synthetic_quantile and whose ordering follows a Jacobi path (k = 2.362).
// Deterministic; built once per process.
const MarketSeries& synthetic_history();

// Degree-30 fit to synthetic_history().
const QuantileMap& synthetic_map();

// h(u) = 0.1 + 0.3 u.
QuantileMap linear_map();

// Weekly observations from 2022-11-07 to 2022-12-09 (K = 0.2, r = 0.0374).
struct WeeklyOptionRow {
  double vix;
  double call_price;
  double tau;
  double x_value;
};
const std::vector<WeeklyOptionRow>& weekly_option_rows();
std::vector<OptionObservation> weekly_option_observations();

// Real CBOE history, from $EMPVIX_VIX_HISTORY or the configured default.
std::filesystem::path vix_history_path();
std::optional<MarketSeries> vix_history();

// Writes `text` to a fresh file under the system temp directory.
std::filesystem::path write_temp_file(const std::string& name, const std::string& text);

}  // namespace empvix::testing

#endif  // EMPVIX_TESTS_SUPPORT_FIXTURE_H_
