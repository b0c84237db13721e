#include "empvix/empirical_map.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include "empvix/error.h"
#include "empvix/legendre.h"

namespace empvix {

namespace {

using nlohmann::json;

double grid_u(int i) { return static_cast<double>(i) / (kFitGridPoints - 1); }

// Absolute floor so a constant h does not fail on rounding noise.
constexpr double kMonotoneAbsoluteFloor = 1e-12;

// Largest |R_ii| / smallest |R_ii| accepted from the QR factorization.
constexpr double kMaxConditionRatio = 1e10;

struct GridScan {
  double worst_decrease = 0.0;
  double worst_decrease_u = 0.0;
  double min_value = 0.0;
};

GridScan scan_grid(std::span<const double> coeffs) {
  GridScan scan;
  double prev = legendre_series_eval(coeffs, -1.0);
  scan.min_value = prev;
  for (int i = 1; i < kFitGridPoints; ++i) {
    const double u = grid_u(i);
    const double v = legendre_series_eval(coeffs, 2.0 * u - 1.0);
    if (prev - v > scan.worst_decrease) {
      scan.worst_decrease = prev - v;
      scan.worst_decrease_u = u;
    }
    scan.min_value = std::min(scan.min_value, v);
    prev = v;
  }
  return scan;
}

double monotone_tolerance(double h_min, double h_max) {
  return kMonotoneTolerance * std::fabs(h_max - h_min) + kMonotoneAbsoluteFloor;
}

}  // namespace

// ---------------------------------------------------------------------------
// StepCdf

StepCdf::StepCdf(std::vector<double> levels) : sorted_(std::move(levels)) {
  if (sorted_.empty()) throw InputError("ecdf: empty sample");
  for (double v : sorted_) {
    if (!std::isfinite(v)) throw InputError("ecdf: non-finite sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double StepCdf::operator()(double c) const {
  const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), c) - sorted_.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

double StepCdf::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("quantile: probability " + std::to_string(u) + " outside [0, 1]");
  }
  // Smallest count j in [1, n] with j / n >= u, using the same division as
  // operator() so quantile(F(x_i)) == x_i exactly.
  const double n = static_cast<double>(sorted_.size());
  std::size_t lo = 1;
  std::size_t hi = sorted_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (static_cast<double>(mid) / n >= u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return sorted_[lo - 1];
}

StepCdf ecdf(const MarketSeries& series) {
  if (series.empty()) throw InputError("ecdf: empty series");
  return StepCdf(series.levels());
}

// ---------------------------------------------------------------------------
// QuantileMap

QuantileMap::QuantileMap(std::vector<double> legendre_coeffs, std::string source_hash)
    : coeffs_(std::move(legendre_coeffs)), source_hash_(std::move(source_hash)) {
  if (coeffs_.empty()) throw FitError("quantile map needs at least one coefficient");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw FitError("quantile map has a non-finite coefficient");
  }
  h_min_ = legendre_series_eval(coeffs_, -1.0);
  h_max_ = legendre_series_eval(coeffs_, 1.0);
  const GridScan scan = scan_grid(coeffs_);
  worst_decrease_ = scan.worst_decrease;
  if (!(scan.min_value > 0.0)) {
    throw FitError("quantile map is not positive on [0, 1] (minimum " +
                   std::to_string(scan.min_value) + ")");
  }
  if (scan.worst_decrease > monotone_tolerance(h_min_, h_max_)) {
    std::ostringstream msg;
    msg << "quantile map is not monotone: h decreases by " << scan.worst_decrease
        << " between grid points near u = " << scan.worst_decrease_u
        << " (tolerance " << monotone_tolerance(h_min_, h_max_) << ")";
    throw FitError(msg.str());
  }
}

QuantileMap QuantileMap::from_monomial(std::span<const double> coeffs, std::string source_hash) {
  using Wide = boost::multiprecision::cpp_bin_float_100;
  if (coeffs.empty()) throw FitError("quantile map needs at least one coefficient");
  const std::size_t size = coeffs.size();
  // u = (x + 1) / 2: sum_i c_i 2^-i sum_j C(i, j) x^j.
  std::vector<Wide> in_x(size, Wide(0));
  for (std::size_t i = 0; i < size; ++i) {
    Wide scaled = Wide(coeffs[i]) / pow(Wide(2), static_cast<int>(i));
    Wide binom = 1;
    for (std::size_t j = 0; j <= i; ++j) {
      in_x[j] += scaled * binom;
      binom = binom * Wide(i - j) / Wide(j + 1);
    }
  }
  const std::vector<Wide> wide = monomial_to_legendre_coeffs(in_x);
  std::vector<double> out(size);
  for (std::size_t n = 0; n < size; ++n) out[n] = static_cast<double>(wide[n]);
  return QuantileMap(std::move(out), std::move(source_hash));
}

double QuantileMap::operator()(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("h_eval: u = " + std::to_string(u) + " outside [0, 1]");
  }
  return legendre_series_eval(coeffs_, 2.0 * u - 1.0);
}

double QuantileMap::tilde(double x) const {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw DomainError("h~: x = " + std::to_string(x) + " outside [-1, 1]");
  }
  return legendre_series_eval(coeffs_, x);
}

double h_eval(const QuantileMap& map, double u) { return map(u); }

double h_inverse(const QuantileMap& map, double vix) {
  if (!(vix >= map.h_min() && vix <= map.h_max())) {
    std::ostringstream msg;
    msg << "h_inverse: VIX " << vix << " outside fitted range [" << map.h_min() << ", "
        << map.h_max() << "]";
    throw DomainError(msg.str());
  }
  // Bisect u in [0, 1] down to adjacent doubles; h(lo) < vix <= h(hi).
  double lo = 0.0;
  double hi = 1.0;
  const auto& coeffs = map.legendre_coeffs();
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (legendre_series_eval(coeffs, 2.0 * mid - 1.0) < vix) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double f_lo = legendre_series_eval(coeffs, 2.0 * lo - 1.0);
  const double f_hi = legendre_series_eval(coeffs, 2.0 * hi - 1.0);
  const double u = (std::fabs(f_lo - vix) < std::fabs(f_hi - vix)) ? lo : hi;
  return 2.0 * u - 1.0;
}

// ---------------------------------------------------------------------------
// Fitting

QuantileFit fit_quantile_least_squares(const StepCdf& cdf, int degree) {
  if (degree < 0) throw FitError("fit: degree must be >= 0");
  const auto cols = static_cast<Eigen::Index>(degree) + 1;
  if (cdf.size() < static_cast<std::size_t>(cols)) {
    throw FitError("fit: " + std::to_string(cdf.size()) + " samples cannot determine a degree-" +
                   std::to_string(degree) + " polynomial");
  }
  if (cols > kFitGridPoints) throw FitError("fit: degree exceeds the fit grid size");

  Eigen::MatrixXd design(kFitGridPoints, cols);
  Eigen::VectorXd target(kFitGridPoints);
  std::vector<double> row(static_cast<std::size_t>(cols));
  for (int i = 0; i < kFitGridPoints; ++i) {
    const double u = grid_u(i);
    legendre_values(2.0 * u - 1.0, row);
    for (Eigen::Index j = 0; j < cols; ++j) design(i, j) = row[static_cast<std::size_t>(j)];
    target(i) = cdf.quantile(u);
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
  if (sigma.minCoeff() == 0.0 || sigma.maxCoeff() / sigma.minCoeff() > kMaxConditionRatio) {
    throw FitError("fit: least-squares system is ill-conditioned at degree " +
                   std::to_string(degree) + "; try a lower degree");
  }
  const Eigen::VectorXd solution = qr.solve(target);

  QuantileFit fit;
  fit.legendre_coeffs.assign(solution.data(), solution.data() + solution.size());
  for (double c : fit.legendre_coeffs) {
    if (!std::isfinite(c)) throw FitError("fit: non-finite coefficient; try a lower degree");
  }
  for (int i = 0; i < kFitGridPoints; ++i) {
    const double v = legendre_series_eval(fit.legendre_coeffs, 2.0 * grid_u(i) - 1.0);
    fit.max_deviation = std::max(fit.max_deviation, std::fabs(v - target(i)));
  }
  const GridScan scan = scan_grid(fit.legendre_coeffs);
  fit.worst_decrease = scan.worst_decrease;
  fit.worst_decrease_u = scan.worst_decrease_u;
  fit.min_value = scan.min_value;
  fit.h_min = legendre_series_eval(fit.legendre_coeffs, -1.0);
  fit.h_max = legendre_series_eval(fit.legendre_coeffs, 1.0);
  return fit;
}

QuantileMap fit_quantile_polynomial(const StepCdf& cdf, int degree, std::string source_hash) {
  QuantileFit fit = fit_quantile_least_squares(cdf, degree);
  return QuantileMap(std::move(fit.legendre_coeffs), std::move(source_hash));
}

std::string source_hash(const MarketSeries& series) {
  std::ostringstream csv;
  write_vix_csv(series, csv);
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : csv.str()) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const QuantileMap& map) {
  json j;
  j["degree"] = map.degree();
  j["basis"] = "legendre_x";
  j["coeffs"] = map.legendre_coeffs();
  j["h_min"] = map.h_min();
  j["h_max"] = map.h_max();
  j["source_hash"] = map.source_hash();
  return j.dump(2);
}

QuantileMap quantile_map_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const auto coeffs = j.at("coeffs").get<std::vector<double>>();
    const int degree = j.at("degree").get<int>();
    if (static_cast<int>(coeffs.size()) != degree + 1) {
      throw InputError("model file: degree " + std::to_string(degree) + " but " +
                       std::to_string(coeffs.size()) + " coefficients");
    }
    const std::string basis = j.value("basis", "legendre_x");
    const std::string hash = j.value("source_hash", "");
    QuantileMap map = [&] {
      if (basis == "legendre_x") return QuantileMap(coeffs, hash);
      if (basis == "monomial_u") return QuantileMap::from_monomial(coeffs, hash);
      throw InputError("model file: unknown basis '" + basis + "'");
    }();
    for (const auto& [key, actual] :
         {std::pair{"h_min", map.h_min()}, std::pair{"h_max", map.h_max()}}) {
      if (!j.contains(key)) continue;
      const double stored = j.at(key).get<double>();
      if (std::fabs(stored - actual) > 1e-9 * std::max(1.0, std::fabs(actual))) {
        throw InputError(std::string("model file: stored ") + key +
                         " does not match the coefficients");
      }
    }
    return map;
  } catch (const json::exception& e) {
    throw InputError(std::string("model file: ") + e.what());
  } catch (const FitError& e) {
    throw InputError(std::string("model file: ") + e.what());
  }
}

void save_quantile_map(const QuantileMap& map, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file: " + path.string());
  out << to_json(map) << '\n';
  if (!out) throw InputError("failed writing model file: " + path.string());
}

QuantileMap load_quantile_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return quantile_map_from_json(buffer.str());
}

}  // namespace empvix
