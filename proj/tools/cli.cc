#include "cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "empvix/calibrator.h"
#include "empvix/empirical_map.h"
#include "empvix/error.h"
#include "empvix/jacobi_diffusion.h"
#include "empvix/market_data.h"
#include "empvix/spectral_pricer.h"
#include "empvix/three_halves.h"

namespace empvix::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Flags shared by the empirical-model pricing commands.
struct ModelFlags {
  std::string model_file;
  double k = 2.362;
  double r = 0.0;
  double T = 1.0 / 6.0;
  double t = 0.0;
  double K = 0.2;
};

void add_model_flags(CLI::App* cmd, ModelFlags* f, bool with_strike_and_rate = true) {
  cmd->add_option("--model-file,--model", f->model_file, "QuantileMap JSON written by `fit`")
      ->required();
  cmd->add_option("--k", f->k, "factor mean-reversion speed k [1/years]")->capture_default_str();
  cmd->add_option("--T", f->T, "maturity T [years]")->capture_default_str();
  cmd->add_option("--t", f->t, "pricing time t [years], 0 <= t <= T")->capture_default_str();
  if (with_strike_and_rate) {
    cmd->add_option("--r", f->r, "risk-free rate r [1/years]")->capture_default_str();
    cmd->add_option("--K", f->K, "strike K [decimal VIX, e.g. 0.2]")->capture_default_str();
  }
}

struct FitFlags {
  std::string data;
  int degree = 30;
  std::string out;
};

int cmd_fit(const FitFlags& f, std::ostream& out, std::ostream& err) {
  const MarketSeries series = load_vix_csv(f.data);
  const StepCdf cdf = ecdf(series);
  const QuantileFit fit = fit_quantile_least_squares(cdf, f.degree);
  json diag;
  diag["degree"] = f.degree;
  diag["samples"] = series.size();
  diag["max_deviation"] = fit.max_deviation;
  diag["max_monotonicity_violation"] = fit.worst_decrease;
  diag["h_min"] = fit.h_min;
  diag["h_max"] = fit.h_max;
  const QuantileMap map = fit_quantile_polynomial(cdf, f.degree, source_hash(series));
  save_quantile_map(map, f.out);
  diag["out"] = f.out;
  err << "fit: degree " << f.degree << " on " << series.size() << " observations -> " << f.out
      << '\n';
  out << diag.dump(2) << '\n';
  return kOk;
}

struct PriceFlags {
  ModelFlags model;
  double vix = 0.2;
  int terms = kDefaultTerms;
  std::string instrument = "futures";
};

int cmd_price(const PriceFlags& f, std::ostream& out) {
  const QuantileMap map = load_quantile_map(f.model.model_file);
  const double x = h_inverse(map, f.vix);
  const PricingParams params{f.model.k, f.model.r, f.model.T, f.model.K};
  double price = 0.0;
  if (f.instrument == "futures") {
    price = price_futures(f.model.t, x, project_futures(map, f.terms), params);
  } else if (f.instrument == "call") {
    price = price_call(f.model.t, x, project_call(map, f.model.K, f.terms), params);
  } else {
    price = price_put(f.model.t, x, project_put(map, f.model.K, f.terms), params);
  }
  json j;
  j["price"] = price;
  j["x"] = x;
  j["terms"] = f.terms;
  out << j.dump() << '\n';
  return kOk;
}

struct TablesFlags {
  ModelFlags model;
  std::vector<double> vix = {0.1, 0.3, 0.5, 0.7};
  std::vector<int> terms = {6, 11, 21, 31};
};

int cmd_tables(const TablesFlags& f, std::ostream& out) {
  const QuantileMap map = load_quantile_map(f.model.model_file);
  const PricingParams params{f.model.k, f.model.r, f.model.T, f.model.K};
  const TruncationReport report = truncation_report(map, f.vix, f.terms, f.model.t, params);
  out << "instrument,vix,x";
  for (int n : report.term_counts) out << ",terms_" << n;
  out << '\n';
  for (const auto& [name, table] :
       {std::pair{"futures", &report.futures}, std::pair{"call", &report.calls}}) {
    for (std::size_t r = 0; r < report.vix_levels.size(); ++r) {
      out << name << ',' << fmt(report.vix_levels[r]) << ',' << fmt(report.factor_values[r]);
      for (double v : (*table)[r]) out << ',' << fmt(v);
      out << '\n';
    }
  }
  return kOk;
}

struct SimulateFlags {
  double k = 2.362;
  double years = 33.0;
  double dt = 1.0 / 2520.0;
  double x0 = 0.0;
  std::uint64_t seed = 1;
  std::string model_file;
  std::size_t every = 1;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
  std::optional<QuantileMap> map;
  if (!f.model_file.empty()) map = load_quantile_map(f.model_file);
  const SamplePath path = simulate_path({f.k, f.x0}, f.years, f.dt, f.seed);
  out << (map ? "time,x,vix\n" : "time,x\n");
  const std::size_t stride = std::max<std::size_t>(f.every, 1);
  for (std::size_t i = 0; i < path.states.size(); i += stride) {
    out << fmt(path.times[i]) << ',' << fmt(path.states[i]);
    if (map) out << ',' << fmt((*map)(0.5 * (path.states[i] + 1.0)));
    out << '\n';
  }
  return kOk;
}

struct CalibrateFlags {
  std::string model_file;
  std::string observations;
  double K = 0.2;
  double r = 0.0374;
  double k_lo = 1e-3;
  double k_hi = 50.0;
  int terms = kDefaultTerms;
};

int cmd_calibrate(const CalibrateFlags& f, std::ostream& out, std::ostream& err) {
  CalibrationProblem problem{load_option_csv(f.observations), load_quantile_map(f.model_file),
                             f.r, f.K, f.k_lo, f.k_hi, f.terms};
  const CalibrationReport report = calibrate_k(problem);
  json j;
  j["k_hat"] = report.k_hat;
  j["sse"] = report.sse;
  j["residuals"] = report.residuals;
  j["at_bound"] = report.at_bound;
  out << j.dump(2) << '\n';
  if (report.at_bound) {
    err << "calibrate: k_hat lies on the search bound; widen --k-lo/--k-hi\n";
    return kCalibrationAtBound;
  }
  return kOk;
}

struct Calibrate32Flags {
  std::string observations;
  double k32 = 2.04;
  double K = 0.2;
  double r = 0.0374;
};

int cmd_calibrate32(const Calibrate32Flags& f, std::ostream& out) {
  const ThreeHalvesFit fit = calibrate_32(load_option_csv(f.observations), f.k32, f.K, f.r);
  json j;
  j["alpha"] = fit.alpha;
  j["beta"] = fit.beta;
  j["sse"] = fit.sse;
  out << j.dump(2) << '\n';
  return kOk;
}

struct Compare32Flags {
  ModelFlags model;
  double alpha = 0.9;
  double beta = -3.82;
  double k32 = 2.04;
  double v_min = 0.1;
  double v_max = 0.8;
  double v_step = 0.01;
};

int cmd_compare32(const Compare32Flags& f, std::ostream& out, std::ostream& err) {
  const QuantileMap map = load_quantile_map(f.model.model_file);
  const PricingParams params{f.model.k, f.model.r, f.model.T, f.model.K};
  const SpectralCoeffs call = project_call(map, f.model.K);
  ThreeHalvesParams p32;
  p32.alpha = f.alpha;
  p32.beta = f.beta;
  p32.k32 = f.k32;
  p32.r = f.model.r;
  p32.K = f.model.K;
  p32.T = f.model.T;
  p32.t = f.model.t;
  if (!(f.v_step > 0.0)) throw DomainError("--v-step must be > 0");
  out << "V,empirical_price,three_halves_price\n";
  const auto steps = static_cast<int>(std::floor((f.v_max - f.v_min) / f.v_step + 1e-9));
  int skipped = 0;
  for (int i = 0; i <= steps; ++i) {
    const double v = f.v_min + i * f.v_step;
    if (v < map.h_min() || v > map.h_max()) {
      ++skipped;
      continue;
    }
    const double empirical = price_call(f.model.t, h_inverse(map, v), call, params);
    out << fmt(v) << ',' << fmt(empirical) << ',' << fmt(price_call_32(v, p32)) << '\n';
  }
  if (skipped > 0) {
    err << "compare32: skipped " << skipped << " V values outside the fitted range ["
        << map.h_min() << ", " << map.h_max() << "]\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Empirical Markov model for the VIX: fit, price, simulate, calibrate"};
  app.require_subcommand(1);

  FitFlags fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit the quantile polynomial h to VIX history");
  fit_cmd->add_option("--data", fit.data, "VIX history CSV (date,close)")->required();
  fit_cmd->add_option("--degree", fit.degree, "polynomial degree of h")->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "output QuantileMap JSON path")->required();

  PriceFlags price;
  auto* price_cmd = app.add_subcommand("price", "price a VIX futures, call or put");
  add_model_flags(price_cmd, &price.model);
  price_cmd->add_option("--vix", price.vix, "current VIX level [decimal]")->required();
  price_cmd->add_option("--terms", price.terms, "number of Legendre terms (orders 0..terms-1)")
      ->capture_default_str();
  price_cmd->add_option("--instrument", price.instrument, "futures | call | put")
      ->check(CLI::IsMember({"futures", "call", "put"}))
      ->capture_default_str();

  TablesFlags tables;
  auto* tables_cmd = app.add_subcommand("tables", "futures and call prices by VIX level and term count (CSV)");
  add_model_flags(tables_cmd, &tables.model);
  tables_cmd->add_option("--vix-levels", tables.vix, "VIX levels [decimal]")->delimiter(',');
  tables_cmd->add_option("--term-counts", tables.terms, "series term counts")->delimiter(',');

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Euler sample path of the factor (CSV)");
  sim_cmd->add_option("--k", sim.k, "mean-reversion speed k [1/years]")->capture_default_str();
  sim_cmd->add_option("--years", sim.years, "horizon [years]")->capture_default_str();
  sim_cmd->add_option("--dt", sim.dt, "time step [years]")->capture_default_str();
  sim_cmd->add_option("--x0", sim.x0, "initial factor value in (-1, 1)")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--model-file,--model", sim.model_file,
                      "QuantileMap JSON; adds the vix = h((x+1)/2) column");
  sim_cmd->add_option("--every", sim.every, "write every n-th step")->capture_default_str();

  CalibrateFlags cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "least-squares fit of k to call prices");
  cal_cmd->add_option("--model-file,--model", cal.model_file, "QuantileMap JSON")->required();
  cal_cmd->add_option("--observations", cal.observations, "CSV t,vix,call_price,tau [years, decimal]")
      ->required();
  cal_cmd->add_option("--K", cal.K, "strike [decimal VIX]")->capture_default_str();
  cal_cmd->add_option("--r", cal.r, "risk-free rate [1/years]")->capture_default_str();
  cal_cmd->add_option("--k-lo", cal.k_lo, "lower search bound for k [1/years]")->capture_default_str();
  cal_cmd->add_option("--k-hi", cal.k_hi, "upper search bound for k [1/years]")->capture_default_str();
  cal_cmd->add_option("--terms", cal.terms, "number of Legendre terms")->capture_default_str();

  Calibrate32Flags cal32;
  auto* cal32_cmd = app.add_subcommand("calibrate32", "least-squares fit of the 3/2 model's (alpha, beta)");
  cal32_cmd->add_option("--observations", cal32.observations, "CSV t,vix,call_price,tau [years, decimal]")
      ->required();
  cal32_cmd->add_option("--k32", cal32.k32, "3/2 volatility coefficient (held fixed)")->capture_default_str();
  cal32_cmd->add_option("--K", cal32.K, "strike [decimal VIX]")->capture_default_str();
  cal32_cmd->add_option("--r", cal32.r, "risk-free rate [1/years]")->capture_default_str();

  Compare32Flags cmp;
  auto* cmp_cmd = app.add_subcommand("compare32", "empirical vs 3/2 call prices over V (CSV)");
  add_model_flags(cmp_cmd, &cmp.model);
  cmp_cmd->add_option("--alpha", cmp.alpha, "3/2 linear drift alpha [1/years]")->capture_default_str();
  cmp_cmd->add_option("--beta", cmp.beta, "3/2 quadratic drift beta (< 0)")->capture_default_str();
  cmp_cmd->add_option("--k32", cmp.k32, "3/2 volatility coefficient")->capture_default_str();
  cmp_cmd->add_option("--v-min", cmp.v_min, "smallest VIX level [decimal]")->capture_default_str();
  cmp_cmd->add_option("--v-max", cmp.v_max, "largest VIX level [decimal]")->capture_default_str();
  cmp_cmd->add_option("--v-step", cmp.v_step, "VIX grid step [decimal]")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out, err);
    if (*price_cmd) return cmd_price(price, out);
    if (*tables_cmd) return cmd_tables(tables, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*cal_cmd) return cmd_calibrate(cal, out, err);
    if (*cal32_cmd) return cmd_calibrate32(cal32, out);
    if (*cmp_cmd) return cmd_compare32(cmp, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace empvix::cli
