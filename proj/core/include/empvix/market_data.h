#ifndef EMPVIX_MARKET_DATA_H_
#define EMPVIX_MARKET_DATA_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace empvix {

using Date = std::chrono::year_month_day;

// One daily close. `level` is in decimal convention (quoted index / 100).
struct Quote {
  Date date;
  double level = 0.0;

  friend bool operator==(const Quote&, const Quote&) = default;
};

// Dated VIX levels. Dates are strictly increasing; levels are finite and
// lie in (0, 2).
class MarketSeries {
 public:
  MarketSeries() = default;

  // Validates the invariants; throws InputError naming the offending entry.
  explicit MarketSeries(std::vector<Quote> entries);

  // Sorts by date first, then validates (duplicates are still an error).
  static MarketSeries from_unsorted(std::vector<Quote> entries);

  const std::vector<Quote>& entries() const { return entries_; }
  std::vector<double> levels() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const MarketSeries&, const MarketSeries&) = default;

 private:
  std::vector<Quote> entries_;
};

// One row of option data used by calibration: observation time t (years),
// decimal VIX, observed call price and time to expiry tau (years).
struct OptionObservation {
  double t = 0.0;
  double vix = 0.0;
  double call_price = 0.0;
  double tau = 0.0;
};

// Throws InputError unless c >= 0, tau > 0, vix > 0 and all fields finite.
void validate(const OptionObservation& obs);

// Accepts YYYY-MM-DD and the MM/DD/YYYY layout of CBOE's history file.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

// CSV with optional header. Without a header the columns are (date, close).
// With a header the `date` and `close` columns are located by name, so
// CBOE's DATE,OPEN,HIGH,LOW,CLOSE file loads directly. A file whose largest
// level exceeds 2 is taken to be in quoted points and divided by 100.
MarketSeries load_vix_csv(const std::filesystem::path& path);
MarketSeries parse_vix_csv(std::istream& in, std::string_view source = "<stream>");
void write_vix_csv(const MarketSeries& series, std::ostream& out);

// One entry per ISO week: the arithmetic mean of that week's levels, dated
// at the last observation of the week.
MarketSeries weekly_average(const MarketSeries& series);

// Columns t,vix,call_price,tau (header optional, all decimals and years).
std::vector<OptionObservation> load_option_csv(const std::filesystem::path& path);
std::vector<OptionObservation> parse_option_csv(std::istream& in,
                                                std::string_view source = "<stream>");
void write_option_csv(const std::vector<OptionObservation>& rows, std::ostream& out);

}  // namespace empvix

#endif  // EMPVIX_MARKET_DATA_H_
