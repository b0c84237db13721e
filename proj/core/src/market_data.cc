#include "empvix/market_data.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "empvix/error.h"

namespace empvix {

namespace {

using std::chrono::sys_days;

// Quoted VIX has never exceeded 200 points.
constexpr double kMaxDecimalLevel = 2.0;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '"';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool has_letter(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isalpha(c) != 0; });
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

template <typename T>
std::optional<T> parse_int(std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

std::optional<Date> try_parse_date(std::string_view text) {
  text = trim(text);
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    auto yy = parse_int<int>(text.substr(0, 4));
    auto mm = parse_int<unsigned>(text.substr(5, 2));
    auto dd = parse_int<unsigned>(text.substr(8, 2));
    if (!yy || !mm || !dd) return std::nullopt;
    y = *yy;
    m = *mm;
    d = *dd;
  } else {
    // MM/DD/YYYY, month and day possibly without leading zeros.
    const auto s1 = text.find('/');
    const auto s2 = text.find('/', s1 == std::string_view::npos ? s1 : s1 + 1);
    if (s1 == std::string_view::npos || s2 == std::string_view::npos) return std::nullopt;
    auto mm = parse_int<unsigned>(text.substr(0, s1));
    auto dd = parse_int<unsigned>(text.substr(s1 + 1, s2 - s1 - 1));
    auto yy = parse_int<int>(text.substr(s2 + 1));
    if (!yy || !mm || !dd || text.size() - s2 - 1 != 4) return std::nullopt;
    y = *yy;
    m = *mm;
    d = *dd;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

[[noreturn]] void fail_line(std::string_view source, std::size_t line_no,
                            const std::string& what) {
  std::ostringstream msg;
  msg << source << ": line " << line_no << ": " << what;
  throw InputError(msg.str());
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path.string());
  return in;
}

// ISO-8601 (week-based year, week number) of a date.
std::pair<int, unsigned> iso_week(const Date& date) {
  const sys_days day{date};
  const unsigned iso_weekday = std::chrono::weekday{day}.iso_encoding();  // Mon=1..Sun=7
  const sys_days thursday = day + std::chrono::days{4 - static_cast<int>(iso_weekday)};
  const Date th{thursday};
  const sys_days jan1{th.year() / std::chrono::January / 1};
  const auto week = static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
  return {static_cast<int>(th.year()), week};
}

}  // namespace

MarketSeries::MarketSeries(std::vector<Quote> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Quote& q = entries_[i];
    if (!q.date.ok()) throw InputError("invalid calendar date at entry " + std::to_string(i));
    if (!std::isfinite(q.level) || q.level <= 0.0) {
      throw InputError("nonpositive or non-finite level on " + format_date(q.date));
    }
    if (q.level >= kMaxDecimalLevel) {
      throw InputError("level " + std::to_string(q.level) + " on " + format_date(q.date) +
                       " is not in decimal convention (must be < 2)");
    }
    if (i > 0) {
      const Date& prev = entries_[i - 1].date;
      if (prev == q.date) throw InputError("duplicate date " + format_date(q.date));
      if (prev > q.date) {
        throw InputError("dates not increasing at " + format_date(q.date));
      }
    }
  }
}

MarketSeries MarketSeries::from_unsorted(std::vector<Quote> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Quote& a, const Quote& b) { return a.date < b.date; });
  return MarketSeries(std::move(entries));
}

std::vector<double> MarketSeries::levels() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const Quote& q : entries_) out.push_back(q.level);
  return out;
}

void validate(const OptionObservation& obs) {
  if (!std::isfinite(obs.t) || !std::isfinite(obs.vix) || !std::isfinite(obs.call_price) ||
      !std::isfinite(obs.tau)) {
    throw InputError("option observation has non-finite fields");
  }
  if (obs.call_price < 0.0) throw InputError("option observation: negative call price");
  if (obs.tau <= 0.0) throw InputError("option observation: time to expiry must be > 0");
  if (obs.vix <= 0.0) throw InputError("option observation: VIX level must be > 0");
}

Date parse_date(std::string_view text) {
  if (auto d = try_parse_date(text)) return *d;
  throw InputError("unparseable date '" + std::string(text) + "'");
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

MarketSeries parse_vix_csv(std::istream& in, std::string_view source) {
  std::vector<Quote> rows;
  std::size_t date_col = 0;
  std::size_t close_col = 1;
  bool first_content_line = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (first_content_line) {
      first_content_line = false;
      if (has_letter(fields[0])) {
        // Header row: locate columns by name, defaulting to the first two.
        for (std::size_t i = 0; i < fields.size(); ++i) {
          const std::string name = lower(fields[i]);
          if (name == "date") date_col = i;
          if (name == "close" || name == "vix") close_col = i;
        }
        continue;
      }
    }
    if (fields.size() <= std::max(date_col, close_col)) {
      fail_line(source, line_no, "expected at least " +
                                     std::to_string(std::max(date_col, close_col) + 1) +
                                     " columns");
    }
    const auto date = try_parse_date(fields[date_col]);
    if (!date) fail_line(source, line_no, "unparseable date '" + std::string(fields[date_col]) + "'");
    const auto level = parse_double(fields[close_col]);
    if (!level) {
      fail_line(source, line_no, "unparseable level '" + std::string(fields[close_col]) + "'");
    }
    if (!std::isfinite(*level) || *level <= 0.0) {
      fail_line(source, line_no, "nonpositive level " + std::string(fields[close_col]));
    }
    rows.push_back({*date, *level});
  }
  if (rows.empty()) throw InputError(std::string(source) + ": no data rows");

  double max_level = 0.0;
  for (const Quote& q : rows) max_level = std::max(max_level, q.level);
  if (max_level > kMaxDecimalLevel) {
    for (Quote& q : rows) q.level /= 100.0;
  }
  return MarketSeries::from_unsorted(std::move(rows));
}

MarketSeries load_vix_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_vix_csv(in, path.string());
}

void write_vix_csv(const MarketSeries& series, std::ostream& out) {
  out << "date,close\n";
  char buf[64];
  for (const Quote& q : series.entries()) {
    std::snprintf(buf, sizeof(buf), "%.17g", q.level);
    out << format_date(q.date) << ',' << buf << '\n';
  }
}

MarketSeries weekly_average(const MarketSeries& series) {
  if (series.empty()) throw InputError("weekly_average: empty series");
  std::vector<Quote> out;
  const auto& entries = series.entries();
  std::size_t begin = 0;
  while (begin < entries.size()) {
    const auto week = iso_week(entries[begin].date);
    std::size_t end = begin + 1;
    while (end < entries.size() && iso_week(entries[end].date) == week) ++end;
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += entries[i].level;
    out.push_back({entries[end - 1].date, sum / static_cast<double>(end - begin)});
    begin = end;
  }
  return MarketSeries(std::move(out));
}

std::vector<OptionObservation> parse_option_csv(std::istream& in, std::string_view source) {
  std::vector<OptionObservation> rows;
  std::size_t cols[4] = {0, 1, 2, 3};
  bool first_content_line = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (first_content_line) {
      first_content_line = false;
      if (has_letter(fields[0])) {
        static constexpr std::string_view kNames[4] = {"t", "vix", "call_price", "tau"};
        for (std::size_t i = 0; i < fields.size(); ++i) {
          const std::string name = lower(fields[i]);
          for (std::size_t c = 0; c < 4; ++c) {
            if (name == kNames[c]) cols[c] = i;
          }
        }
        continue;
      }
    }
    double values[4];
    for (std::size_t c = 0; c < 4; ++c) {
      if (cols[c] >= fields.size()) fail_line(source, line_no, "expected 4 columns");
      const auto v = parse_double(fields[cols[c]]);
      if (!v) fail_line(source, line_no, "unparseable number '" + std::string(fields[cols[c]]) + "'");
      values[c] = *v;
    }
    OptionObservation obs{values[0], values[1], values[2], values[3]};
    try {
      validate(obs);
    } catch (const InputError& e) {
      fail_line(source, line_no, e.what());
    }
    rows.push_back(obs);
  }
  if (rows.empty()) throw InputError(std::string(source) + ": no data rows");
  return rows;
}

std::vector<OptionObservation> load_option_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_option_csv(in, path.string());
}

void write_option_csv(const std::vector<OptionObservation>& rows, std::ostream& out) {
  out << "t,vix,call_price,tau\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.t, r.vix, r.call_price, r.tau);
    out << buf;
  }
}

}  // namespace empvix
