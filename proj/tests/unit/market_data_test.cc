#include "empvix/market_data.h"

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "empvix/error.h"
#include "support/fixture.h"

namespace empvix {
namespace {

using namespace std::chrono_literals;

MarketSeries parse(const std::string& text) {
  std::istringstream in(text);
  return parse_vix_csv(in, "test.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseVixCsv, QuotedLevelIsConvertedToDecimal) {
  const MarketSeries s = parse("2022-11-07,24.406\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.entries()[0].date, Date{2022y / 11 / 7});
  EXPECT_DOUBLE_EQ(s.entries()[0].level, 0.24406);
}

TEST(ParseVixCsv, DecimalLevelsAreKept) {
  const MarketSeries s = parse("date,close\n2022-11-07,0.24406\n2022-11-08,0.25\n");
  EXPECT_DOUBLE_EQ(s.entries()[0].level, 0.24406);
  EXPECT_DOUBLE_EQ(s.entries()[1].level, 0.25);
}

TEST(ParseVixCsv, EmptyFileHasNoDataRows) {
  EXPECT_NE(error_of("").find("no data rows"), std::string::npos);
  EXPECT_NE(error_of("date,close\n\n").find("no data rows"), std::string::npos);
}

TEST(ParseVixCsv, OutOfOrderRowsAreSorted) {
  const MarketSeries shuffled = parse("2020-01-03,13\n2020-01-01,12\n2020-01-02,14\n");
  const MarketSeries sorted = parse("2020-01-01,12\n2020-01-02,14\n2020-01-03,13\n");
  EXPECT_EQ(shuffled, sorted);
}

TEST(ParseVixCsv, MalformedRowNamesTheLine) {
  const std::string msg = error_of("date,close\n2020-01-01,12\n2020-01-02,abc\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(error_of("2020-13-01,12\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("2020-01-01\n").find("line 1"), std::string::npos);
}

TEST(ParseVixCsv, DuplicateDateIsRejected) {
  EXPECT_NE(error_of("2020-01-01,12\n2020-01-01,13\n").find("duplicate"), std::string::npos);
}

TEST(ParseVixCsv, NonpositiveLevelIsRejected) {
  EXPECT_FALSE(error_of("2020-01-01,0\n").empty());
  EXPECT_FALSE(error_of("2020-01-01,-3\n").empty());
}

TEST(ParseVixCsv, CboeLayoutLoads) {
  const MarketSeries s = parse(
      "DATE,OPEN,HIGH,LOW,CLOSE\n"
      "01/02/1990,17.240000,17.240000,17.240000,17.240000\n"
      "01/03/1990,18.190000,18.190000,18.190000,18.190000\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.entries()[0].date, Date{1990y / 1 / 2});
  EXPECT_DOUBLE_EQ(s.entries()[1].level, 0.1819);
}

TEST(ParseVixCsv, LoadFileAndMissingFile) {
  const auto path = testing::write_temp_file("md_load.csv", "date,close\n2021-03-01,20\n");
  EXPECT_EQ(load_vix_csv(path).size(), 1u);
  try {
    load_vix_csv("/nonexistent/vix.csv");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/vix.csv"), std::string::npos);
  }
}

TEST(MarketSeriesProperty, WriteThenLoadRoundTrips) {
  const MarketSeries& original = testing::synthetic_history();
  std::stringstream buffer;
  write_vix_csv(original, buffer);
  EXPECT_EQ(parse_vix_csv(buffer), original);
}

TEST(MarketSeriesProperty, LevelsStayInDecimalRange) {
  for (const Quote& q : testing::synthetic_history().entries()) {
    EXPECT_GT(q.level, 0.0);
    EXPECT_LT(q.level, 2.0);
  }
  EXPECT_THROW(MarketSeries({{Date{2020y / 1 / 1}, 2.5}}), InputError);
}

TEST(MarketSeries, ConstructorRejectsUnsortedDates) {
  EXPECT_THROW(MarketSeries({{Date{2020y / 1 / 2}, 0.2}, {Date{2020y / 1 / 1}, 0.2}}),
               InputError);
}

TEST(WeeklyAverage, OneEntryPerWeekIsIdentity) {
  const MarketSeries s({{Date{2022y / 11 / 7}, 0.2}, {Date{2022y / 11 / 15}, 0.3},
                        {Date{2022y / 11 / 25}, 0.25}});
  EXPECT_EQ(weekly_average(s), s);
}

TEST(WeeklyAverage, MeanOfTheWeek) {
  const MarketSeries s({{Date{2022y / 11 / 7}, 0.20}, {Date{2022y / 11 / 8}, 0.22}});
  const MarketSeries w = weekly_average(s);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w.entries()[0].level, 0.21, 1e-15);
  EXPECT_EQ(w.entries()[0].date, Date{2022y / 11 / 8});
}

TEST(WeeklyAverage, FiveTradingDaysOfFirstTableWeek) {
  const MarketSeries s({{Date{2022y / 11 / 7}, 0.2403},
                        {Date{2022y / 11 / 8}, 0.2454},
                        {Date{2022y / 11 / 9}, 0.2606},
                        {Date{2022y / 11 / 10}, 0.2310},
                        {Date{2022y / 11 / 11}, 0.2430}});
  const MarketSeries w = weekly_average(s);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NEAR(w.entries()[0].level, 0.24406, 1e-12);
  EXPECT_EQ(w.entries()[0].date, Date{2022y / 11 / 11});
}

TEST(WeeklyAverage, YearBoundaryUsesIsoWeeks) {
  // 2020-12-31 (Thu) and 2021-01-01 (Fri) share ISO week 2020-W53.
  const MarketSeries s({{Date{2020y / 12 / 31}, 0.2}, {Date{2021y / 1 / 1}, 0.4},
                        {Date{2021y / 1 / 4}, 0.3}});
  const MarketSeries w = weekly_average(s);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w.entries()[0].level, 0.3, 1e-15);
}

TEST(WeeklyAverageProperty, LengthIsDistinctIsoWeeks) {
  const MarketSeries& s = testing::synthetic_history();
  std::set<std::pair<int, unsigned>> weeks;
  for (const Quote& q : s.entries()) {
    // Thursday of the same ISO week determines the week-year.
    const std::chrono::sys_days day{q.date};
    const int wd = static_cast<int>(std::chrono::weekday{day}.iso_encoding());
    const std::chrono::sys_days thursday = day + std::chrono::days{4 - wd};
    const Date th{thursday};
    const auto week = (thursday - std::chrono::sys_days{th.year() / 1 / 1}).count() / 7;
    weeks.insert({static_cast<int>(th.year()), static_cast<unsigned>(week)});
  }
  EXPECT_EQ(weekly_average(s).size(), weeks.size());
}

TEST(WeeklyAverage, EmptyInputIsAnError) {
  EXPECT_THROW(weekly_average(MarketSeries{}), InputError);
}

TEST(OptionCsv, ParsesWithHeaderAndRoundTrips) {
  std::istringstream in("t,vix,call_price,tau\n0,0.24406,0.07926,0.364\n0.019,0.23886,0.07966,0.345\n");
  const auto rows = parse_option_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[1].tau, 0.345);
  std::stringstream buffer;
  write_option_csv(rows, buffer);
  const auto again = parse_option_csv(buffer);
  EXPECT_EQ(again[0].call_price, rows[0].call_price);
  EXPECT_EQ(again[1].t, rows[1].t);
}

TEST(OptionCsv, InvariantsAreEnforced) {
  std::istringstream negative("0,0.2,-0.01,0.3\n");
  EXPECT_THROW(parse_option_csv(negative), InputError);
  std::istringstream zero_tau("0,0.2,0.01,0\n");
  EXPECT_THROW(parse_option_csv(zero_tau), InputError);
  std::istringstream zero_vix("0,0,0.01,0.3\n");
  EXPECT_THROW(parse_option_csv(zero_vix), InputError);
}

TEST(ParseDate, BothLayouts) {
  EXPECT_EQ(parse_date("2022-12-30"), Date{2022y / 12 / 30});
  EXPECT_EQ(parse_date("1/2/1990"), Date{1990y / 1 / 2});
  EXPECT_EQ(format_date(Date{1990y / 1 / 2}), "1990-01-02");
  EXPECT_THROW(parse_date("2022-02-30"), InputError);
}

}  // namespace
}  // namespace empvix
