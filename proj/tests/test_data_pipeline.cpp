#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "levyou/data_pipeline.hpp"

using namespace levyou;

namespace {

LoadedPrices load(const std::string& text, std::string_view column = "close") {
  std::istringstream in(text);
  return load_prices(in, column);
}

using Days = std::vector<std::vector<double>>;

PriceSeries series(std::vector<Timestamp> t, std::vector<double> p) { return {std::move(t), std::move(p)}; }

}  // namespace

TEST(Timestamps, IsoAndVendorAgree) {
  const Timestamp t = parse_timestamp("2015-03-02T09:30:00");
  EXPECT_EQ(parse_timestamp("2015-03-02 09:30"), t);
  EXPECT_EQ(parse_timestamp("2015-03-02T09:30:00Z"), t);
  EXPECT_EQ(parse_vendor_timestamp("20150302", "930"), t);
  EXPECT_EQ(format_timestamp(t), "2015-03-02T09:30:00");
  EXPECT_EQ(parse_timestamp("1970-01-01"), 0);
  EXPECT_THROW(parse_timestamp("03/02/2015"), DataError);
  EXPECT_THROW(parse_vendor_timestamp("2015032", "930"), DataError);
}

TEST(LoadPrices, BlankPriceDropped) {
  const auto r = load(
      "timestamp,open,high,low,close\n"
      "2015-01-02,1,1,1,10\n"
      "2015-01-05,1,1,1,\n"
      "2015-01-06,1,1,1,11\n");
  EXPECT_EQ(r.series.size(), 2u);
  EXPECT_EQ(r.report.dropped, 1u);
  EXPECT_EQ(r.report.rows, 3u);
  EXPECT_EQ(r.series.prices, (std::vector<double>{10, 11}));
}

TEST(LoadPrices, NonPositivePriceDropped) {
  const auto r = load("timestamp,price\n2015-01-02,0\n2015-01-05,-3\n2015-01-06,4\n");
  EXPECT_EQ(r.series.size(), 1u);
  EXPECT_EQ(r.report.dropped, 2u);
}

TEST(LoadPrices, DuplicateTimestampLaterRowWins) {
  const auto r = load("timestamp,price\n2015-01-02,10\n2015-01-05,11\n2015-01-05,12\n");
  EXPECT_EQ(r.series.prices, (std::vector<double>{10, 12}));
  EXPECT_EQ(r.report.duplicates, 1u);
  EXPECT_FALSE(r.report.warnings.empty());
}

TEST(LoadPrices, UnsortedRowsSortedStablyBeforeDedup) {
  const auto r = load(
      "timestamp,price\n"
      "2015-01-06,3\n"
      "2015-01-02,1\n"
      "2015-01-06,4\n"
      "2015-01-05,2\n");
  EXPECT_TRUE(r.report.resorted);
  EXPECT_EQ(r.series.prices, (std::vector<double>{1, 2, 4}));
  EXPECT_EQ(r.series.timestamps[0], parse_timestamp("2015-01-02"));
}

TEST(LoadPrices, ColumnSelectionAndVendorLayout) {
  const std::string text =
      "Date,Time,Open,High,Low,Close,Volume\n"
      "20150302,930,10,11,9,10.5,100\n"
      "20150302,931,10.5,11,10,10.25,100\n";
  EXPECT_EQ(load(text).series.prices, (std::vector<double>{10.5, 10.25}));
  EXPECT_EQ(load(text, "open").series.prices, (std::vector<double>{10, 10.5}));
  EXPECT_THROW(load(text, "vwap"), DataError);
}

TEST(LoadPrices, Errors) {
  EXPECT_THROW(load(""), DataError);
  EXPECT_THROW(load("when,price\n2015-01-02,1\n"), DataError);
  EXPECT_THROW(load("timestamp,price\n2015-01-02,\n"), DataError);
  EXPECT_THROW(load("timestamp,price\nyesterday,1\n"), DataError);
}

TEST(LoadPrices, SerializeRoundTripIsIdempotent) {
  const auto first = load(
      "timestamp,open,high,low,close\n"
      "2015-01-05T10:00:00,1,1,1,3.3333333333333335\n"
      "2015-01-02T09:35:00,1,1,1,10.1\n"
      "2015-01-06T16:00:00,1,1,1,0.1\n");
  std::ostringstream os;
  write_prices(os, first.series);
  const auto second = load(os.str());
  EXPECT_EQ(second.series, first.series);
  std::ostringstream os2;
  write_prices(os2, second.series);
  EXPECT_EQ(os2.str(), os.str());
}

TEST(Spread, IdenticalSeriesGiveZero) {
  const auto a = series({1, 2, 3}, {10, 12, 9});
  for (double v : pair_spread(a, a).values) EXPECT_EQ(v, 0.0);
}

TEST(Spread, DoublingStock) {
  const auto s = pair_spread(series({1, 2}, {5, 10}), series({1, 2}, {7, 7}));
  EXPECT_EQ(s.values.front(), 0.0);
  EXPECT_DOUBLE_EQ(s.values.back(), std::log(2.0));
}

TEST(Spread, AntisymmetricExactly) {
  const auto a = series({1, 2, 3, 5, 8}, {10.3, 11.7, 9.1, 12.4, 13.9});
  const auto b = series({1, 3, 4, 5, 8}, {55.5, 54.2, 57.0, 53.3, 58.8});
  const auto ab = pair_spread(a, b), ba = pair_spread(b, a);
  EXPECT_EQ(ab.timestamps, (std::vector<Timestamp>{1, 3, 5, 8}));
  ASSERT_EQ(ab.values.size(), ba.values.size());
  for (std::size_t i = 0; i < ab.values.size(); ++i) EXPECT_EQ(ab.values[i], -ba.values[i]);
}

TEST(Spread, NoOverlapIsAnError) {
  EXPECT_THROW(pair_spread(series({1, 2}, {1, 1}), series({3, 4}, {1, 1})), DataError);
}

TEST(RealizedVolatility, Examples) {
  EXPECT_EQ(realized_volatility(Days{{-0.02}}), (std::vector<double>{0.02}));
  EXPECT_NEAR(realized_volatility(Days{{0.01, -0.01}})[0], 0.014142135623730951, 1e-15);
  EXPECT_EQ(realized_volatility(Days{{0.0, 0.0, 0.0}})[0], 0.0);
}

TEST(RealizedVolatility, ReversalInvariant) {
  const std::vector<double> r{0.001, -0.003, 0.0025, 0.0007, -0.0011};
  const std::vector<double> rev(r.rbegin(), r.rend());
  EXPECT_NEAR(realized_volatility(Days{r})[0], realized_volatility(Days{rev})[0], 1e-18);
}

TEST(RealizedVolatility, EmptyDaysSkippedWithWarning) {
  std::vector<std::string> warnings;
  const auto rv = realized_volatility(Days{{0.01}, {}, {0.02}}, &warnings);
  EXPECT_EQ(rv.size(), 2u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(IntradayReturns, FiveMinuteMarksWithinDays) {
  const Timestamp d0 = parse_timestamp("2015-03-02");
  const Timestamp d1 = parse_timestamp("2015-03-03");
  PriceSeries s;
  // day 0: 09:30, 09:31 (off-mark), 09:35, 09:40; day 1: 09:30, 09:35
  for (auto [t, p] : std::vector<std::pair<Timestamp, double>>{{d0 + 34200, 100},
                                                               {d0 + 34260, 999},
                                                               {d0 + 34500, 101},
                                                               {d0 + 34800, 100},
                                                               {d1 + 34200, 50},
                                                               {d1 + 34500, 55}}) {
    s.timestamps.push_back(t);
    s.prices.push_back(p);
  }
  const auto dr = intraday_returns(s, 300);
  ASSERT_EQ(dr.days.size(), 2u);
  EXPECT_EQ(dr.days[0], d0);
  ASSERT_EQ(dr.returns[0].size(), 2u);
  EXPECT_NEAR(dr.returns[0][0], std::log(101.0 / 100.0), 1e-15);
  ASSERT_EQ(dr.returns[1].size(), 1u);
  EXPECT_NEAR(dr.returns[1][0], std::log(55.0 / 50.0), 1e-15);
  const auto rv = realized_volatility(dr);
  EXPECT_EQ(rv.series.values.size(), 2u);
  EXPECT_THROW(intraday_returns(s, 0), DomainError);
}

TEST(ToPath, ExactLengthIsIdentity) {
  std::vector<double> v(21);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * i;
  const auto m = to_path(v, {4, 5});
  EXPECT_EQ(m.path.values(), v);
  EXPECT_EQ(m.mapping.stride, 1u);
}

TEST(ToPath, DailySeriesTruncation) {
  std::vector<double> v(2463);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + i;
  const std::size_t n = periods_for_length(v.size(), 70);
  EXPECT_EQ(n, 35u);
  const auto m = to_path(v, {n, 70});
  EXPECT_EQ(m.path.size(), 2451u);
  EXPECT_EQ(m.mapping.used, 2451u);
  EXPECT_EQ(m.path.values().back(), 2451.0);
}

TEST(ToPath, TooShortIsAnError) {
  EXPECT_THROW(to_path(std::vector<double>(10, 1.0), {3, 5}), DataError);
}
