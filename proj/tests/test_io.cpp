#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "heavytail/io.hpp"

using namespace heavytail;

namespace {

constexpr const char* kTen = "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n";

SeriesFile read(const std::string& text, SeriesFormat fmt = {}) {
  std::istringstream in(text);
  return read_series(in, "test", fmt);
}

}  // namespace

TEST(ReadSeries, WhitespaceAndComments) {
  const auto f = read("# c\n1 2\t3\n\n4\n   # indented comment\n5 6\n7 8 9.5 1e-3\n");
  ASSERT_EQ(f.values.size(), 10u);
  EXPECT_EQ(f.values[2], 3.0);
  EXPECT_EQ(f.values[8], 9.5);
  EXPECT_EQ(f.values[9], 1e-3);
  EXPECT_EQ(f.source, "test");
}

TEST(ReadSeries, SignsExponentsAndCrlf) {
  const auto f = read("+1\r\n-2\r\n3e2\r\n  4.25  \r\n5\n6\n7\n8\n9\n-1E-2\n");
  ASSERT_EQ(f.values.size(), 10u);
  EXPECT_EQ(f.values[0], 1.0);
  EXPECT_EQ(f.values[1], -2.0);
  EXPECT_EQ(f.values[2], 300.0);
  EXPECT_EQ(f.values[3], 4.25);
  EXPECT_EQ(f.values[9], -0.01);
}

TEST(ReadSeries, NonNumericReportsLine) {
  try {
    read("1\n2\n# skip\n3\nabc\n5\n6\n7\n8\n9\n10\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
  }
  EXPECT_THROW(read("1\n2\n3\n4\n5\n6\n7\n8\n9\n1.5x\n"), ParseError);
  EXPECT_THROW(read("1\n2\n3\n4\n5\n6\n7\n8\n9\nnan\n"), ParseError);
  EXPECT_THROW(read("1\n2\n3\n4\n5\n6\n7\n8\n9\ninf\n"), ParseError);
}

TEST(ReadSeries, TooFewValues) {
  try {
    read("1\n2\n3\n4\n5\n");
    FAIL() << "expected InsufficientDataError";
  } catch (const InsufficientDataError& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient data"), std::string::npos);
  }
  EXPECT_THROW(read(""), InsufficientDataError);
  EXPECT_THROW(read("# only comments\n\n"), InsufficientDataError);
  EXPECT_NO_THROW(read(kTen));
  SeriesFormat loose;
  loose.min_values = 1;
  EXPECT_EQ(read("7\n", loose).values.size(), 1u);
}

TEST(ReadSeries, CsvColumnWithHeader) {
  std::string text = "id,value,flag\n";
  for (int i = 1; i <= 10; ++i) text += std::to_string(i) + "," + std::to_string(i * 0.5) + ",x\n";
  SeriesFormat fmt;
  fmt.column = 2;
  fmt.header = true;
  const auto f = read(text, fmt);
  ASSERT_EQ(f.values.size(), 10u);
  EXPECT_EQ(f.values[0], 0.5);
  EXPECT_EQ(f.values[9], 5.0);
  fmt.column = 4;
  EXPECT_THROW(read(text, fmt), ParseError);
  fmt.column = 3;
  EXPECT_THROW(read(text, fmt), ParseError);
  fmt.column = 2;
  fmt.header = false;
  EXPECT_THROW(read(text, fmt), ParseError);
}

TEST(WriteSeries, RoundTripsExactly) {
  const std::vector<double> v{0.1, -1e-300, 1.0 / 3.0, 12345678.901234567, 5e300, 0.0, -2.5, 1e-5, 7.0, 3.14159};
  std::ostringstream out;
  write_series(out, v);
  const auto f = read(out.str());
  ASSERT_EQ(f.values.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(f.values[i], v[i]);
}

TEST(ParseTau, Forms) {
  const auto t = parse_tau("0.5,2,0.1");
  EXPECT_EQ(t.mu_x, 0.5);
  EXPECT_EQ(t.sigma_x, 2.0);
  EXPECT_FALSE(t.tail.is_double());
  EXPECT_EQ(t.tail.delta(), 0.1);
  const auto hh = parse_tau("0,1,0.1,0.4");
  EXPECT_TRUE(hh.tail.is_double());
  EXPECT_EQ(hh.tail.left(), 0.1);
  EXPECT_EQ(hh.tail.right(), 0.4);
  EXPECT_EQ(parse_tau(format_tau(hh)).tail.right(), 0.4);
  const TailParams odd{1.0 / 3.0, 0.1, Tail::symmetric(0.7)};
  const auto back = parse_tau(format_tau(odd));
  EXPECT_EQ(back.mu_x, odd.mu_x);
  EXPECT_EQ(back.sigma_x, odd.sigma_x);
  EXPECT_EQ(back.tail.delta(), odd.tail.delta());
}

TEST(ParseTau, Errors) {
  EXPECT_THROW(parse_tau("0,1"), ParseError);
  EXPECT_THROW(parse_tau("0,1,0,0,0"), ParseError);
  EXPECT_THROW(parse_tau("0,x,0"), ParseError);
  EXPECT_THROW(parse_tau("0,0,0.1"), DomainError);
  EXPECT_THROW(parse_tau("0,-1,0.1"), DomainError);
  EXPECT_THROW(parse_tau("0,1,-0.1"), DomainError);
}

TEST(ParseFamily, KnownFamilies) {
  EXPECT_TRUE(std::holds_alternative<Gaussian>(parse_family("gaussian").family()));
  EXPECT_EQ(std::get<StudentT>(parse_family("t:5").family()).nu, 5.0);
  EXPECT_EQ(std::get<Gamma>(parse_family("gamma:2,3").family()).rate, 3.0);
  EXPECT_EQ(std::get<Exponential>(parse_family("exp:1.5").family()).rate, 1.5);
  EXPECT_EQ(std::get<ChiSquared>(parse_family("chisq:4").family()).k, 4.0);
  EXPECT_EQ(std::get<Uniform>(parse_family("uniform:-1,2").family()).b, 2.0);
}

TEST(ParseFamily, Errors) {
  EXPECT_THROW(parse_family("cauchy"), ParseError);
  EXPECT_THROW(parse_family("gamma:2"), ParseError);
  EXPECT_THROW(parse_family("gaussian:1"), ParseError);
  EXPECT_THROW(parse_family("t:2"), DomainError);
  EXPECT_THROW(parse_family("t:abc"), ParseError);
}

TEST(ParseNumberList, Basic) {
  EXPECT_EQ(parse_number_list("1,2.5,-3", "x"), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_THROW(parse_number_list("1,,2", "x"), ParseError);
}
