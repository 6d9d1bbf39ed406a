#pragma once

// Numeric series files and the small text formats used on the command line.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "heavytail/error.hpp"
#include "heavytail/input.hpp"
#include "heavytail/transform.hpp"

namespace heavytail {

// Thrown for malformed input text; carries the 1-based line number when known.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct SeriesFile {
  std::vector<double> values;
  std::string source;
};

struct SeriesFormat {
  std::optional<int> column;  // 1-based CSV column; whitespace-delimited when empty
  bool header = false;        // skip the first non-comment line
  std::size_t min_values = 10;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view tok, int line) {
  tok = trim(tok);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("non-numeric token '" + std::string(tok) + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(tok) + "'", line);
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

inline SeriesFile read_series(std::istream& in, const std::string& source, const SeriesFormat& fmt = {}) {
  SeriesFile file;
  file.source = source;
  std::string raw;
  int line_no = 0;
  bool header_pending = fmt.header;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (fmt.column) {
      const auto cells = detail::split(line, ',');
      if (*fmt.column < 1 || static_cast<std::size_t>(*fmt.column) > cells.size()) {
        throw ParseError("missing column " + std::to_string(*fmt.column), line_no);
      }
      file.values.push_back(detail::parse_number(cells[static_cast<std::size_t>(*fmt.column - 1)], line_no));
      continue;
    }
    std::istringstream tokens{std::string(line)};
    std::string tok;
    while (tokens >> tok) file.values.push_back(detail::parse_number(tok, line_no));
  }
  if (file.values.size() < fmt.min_values) {
    throw InsufficientDataError("insufficient data: " + std::to_string(file.values.size()) + " values in " + source +
                                ", need at least " + std::to_string(fmt.min_values));
  }
  return file;
}

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_series(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) out << format_exact(v) << '\n';
}

inline std::vector<double> parse_number_list(std::string_view text, const std::string& what) {
  std::vector<double> out;
  for (auto tok : detail::split(text, ',')) {
    try {
      out.push_back(detail::parse_number(tok, 0));
    } catch (const ParseError& e) {
      throw ParseError(what + ": " + e.what());
    }
  }
  return out;
}

/// "mu,sigma,delta" or "mu,sigma,delta_l,delta_r".
inline TailParams parse_tau(std::string_view text) {
  const auto v = parse_number_list(text, "--tau");
  if (v.size() != 3 && v.size() != 4) throw ParseError("--tau: expected mu,sigma,delta[,delta_r]");
  TailParams tau{v[0], v[1], v.size() == 4 ? Tail::double_tail(v[2], v[3]) : Tail::symmetric(v[2])};
  if (!(tau.sigma_x > 0.0)) throw DomainError("--tau: sigma must be > 0");
  tau.validate();
  return tau;
}

inline std::string format_tau(const TailParams& tau) {
  std::string s = format_exact(tau.mu_x) + "," + format_exact(tau.sigma_x) + "," + format_exact(tau.tail.left());
  if (tau.tail.is_double()) s += "," + format_exact(tau.tail.right());
  return s;
}

/// Family with parameters: gaussian, t:NU, gamma:SHAPE,RATE, exp:RATE, chisq:K, uniform:A,B.
/// `gaussian` and `t` take their location and scale from tau, so only the shape is given.
inline InputSpec parse_family(std::string_view text) {
  const auto colon = text.find(':');
  const std::string name(text.substr(0, colon));
  std::vector<double> p;
  if (colon != std::string_view::npos) p = parse_number_list(text.substr(colon + 1), "--family");
  auto need = [&](std::size_t k) {
    if (p.size() != k) {
      throw ParseError("--family " + name + ": expected " + std::to_string(k) + " parameter(s)");
    }
  };
  if (name == "gaussian") {
    need(0);
    return InputSpec(Gaussian{});
  }
  if (name == "t") {
    need(1);
    if (!(p[0] > 2.0)) throw DomainError("--family t: nu must be > 2");
    return InputSpec(StudentT{p[0], 0.0, 1.0});
  }
  if (name == "gamma") {
    need(2);
    return InputSpec(Gamma{p[0], p[1]});
  }
  if (name == "exp") {
    need(1);
    return InputSpec(Exponential{p[0]});
  }
  if (name == "chisq") {
    need(1);
    return InputSpec(ChiSquared{p[0]});
  }
  if (name == "uniform") {
    need(2);
    return InputSpec(Uniform{p[0], p[1]});
  }
  throw ParseError("unknown family '" + name + "'");
}

}  // namespace heavytail
