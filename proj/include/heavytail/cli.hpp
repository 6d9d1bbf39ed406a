#pragma once

// The heavytail command line: fit, gaussianize, transform, simulate, replicate.
// run_cli() is usable in-process; exit codes are 0 success, 2 input or
// validation error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heavytail/distribution.hpp"
#include "heavytail/error.hpp"
#include "heavytail/estimate.hpp"
#include "heavytail/io.hpp"
#include "heavytail/normality.hpp"
#include "heavytail/sample_stats.hpp"
#include "heavytail/simulate.hpp"
#include "heavytail/transform.hpp"
#include "json.hpp"

namespace heavytail::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

struct SeriesOptions {
  std::string input;
  std::optional<int> column;
  bool header = false;
};

struct FitOptions {
  SeriesOptions series;
  std::string family = "gaussian";
  std::string tail = "h";
  std::string method = "mle";
  bool json = false;
};

struct GaussianizeOptions {
  SeriesOptions series;
  std::optional<std::string> tau;
  bool fit = false;
  std::string method = "igmm";
  std::string tail = "h";
  std::optional<std::string> out;
};

struct TransformOptions {
  SeriesOptions series;
  std::string tau;
  std::string direction = "forward";
  std::optional<std::string> out;
};

struct SimulateOptions {
  std::string family = "gaussian";
  std::optional<std::string> tau;
  std::optional<std::string> delta;
  long long n = 1000;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

struct ReplicateOptions {
  std::optional<std::string> plan;
  std::optional<std::string> out;
};

namespace detail {

inline SeriesFile load_series(const SeriesOptions& opt) {
  SeriesFormat fmt;
  fmt.column = opt.column;
  fmt.header = opt.header;
  if (opt.input == "-") return read_series(std::cin, "<stdin>", fmt);
  std::ifstream in(opt.input);
  if (!in) throw ParseError("cannot open '" + opt.input + "'");
  return read_series(in, opt.input, fmt);
}

// Writes to `path`, or to `fallback` when no path is given.
template <class F>
void with_output(const std::optional<std::string>& path, std::ostream& fallback, F&& write) {
  if (!path) {
    write(fallback);
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + *path + "'");
  write(out);
}

inline std::string fmt(double v, const char* spec = " %11.6g") {
  if (std::isnan(v)) return "          NA";
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline nlohmann::json summary_json(const std::vector<double>& x) {
  const SampleMoments m = sample_moments(x);
  const NormalityTest ad = anderson_darling(x);
  return {{"min", m.min},
          {"max", m.max},
          {"mean", m.mean},
          {"median", m.median},
          {"sd", m.sd},
          {"skewness", json_number(m.skewness.value_or(NAN))},
          {"kurtosis", json_number(m.kurtosis.value_or(NAN))},
          {"normality", {{"test", "anderson_darling"}, {"statistic", ad.statistic}, {"p_value", ad.p_value}}}};
}

inline void print_summary(std::ostream& os, const std::vector<double>& y, const std::vector<double>& x) {
  const SampleMoments my = sample_moments(y), mx = sample_moments(x);
  const NormalityTest ay = anderson_darling(y), ax = anderson_darling(x);
  os << "summary            y       x_tau\n";
  auto row = [&](const char* name, double a, double b) { os << name << fmt(a) << fmt(b) << '\n'; };
  row("min      ", my.min, mx.min);
  row("max      ", my.max, mx.max);
  row("mean     ", my.mean, mx.mean);
  row("median   ", my.median, mx.median);
  row("sd       ", my.sd, mx.sd);
  row("skewness ", my.skewness.value_or(NAN), mx.skewness.value_or(NAN));
  row("kurtosis ", my.kurtosis.value_or(NAN), mx.kurtosis.value_or(NAN));
  row("AD stat  ", ay.statistic, ax.statistic);
  row("AD p     ", ay.p_value, ax.p_value);
}

inline TailKind parse_tail(const std::string& s) {
  if (s == "h") return TailKind::kSymmetric;
  if (s == "hh") return TailKind::kDoubleTail;
  throw ParseError("--tail must be h or hh");
}

// Fitting families carry placeholder parameters; the estimator replaces them.
inline InputSpec fit_family(const std::string& name) {
  if (name == "gaussian") return InputSpec(Gaussian{});
  if (name == "t") return InputSpec(StudentT{10.0, 0.0, 1.0});
  if (name == "gamma") return InputSpec(Gamma{2.0, 1.0});
  if (name == "exp") return InputSpec(Exponential{1.0});
  if (name == "chisq") return InputSpec(ChiSquared{2.0});
  if (name == "uniform") return InputSpec(Uniform{0.0, 1.0});
  throw ParseError("unknown family '" + name + "'");
}

inline FitResult run_fit(std::span<const double> y, const std::string& family, TailKind kind,
                         const std::string& method) {
  if (method == "igmm") {
    if (family != "gaussian") throw ParseError("--method igmm supports --family gaussian only");
    return kind == TailKind::kDoubleTail ? igmm_double_tail(y) : igmm(y);
  }
  if (method != "mle") throw ParseError("--method must be mle or igmm");
  return mle_joint(y, fit_family(family), kind);
}

inline std::string boundary_name(BoundaryHit b) {
  switch (b) {
    case BoundaryHit::kDeltaLower:
      return "delta_lower";
    case BoundaryHit::kDeltaUpper:
      return "delta_upper";
    case BoundaryHit::kNone:
      break;
  }
  return "";
}

inline double normal_two_sided_p(double t) { return std::erfc(std::fabs(t) / std::numbers::sqrt2); }

inline nlohmann::json tau_json(const TailParams& tau) {
  nlohmann::json j = {{"mu_x", tau.mu_x}, {"sigma_x", tau.sigma_x}};
  if (tau.tail.is_double()) {
    j["delta_l"] = tau.tail.left();
    j["delta_r"] = tau.tail.right();
  } else {
    j["delta"] = tau.tail.delta();
  }
  return j;
}

}  // namespace detail

inline int cmd_fit(const FitOptions& opt, std::ostream& out, std::ostream& err) {
  const SeriesFile series = detail::load_series(opt.series);
  const auto& y = series.values;
  const TailKind kind = detail::parse_tail(opt.tail);
  const FitResult fit = detail::run_fit(y, opt.family, kind, opt.method);
  std::optional<LikelihoodRatio> lr;
  if (kind == TailKind::kDoubleTail) lr = lr_test_double_tail(y);
  const std::vector<double> x = w_tau(y, fit.tau);

  if (opt.json) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& e : fit.estimates) {
      const double t = e.value / e.std_error;
      params.push_back({{"name", e.name},
                        {"estimate", e.value},
                        {"std_error", detail::json_number(e.std_error)},
                        {"t", detail::json_number(t)},
                        {"p_value", detail::json_number(detail::normal_two_sided_p(t))}});
    }
    nlohmann::json report = {
        {"source", series.source},
        {"n", y.size()},
        {"method", opt.method},
        {"family", opt.family},
        {"tail", opt.tail},
        {"tau", detail::tau_json(fit.tau)},
        {"tau_string", format_tau(fit.tau)},
        {"parameters", params},
        {"loglik", {{"total", fit.loglik.total}, {"input", fit.loglik.input}, {"penalty", fit.loglik.penalty}}},
        {"iterations", fit.iterations},
        {"converged", fit.converged},
        {"boundary_hit", fit.boundary_hit == BoundaryHit::kNone ? nlohmann::json(nullptr)
                                                                 : nlohmann::json(detail::boundary_name(fit.boundary_hit))},
        {"summary", {{"y", detail::summary_json(y)}, {"x", detail::summary_json(x)}}},
        {"lr_test", nullptr}};
    if (lr) {
      report["lr_test"] = {{"statistic", lr->statistic},
                           {"df", 1},
                           {"p_value", lr->p_value},
                           {"loglik_h", lr->symmetric.loglik.total},
                           {"loglik_hh", lr->double_tail.loglik.total}};
    }
    out << report.dump(2) << '\n';
  } else {
    out << "method " << opt.method << ", family " << opt.family << ", tail " << opt.tail << ", n = " << y.size()
        << "\n\n";
    out << "parameter       estimate   std_error           t     p_value\n";
    for (const auto& e : fit.estimates) {
      char name[16];
      std::snprintf(name, sizeof name, "%-10s", e.name.c_str());
      const double t = e.value / e.std_error;
      out << name << detail::fmt(e.value) << detail::fmt(e.std_error) << detail::fmt(t)
          << detail::fmt(detail::normal_two_sided_p(t)) << '\n';
    }
    out << "\nloglik " << detail::fmt(fit.loglik.total, "%.10g") << " (input " << detail::fmt(fit.loglik.input, "%.10g")
        << ", penalty " << detail::fmt(fit.loglik.penalty, "%.10g") << ")\n";
    out << "iterations " << fit.iterations << ", converged " << (fit.converged ? "yes" : "no");
    if (fit.boundary_hit != BoundaryHit::kNone) out << ", boundary " << detail::boundary_name(fit.boundary_hit);
    out << "\ntau " << format_tau(fit.tau) << "\n\n";
    detail::print_summary(out, y, x);
    if (lr) {
      out << "\nLR test h vs hh: statistic " << detail::fmt(lr->statistic, "%.6g") << ", df 1, p-value "
          << detail::fmt(lr->p_value, "%.6g") << '\n';
    }
  }
  if (!fit.converged) {
    err << "heavytail: estimator did not converge\n";
    return kExitNumeric;
  }
  return kExitOk;
}

inline int cmd_gaussianize(const GaussianizeOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.tau.has_value() == opt.fit) throw ParseError("gaussianize: give exactly one of --tau or --fit");
  const SeriesFile series = detail::load_series(opt.series);
  TailParams tau;
  if (opt.tau) {
    tau = parse_tau(*opt.tau);
  } else {
    const FitResult fit = detail::run_fit(series.values, "gaussian", detail::parse_tail(opt.tail), opt.method);
    if (!fit.converged) {
      err << "heavytail: estimator did not converge\n";
      return kExitNumeric;
    }
    tau = fit.tau;
  }
  const std::vector<double> x = w_tau(series.values, tau);
  detail::with_output(opt.out, out, [&](std::ostream& os) { write_series(os, x); });
  std::ostream& info = opt.out ? out : err;
  info << "tau " << format_tau(tau) << '\n';
  detail::print_summary(info, series.values, x);
  return kExitOk;
}

inline int cmd_transform(const TransformOptions& opt, std::ostream& out, std::ostream&) {
  const TailParams tau = parse_tau(opt.tau);
  if (opt.direction != "forward" && opt.direction != "inverse") {
    throw ParseError("--direction must be forward or inverse");
  }
  const SeriesFile series = detail::load_series(opt.series);
  const std::vector<double> result =
      opt.direction == "forward" ? h_tau(series.values, tau) : w_tau(series.values, tau);
  detail::with_output(opt.out, out, [&](std::ostream& os) { write_series(os, result); });
  return kExitOk;
}

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream&) {
  if (opt.n < 1) throw ParseError("--n must be >= 1");
  InputSpec input = parse_family(opt.family);
  Tail tail;
  const bool located = std::holds_alternative<Gaussian>(input.family()) ||
                       std::holds_alternative<StudentT>(input.family());
  if (located) {
    if (!opt.tau) throw ParseError("simulate: --family " + opt.family + " requires --tau");
    if (opt.delta) throw ParseError("simulate: use --tau, not --delta, with --family " + opt.family);
    const TailParams tau = parse_tau(*opt.tau);
    tail = tau.tail;
    if (const auto* t = std::get_if<StudentT>(&input.family())) {
      input = InputSpec(StudentT{t->nu, 0.0, 1.0}).with_natural_params({tau.mu_x, tau.sigma_x, t->nu});
    } else {
      input = InputSpec(Gaussian{tau.mu_x, tau.sigma_x});
    }
  } else {
    if (opt.tau) throw ParseError("simulate: --family " + opt.family + " takes --delta, not --tau");
    if (!opt.delta) throw ParseError("simulate: --family " + opt.family + " requires --delta");
    const auto d = parse_number_list(*opt.delta, "--delta");
    if (d.size() == 1) {
      tail = Tail::symmetric(d[0]);
    } else if (d.size() == 2) {
      tail = Tail::double_tail(d[0], d[1]);
    } else {
      throw ParseError("--delta: expected delta or delta_l,delta_r");
    }
  }
  const LambertWDist dist(input, tail);
  const std::vector<double> y = rlambertw(static_cast<std::size_t>(opt.n), dist, opt.seed);
  detail::with_output(opt.out, out, [&](std::ostream& os) { write_series(os, y); });
  return kExitOk;
}

inline int cmd_replicate(const ReplicateOptions& opt, std::ostream& out, std::ostream& err) {
  StudyPlan plan;
  if (opt.plan) {
    std::ifstream in(*opt.plan);
    if (!in) throw ParseError("cannot open plan '" + *opt.plan + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("plan: ") + e.what());
    }
    try {
      plan = plan_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("plan: ") + e.what());
    }
  }
  const ReplicationTable table = run_study(plan);
  if (!opt.out) {
    write_csv(out, table);
    return kExitOk;
  }
  const std::filesystem::path dir(*opt.out);
  std::filesystem::create_directories(dir);
  detail::with_output((dir / "replication.csv").string(), out, [&](std::ostream& os) { write_csv(os, table); });
  detail::with_output((dir / "replication.json").string(), out, [&](std::ostream& os) {
    nlohmann::json doc = {{"plan", to_json(plan)}, {"table", to_json(table)}};
    os << doc.dump(2) << '\n';
  });
  err << "wrote " << (dir / "replication.csv").string() << " and " << (dir / "replication.json").string() << '\n';
  return kExitOk;
}

namespace detail {

inline void add_series_options(CLI::App* cmd, SeriesOptions& s) {
  cmd->add_option("input", s.input, "Input series file ('-' for stdin)")->required();
  cmd->add_option("--column", s.column, "1-based CSV column to read");
  cmd->add_flag("--header", s.header, "Skip the first non-comment line");
}

// Maps exceptions onto the exit-code contract.
template <class F>
int guarded(F&& f, std::ostream& err) {
  try {
    return f();
  } catch (const std::logic_error& e) {  // DomainError, ParseError, InsufficientDataError
    err << "heavytail: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "heavytail: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "heavytail: numerical failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heavy-tail Lambert W x F_X distributions", "heavytail"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* c_fit = app.add_subcommand("fit", "Fit an h or hh model to a series");
  detail::add_series_options(c_fit, fit.series);
  c_fit->add_option("--family", fit.family, "gaussian, t, gamma, exp, chisq or uniform")->capture_default_str();
  c_fit->add_option("--tail", fit.tail, "h or hh")->capture_default_str();
  c_fit->add_option("--method", fit.method, "mle or igmm")->capture_default_str();
  c_fit->add_flag("--json", fit.json, "Emit the report as JSON");

  GaussianizeOptions gz;
  auto* c_gz = app.add_subcommand("gaussianize", "Back-transform a series to its latent input");
  detail::add_series_options(c_gz, gz.series);
  c_gz->add_option("--tau", gz.tau, "mu,sigma,delta[,delta_r]");
  c_gz->add_flag("--fit", gz.fit, "Estimate tau from the data");
  c_gz->add_option("--method", gz.method, "mle or igmm (with --fit)")->capture_default_str();
  c_gz->add_option("--tail", gz.tail, "h or hh (with --fit)")->capture_default_str();
  c_gz->add_option("--out", gz.out, "Output file (default stdout)");

  TransformOptions tr;
  auto* c_tr = app.add_subcommand("transform", "Apply H_tau (forward) or W_tau (inverse) elementwise");
  detail::add_series_options(c_tr, tr.series);
  c_tr->add_option("--tau", tr.tau, "mu,sigma,delta[,delta_r]")->required();
  c_tr->add_option("--direction", tr.direction, "forward or inverse")->capture_default_str();
  c_tr->add_option("--out", tr.out, "Output file (default stdout)");

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "Draw a Lambert W x F_X sample");
  c_sim->add_option("--family", sim.family, "gaussian, t:NU, gamma:SHAPE,RATE, exp:RATE, chisq:K, uniform:A,B")
      ->capture_default_str();
  c_sim->add_option("--tau", sim.tau, "mu,sigma,delta[,delta_r] (gaussian and t)");
  c_sim->add_option("--delta", sim.delta, "delta[,delta_r] (other families)");
  c_sim->add_option("--n", sim.n, "Sample size")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  c_sim->add_option("--out", sim.out, "Output file (default stdout)");

  ReplicateOptions rep;
  auto* c_rep = app.add_subcommand("replicate", "Run the Monte-Carlo replication study");
  c_rep->add_option("--plan", rep.plan, "Study plan JSON (default desk-scale plan)");
  c_rep->add_option("--out", rep.out, "Output directory for replication.csv and replication.json");

  std::vector<const char*> argv{"heavytail"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  return detail::guarded(
      [&] {
        if (c_fit->parsed()) return cmd_fit(fit, out, err);
        if (c_gz->parsed()) return cmd_gaussianize(gz, out, err);
        if (c_tr->parsed()) return cmd_transform(tr, out, err);
        if (c_sim->parsed()) return cmd_simulate(sim, out, err);
        return cmd_replicate(rep, out, err);
      },
      err);
}

}  // namespace heavytail::cli
