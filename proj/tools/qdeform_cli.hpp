#ifndef QDEFORM_TOOLS_QDEFORM_CLI_HPP
#define QDEFORM_TOOLS_QDEFORM_CLI_HPP

// Subcommands of the `qdeform` tool.  Kept in a header so the test suites
// can drive the exact code path the binary runs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdeform/qdeform.hpp"

namespace qdeform::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitVerifyFailed = 2;
inline constexpr int kExitIo = 3;

// Boltzmann constant in eV/K (CODATA 2018, exact).
inline constexpr double kBoltzmannEv = 8.617333262e-5;

struct EvalOptions {
  std::optional<double> x;
  std::optional<double> hbar_omega_ev;
  std::optional<double> temperature_k;
  double gamma = 0.0;
  std::optional<double> q;
  std::string variant = "deformed-zpe";
  OutputFormat format = OutputFormat::csv;
};

struct ScanOptions {
  double x_min = 0.1;
  double x_max = 10.0;
  int x_count = 25;
  std::string spacing = "log";
  std::vector<double> gammas{0.0};
  std::vector<std::string> variants{"deformed-zpe"};
  OutputFormat format = OutputFormat::csv;
};

struct LimitsOptions {
  std::vector<double> gammas{0.0, 1e-6, 0.01};
  double x_min = 1e-3;
  double x_max = 50.0;
  RegimeThresholds thresholds;
  OutputFormat format = OutputFormat::csv;
};

struct VerifyOptions {
  std::string grid = "default";
  std::vector<std::string> points;  // "x,gamma"
  VerificationTolerances tolerances;
  OutputFormat format = OutputFormat::json;
};

namespace detail {

inline std::optional<Variant> variant_or_report(const std::string& name,
                                                std::ostream& err) {
  auto v = parse_variant(name);
  if (!v) {
    err << "error: unknown variant '" << name
        << "' (expected undeformed-nozpe, undeformed-zpe, deformed-nozpe, "
           "deformed-zpe)\n";
  }
  return v;
}

}  // namespace detail

inline int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const auto v = detail::variant_or_report(o.variant, err);
  if (!v) return kExitDomain;

  double x = 0.0;
  const bool converted = o.hbar_omega_ev || o.temperature_k;
  if (converted) {
    if (o.x || !o.hbar_omega_ev || !o.temperature_k) {
      err << "error: give either --x or both --hbar-omega-ev and --temperature-k\n";
      return kExitDomain;
    }
    if (!(*o.hbar_omega_ev > 0.0) || !(*o.temperature_k > 0.0)) {
      err << "error: --hbar-omega-ev and --temperature-k must be > 0\n";
      return kExitDomain;
    }
    x = *o.hbar_omega_ev / (kBoltzmannEv * *o.temperature_k);
  } else if (o.x) {
    x = *o.x;
  } else {
    err << "error: --x is required\n";
    return kExitDomain;
  }

  double gamma = o.gamma;
  try {
    if (o.q) gamma = DeformationParameter::from_q(*o.q).gamma();
    gamma = DeformationParameter::from_gamma(gamma).gamma();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  if (!std::isfinite(x) || !(x > 0.0)) {
    err << "error: x must be finite and > 0\n";
    return kExitDomain;
  }
  if (is_deformed(*v) && !(x > gamma)) {
    err << "error: x must exceed gamma: pole of the deformed distribution at "
           "e^x = q (x = " << format_double(x) << ", gamma = "
        << format_double(gamma) << ")\n";
    return kExitDomain;
  }
  const OutputRow row = make_row(x, gamma, *v);
  if (!row.f) {
    err << "error: point not representable (" << row.reason << ")\n";
    return kExitDomain;
  }

  if (o.format == OutputFormat::csv) {
    if (converted) {
      out << "# hbar_omega_ev=" << format_double(*o.hbar_omega_ev)
          << ",temperature_k=" << format_double(*o.temperature_k)
          << ",x=" << format_double(x) << '\n';
    }
    write_csv_header(out);
    write_csv_row(out, row);
  } else {
    std::string json = row_to_json(row);
    if (converted) {
      json.pop_back();
      json += ",\"conversion\":{\"hbar_omega_ev\":" +
              format_double(*o.hbar_omega_ev) +
              ",\"temperature_k\":" + format_double(*o.temperature_k) +
              ",\"boltzmann_ev_per_k\":" + format_double(kBoltzmannEv) + "}}";
    }
    out << json << '\n';
  }
  return kExitOk;
}

inline std::vector<double> sweep_points(double lo, double hi, int count,
                                        bool log_spacing) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    double x = log_spacing
                   ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                   : lo + t * (hi - lo);
    if (i == 0) x = lo;
    if (i == count - 1) x = hi;
    xs.push_back(x);
  }
  return xs;
}

/// Rows are gamma-major, then x ascending, then variants in the order given.
inline int cmd_scan(const ScanOptions& o, std::ostream& out, std::ostream& err) {
  if (!(o.x_min > 0.0) || !(o.x_max > o.x_min) || o.x_count < 2) {
    err << "error: scan needs 0 < x-min < x-max and x-count >= 2\n";
    return kExitDomain;
  }
  if (o.spacing != "log" && o.spacing != "linear") {
    err << "error: --spacing must be log or linear\n";
    return kExitDomain;
  }
  std::vector<Variant> variants;
  for (const auto& name : o.variants) {
    const auto v = detail::variant_or_report(name, err);
    if (!v) return kExitDomain;
    variants.push_back(*v);
  }
  for (double g : o.gammas) {
    if (!std::isfinite(g)) {
      err << "error: gamma values must be finite\n";
      return kExitDomain;
    }
  }
  const auto xs = sweep_points(o.x_min, o.x_max, o.x_count, o.spacing == "log");
  std::vector<OutputRow> rows;
  rows.reserve(o.gammas.size() * xs.size() * variants.size());
  for (double g : o.gammas) {
    for (double x : xs) {
      for (Variant v : variants) rows.push_back(make_row(x, g, v));
    }
  }
  write_rows(out, rows, o.format);
  return kExitOk;
}

struct LimitRow {
  double gamma = 0.0;
  double x_min = 0.0;
  std::optional<Regime> regime_at_x_min;
  std::optional<double> high_t_deviation;   // |beta U / N - 1|
  std::optional<double> high_t_predicted;   // x^2/12 + gamma^2/x^2
  double x_max = 0.0;
  std::optional<Regime> regime_at_x_max;
  std::optional<double> low_t_deviation;    // |U / (N E / 2) - 1|
  bool flagged = false;
  std::string reason;
};

inline LimitRow limit_row(double gamma, const LimitsOptions& o) {
  LimitRow r;
  r.gamma = std::fabs(gamma);
  r.x_min = o.x_min;
  r.x_max = o.x_max;
  const auto d = DeformationParameter::from_gamma(gamma);
  const auto& t = o.thresholds;
  const auto flag = [&r](std::string_view why) {
    r.flagged = true;
    if (!r.reason.empty()) r.reason += ';';
    r.reason += why;
  };

  if (o.x_min > r.gamma) {
    const ModePoint p(o.x_min, d);
    r.regime_at_x_min = classify_regime(o.x_min, r.gamma, t);
    r.high_t_deviation = std::fabs(o.x_min * deformed_distribution_zpe(p).value - 1.0);
    r.high_t_predicted =
        o.x_min * o.x_min / 12.0 + r.gamma * r.gamma / (o.x_min * o.x_min);
  } else {
    flag("x_min_not_above_gamma");
  }
  if (o.x_max > r.gamma) {
    const ModePoint p(o.x_max, d);
    r.regime_at_x_max = classify_regime(o.x_max, r.gamma, t);
    r.low_t_deviation = std::fabs(2.0 * deformed_distribution_zpe(p).value - 1.0);
  } else {
    flag("x_max_not_above_gamma");
  }
  if (!(r.gamma <= t.small_deformation_ratio * o.x_min)) {
    flag("small_deformation_violated_at_x_min");
  }
  if (!(r.gamma <= t.small_deformation_ratio * o.x_max)) {
    flag("small_deformation_violated_at_x_max");
  }
  return r;
}

inline void write_limit_rows(std::ostream& os, const std::vector<LimitRow>& rows,
                             OutputFormat fmt) {
  const auto regime_name = [](const std::optional<Regime>& r) {
    return r ? std::string(to_string(*r)) : std::string();
  };
  if (fmt == OutputFormat::csv) {
    os << "gamma,x_min,regime_at_x_min,high_t_deviation,high_t_predicted,"
          "x_max,regime_at_x_max,low_t_deviation,flagged,reason\n";
    for (const auto& r : rows) {
      os << format_double(r.gamma) << ',' << format_double(r.x_min) << ','
         << regime_name(r.regime_at_x_min) << ','
         << qdeform::detail::csv_field(r.high_t_deviation) << ','
         << qdeform::detail::csv_field(r.high_t_predicted) << ','
         << format_double(r.x_max) << ',' << regime_name(r.regime_at_x_max) << ','
         << qdeform::detail::csv_field(r.low_t_deviation) << ','
         << (r.flagged ? "true" : "false") << ',' << r.reason << '\n';
    }
    return;
  }
  const auto regime_json = [&](const std::optional<Regime>& r) {
    return r ? qdeform::detail::json_string(to_string(*r)) : std::string("null");
  };
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? ",\n " : "\n ") << "{\"gamma\":" << format_double(r.gamma)
       << ",\"x_min\":" << format_double(r.x_min)
       << ",\"regime_at_x_min\":" << regime_json(r.regime_at_x_min)
       << ",\"high_t_deviation\":" << qdeform::detail::json_number(r.high_t_deviation)
       << ",\"high_t_predicted\":" << qdeform::detail::json_number(r.high_t_predicted)
       << ",\"x_max\":" << format_double(r.x_max)
       << ",\"regime_at_x_max\":" << regime_json(r.regime_at_x_max)
       << ",\"low_t_deviation\":" << qdeform::detail::json_number(r.low_t_deviation)
       << ",\"flagged\":" << (r.flagged ? "true" : "false")
       << ",\"reason\":" << qdeform::detail::json_string(r.reason) << "}";
  }
  os << (rows.empty() ? "]\n" : "\n]\n");
}

inline int cmd_limits(const LimitsOptions& o, std::ostream& out,
                      std::ostream& err) {
  if (!(o.x_min > 0.0) || !(o.x_max > 0.0) || !std::isfinite(o.x_max)) {
    err << "error: limits needs positive finite --x-min and --x-max\n";
    return kExitDomain;
  }
  std::vector<LimitRow> rows;
  for (double g : o.gammas) {
    if (!std::isfinite(g)) {
      err << "error: gamma values must be finite\n";
      return kExitDomain;
    }
    rows.push_back(limit_row(g, o));
  }
  write_limit_rows(out, rows, o.format);
  return kExitOk;
}

inline int cmd_verify(const VerifyOptions& o, std::ostream& out,
                      std::ostream& err) {
  std::vector<GridPoint> grid;
  if (!o.points.empty()) {
    for (const auto& s : o.points) {
      GridPoint g;
      char comma = 0;
      std::istringstream in(s);
      if (!(in >> g.x >> comma >> g.gamma) || comma != ',' || !in.eof()) {
        err << "error: --point expects x,gamma but got '" << s << "'\n";
        return kExitDomain;
      }
      grid.push_back(g);
    }
  } else if (o.grid == "default") {
    grid = default_grid();
  } else if (o.grid != "empty") {
    err << "error: --grid must be default or empty\n";
    return kExitDomain;
  }
  const auto report = run_verification_suite(grid, o.tolerances);
  if (o.format == OutputFormat::json) {
    write_report_json(out, report);
  } else {
    write_report_csv(out, report);
  }
  std::size_t failed = 0;
  for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
  err << "verify: " << report.checks.size() << " checks, " << failed
      << " failed\n";
  return report.overall_pass() ? kExitOk : kExitVerifyFailed;
}

/// Parses argv and runs one subcommand; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"q-deformed boson oscillator thermodynamics"};
  app.require_subcommand(1);

  std::string format = "";
  std::string output_path;
  const auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", output_path, "write here instead of stdout");
  };

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one point");
  eval_cmd->add_option("--x", eval.x, "beta * hbar * omega");
  eval_cmd->add_option("--gamma", eval.gamma, "ln q");
  eval_cmd->add_option("--q", eval.q, "deformation q (overrides --gamma)");
  eval_cmd->add_option("--variant", eval.variant);
  eval_cmd->add_option("--hbar-omega-ev", eval.hbar_omega_ev);
  eval_cmd->add_option("--temperature-k", eval.temperature_k);
  add_io(eval_cmd);

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "sweep x for several gammas");
  scan_cmd->add_option("--x-min", scan.x_min);
  scan_cmd->add_option("--x-max", scan.x_max);
  scan_cmd->add_option("--x-count", scan.x_count);
  scan_cmd->add_option("--spacing", scan.spacing, "log or linear");
  scan_cmd->add_option("--gamma", scan.gammas)->delimiter(',');
  scan_cmd->add_option("--variant", scan.variants)->delimiter(',');
  add_io(scan_cmd);

  LimitsOptions limits;
  auto* limits_cmd = app.add_subcommand("limits", "low/high temperature limits");
  limits_cmd->add_option("--gamma", limits.gammas)->delimiter(',');
  limits_cmd->add_option("--x-min", limits.x_min);
  limits_cmd->add_option("--x-max", limits.x_max);
  limits_cmd->add_option("--low-t-min-x", limits.thresholds.low_t_min_x);
  limits_cmd->add_option("--high-t-max-x", limits.thresholds.high_t_max_x);
  limits_cmd->add_option("--small-deformation-ratio",
                         limits.thresholds.small_deformation_ratio);
  add_io(limits_cmd);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  verify_cmd->add_option("--grid", verify.grid, "default or empty");
  verify_cmd->add_option("--point", verify.points, "x,gamma (repeatable)");
  verify_cmd->add_option("--tol-series", verify.tolerances.series);
  verify_cmd->add_option("--tol-partial-fraction", verify.tolerances.partial_fraction);
  verify_cmd->add_option("--tol-derivative", verify.tolerances.derivative);
  verify_cmd->add_option("--tol-representation", verify.tolerances.representation);
  verify_cmd->add_option("--h-rel", verify.tolerances.h_rel);
  add_io(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  const auto fmt = [&](OutputFormat fallback) {
    if (format.empty()) return fallback;
    return format == "json" ? OutputFormat::json : OutputFormat::csv;
  };

  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open output file '" << output_path << "'\n";
      return kExitIo;
    }
  }
  std::ostream& sink = output_path.empty() ? out : file;

  int code = kExitOk;
  try {
    if (*eval_cmd) {
      eval.format = fmt(OutputFormat::csv);
      code = cmd_eval(eval, sink, err);
    } else if (*scan_cmd) {
      scan.format = fmt(OutputFormat::csv);
      code = cmd_scan(scan, sink, err);
    } else if (*limits_cmd) {
      limits.format = fmt(OutputFormat::csv);
      code = cmd_limits(limits, sink, err);
    } else if (*verify_cmd) {
      verify.format = fmt(OutputFormat::json);
      code = cmd_verify(verify, sink, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  sink.flush();
  if (!sink) {
    err << "error: failed writing output\n";
    return kExitIo;
  }
  return code;
}

}  // namespace qdeform::cli

#endif  // QDEFORM_TOOLS_QDEFORM_CLI_HPP
