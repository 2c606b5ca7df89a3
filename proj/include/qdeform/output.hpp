#ifndef QDEFORM_OUTPUT_HPP
#define QDEFORM_OUTPUT_HPP

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qdeform/distributions.hpp"
#include "qdeform/oracle.hpp"
#include "qdeform/thermo.hpp"

namespace qdeform {

// 17 significant digits: enough for every double to parse back bit-exactly.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

enum class OutputFormat { csv, json };

/// One evaluated (x, gamma, variant) combination.  Any numeric field the
/// point cannot produce is empty, and `reason` says why.
struct OutputRow {
  double x = 0.0;
  double gamma = 0.0;
  Variant variant = Variant::DeformedZpe;
  std::optional<double> f;
  std::optional<double> beta_u_per_n;
  std::optional<double> ln_z_per_mode;
  std::optional<Regime> regime;
  std::optional<double> deviation_from_asymptote;
  std::string reason;
};

inline constexpr std::string_view kRowColumns =
    "x,gamma,variant,f,beta_u_per_n,ln_z_per_mode,regime,"
    "deviation_from_asymptote,reason";

namespace detail {

inline void append_reason(std::string& reasons, std::string_view r) {
  if (!reasons.empty()) reasons += ';';
  reasons += r;
}

}  // namespace detail

inline OutputRow make_row(double x, double gamma, Variant v,
                          const RegimeThresholds& t = {}) {
  OutputRow row;
  row.x = x;
  row.gamma = std::fabs(gamma);
  row.variant = v;
  if (!std::isfinite(x) || !(x > 0.0)) {
    row.reason = "x_not_positive";
    return row;
  }
  if (!std::isfinite(gamma)) {
    row.reason = "gamma_not_finite";
    return row;
  }
  const auto d = is_deformed(v) ? DeformationParameter::from_gamma(gamma)
                                : DeformationParameter::undeformed();
  const ModePoint p(x, d);
  if (is_deformed(v) && !p.below_pole()) {
    row.reason = "x_not_above_gamma";
    return row;
  }
  try {
    const double f = distribution(p, v).value;
    row.f = f;
    row.beta_u_per_n = x * f;
    row.ln_z_per_mode = log_partition_per_mode(p, v);
    row.regime = classify_regime(x, d.gamma(), t);
  } catch (const std::exception&) {
    OutputRow empty;
    empty.x = x;
    empty.gamma = row.gamma;
    empty.variant = v;
    empty.reason = "not_representable";
    return empty;
  }
  if (!has_zero_point(v)) {
    detail::append_reason(row.reason, "no_asymptote_without_zero_point");
  } else if (*row.regime == Regime::Intermediate) {
    detail::append_reason(row.reason, "intermediate_regime");
  } else if (*row.regime == Regime::LowT) {
    row.deviation_from_asymptote = std::fabs(2.0 * *row.f - 1.0);
  } else {
    row.deviation_from_asymptote = std::fabs(*row.beta_u_per_n - 1.0);
  }
  return row;
}

namespace detail {

inline std::string csv_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

inline std::string json_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? format_double(*v) : std::string("null");
}

// Identifiers and reason codes only; quotes and backslashes are escaped.
inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

inline void write_csv_header(std::ostream& os) { os << kRowColumns << '\n'; }

inline void write_csv_row(std::ostream& os, const OutputRow& r) {
  os << format_double(r.x) << ',' << format_double(r.gamma) << ','
     << to_string(r.variant) << ',' << detail::csv_field(r.f) << ','
     << detail::csv_field(r.beta_u_per_n) << ','
     << detail::csv_field(r.ln_z_per_mode) << ','
     << (r.regime ? to_string(*r.regime) : std::string_view()) << ','
     << detail::csv_field(r.deviation_from_asymptote) << ',' << r.reason
     << '\n';
}

inline std::string row_to_json(const OutputRow& r) {
  std::string s = "{";
  s += "\"x\":" + format_double(r.x);
  s += ",\"gamma\":" + format_double(r.gamma);
  s += ",\"variant\":" + detail::json_string(to_string(r.variant));
  s += ",\"f\":" + detail::json_number(r.f);
  s += ",\"beta_u_per_n\":" + detail::json_number(r.beta_u_per_n);
  s += ",\"ln_z_per_mode\":" + detail::json_number(r.ln_z_per_mode);
  s += ",\"regime\":" +
       (r.regime ? detail::json_string(to_string(*r.regime)) : std::string("null"));
  s += ",\"deviation_from_asymptote\":" +
       detail::json_number(r.deviation_from_asymptote);
  s += ",\"reason\":" + detail::json_string(r.reason);
  s += "}";
  return s;
}

inline void write_rows(std::ostream& os, const std::vector<OutputRow>& rows,
                       OutputFormat fmt) {
  if (fmt == OutputFormat::csv) {
    write_csv_header(os);
    for (const auto& r : rows) write_csv_row(os, r);
    return;
  }
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << (i ? ",\n " : "\n ") << row_to_json(rows[i]);
  }
  os << (rows.empty() ? "]\n" : "\n]\n");
}

/// {"checks":[{name, point:{x,gamma}, residual, tolerance, pass, skipped}],
///  "overall_pass": bool}
inline void write_report_json(std::ostream& os, const VerificationReport& r) {
  os << "{\"checks\":[";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto& c = r.checks[i];
    os << (i ? ",\n  " : "\n  ") << "{\"name\":" << detail::json_string(c.name)
       << ",\"point\":{\"x\":" << detail::json_number(c.x)
       << ",\"gamma\":" << detail::json_number(c.gamma) << "}"
       << ",\"residual\":" << detail::json_number(c.residual)
       << ",\"tolerance\":" << detail::json_number(c.tolerance)
       << ",\"pass\":" << (c.pass ? "true" : "false")
       << ",\"skipped\":" << (c.skipped ? "true" : "false") << "}";
  }
  os << (r.checks.empty() ? "" : "\n") << "],\"overall_pass\":"
     << (r.overall_pass() ? "true" : "false") << "}\n";
}

inline void write_report_csv(std::ostream& os, const VerificationReport& r) {
  os << "name,x,gamma,residual,tolerance,pass,skipped\n";
  for (const auto& c : r.checks) {
    os << c.name << ',' << detail::csv_field(c.x) << ','
       << format_double(c.gamma) << ',' << format_double(c.residual) << ','
       << format_double(c.tolerance) << ',' << (c.pass ? "true" : "false")
       << ',' << (c.skipped ? "true" : "false") << '\n';
  }
}

}  // namespace qdeform

#endif  // QDEFORM_OUTPUT_HPP
