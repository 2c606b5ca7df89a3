#ifndef QDEFORM_ORACLE_HPP
#define QDEFORM_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdeform/distributions.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/qmath.hpp"
#include "qdeform/thermo.hpp"

// Brute-force checks of the closed forms: the defining occupation series
// summed term by term, and finite-difference derivatives of ln Z.

namespace qdeform {

struct SeriesEstimate {
  double value = 0.0;
  std::uint64_t terms_used = 0;
  // Bound on |exact - value|: geometric truncation majorant plus a few
  // ulps of accumulated rounding.
  double tail_bound = 0.0;
};

class non_convergence_error : public std::runtime_error {
 public:
  non_convergence_error(const std::string& what, SeriesEstimate partial)
      : std::runtime_error(what), partial_(partial) {}
  const SeriesEstimate& partial() const { return partial_; }

 private:
  SeriesEstimate partial_;
};

inline constexpr std::uint64_t kDefaultSeriesTermLimit = 1'000'000;

namespace detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// The spectrum weight multiplying P_n^(0) in each defining series.
inline double series_term(std::uint64_t n, const ModePoint& p, Variant v) {
  const double nd = static_cast<double>(n);
  switch (v) {
    case Variant::UndeformedNoZpe:
      return nd * occupation_probability(n, p, ZeroPoint::excluded);
    case Variant::UndeformedZpe:
      return (nd + 0.5) * occupation_probability(n, p, ZeroPoint::included);
    case Variant::DeformedNoZpe:
    case Variant::DeformedZpe:
      break;
  }
  const auto& d = p.deformation();
  const bool zpe = v == Variant::DeformedZpe;
  if ((nd + 1.0) * d.gamma() <= kLargeNGamma) {
    const double weight =
        zpe ? 0.5 * (basis_number(n + 1, d) + basis_number(n, d))
            : basis_number(n, d);
    return weight *
           occupation_probability(
               n, p, zpe ? ZeroPoint::included : ZeroPoint::excluded);
  }
  // [n] P_n itself is small but [n] alone may not fit in a double.
  const double log_p = log_occupation_probability(n, p);
  const double a = std::exp(log_basis_number(n, d) + log_p);
  if (!zpe) return a;
  return 0.5 * (std::exp(log_basis_number(n + 1, d) + log_p) + a);
}

// Tail after term n >= 1.  Each spectrum weight w satisfies
// w(n+k)/w(n) <= ((n+k)/n) e^{k gamma} (sinh(a)/(a e^a) is decreasing),
// so with r = e^{gamma - x} the tail is at most
// t_n * sum_k (1 + k/n) r^k = t_n (r/(1-r) + r/(n (1-r)^2)).
inline double tail_majorant(double term, std::uint64_t n, double ratio) {
  const double one_minus_r = 1.0 - ratio;
  return term * (ratio / one_minus_r +
                 ratio / (static_cast<double>(n) * one_minus_r * one_minus_r));
}

inline double series_ratio(const ModePoint& p, Variant v) {
  return is_deformed(v) ? std::exp(p.gamma() - p.x()) : std::exp(-p.x());
}

inline double rounding_allowance(double value, std::uint64_t terms) {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(value) +
         static_cast<double>(terms) * std::numeric_limits<double>::denorm_min();
}

inline void require_series_domain(const ModePoint& p, Variant v) {
  if (is_deformed(v)) require_below_pole(p, "series_distribution");
}

}  // namespace detail

/// Sum of the first n_terms terms (n = 0 .. n_terms-1) of the defining
/// occupation series, with the bound on what was left out.
inline SeriesEstimate truncated_series(const ModePoint& p, Variant v,
                                       std::uint64_t n_terms) {
  detail::require_series_domain(p, v);
  if (n_terms < 2) {
    throw domain_error("truncated_series: need at least two terms");
  }
  detail::CompensatedSum sum;
  double last = 0.0;
  for (std::uint64_t n = 0; n < n_terms; ++n) {
    last = detail::series_term(n, p, v);
    sum.add(last);
  }
  const double value = sum.value();
  const double bound =
      detail::tail_majorant(last, n_terms - 1, detail::series_ratio(p, v)) +
      detail::rounding_allowance(value, n_terms);
  return {value, n_terms, bound};
}

/// Sums the defining series in ascending n until the tail bound drops to
/// tol.  Throws non_convergence_error (carrying the partial sum) when
/// n_max terms are not enough.
inline SeriesEstimate series_distribution(
    const ModePoint& p, Variant v, double tol,
    std::uint64_t n_max = kDefaultSeriesTermLimit) {
  detail::require_series_domain(p, v);
  if (!(tol > 0.0)) {
    throw domain_error("series_distribution: tol must be > 0");
  }
  const double ratio = detail::series_ratio(p, v);
  detail::CompensatedSum sum;
  SeriesEstimate est;
  for (std::uint64_t n = 0; n < n_max; ++n) {
    const double term = detail::series_term(n, p, v);
    sum.add(term);
    if (n == 0) continue;
    est.value = sum.value();
    est.terms_used = n + 1;
    est.tail_bound = detail::tail_majorant(term, n, ratio) +
                     detail::rounding_allowance(est.value, n + 1);
    if (est.tail_bound <= tol) return est;
  }
  throw non_convergence_error(
      "series_distribution: tail bound still above tol after " +
          std::to_string(n_max) + " terms",
      est);
}

namespace detail {

// Central difference at steps h and h/2, one Richardson level.
inline double richardson_derivative(const std::function<double(double)>& f,
                                    double at, double h) {
  const auto central = [&](double step) {
    return (f(at + step) - f(at - step)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace detail

inline constexpr double kDefaultRelativeStep = 1e-5;

/// Relative residual between -d(ln Z)/d(beta), differenced numerically
/// with E = 1 (so beta = x), and the closed-form E f.
inline double check_beta_derivative(const ModePoint& p, double h_rel,
                                    Variant v = Variant::DeformedZpe) {
  if (!(h_rel > 0.0)) {
    throw domain_error("check_beta_derivative: h_rel must be > 0");
  }
  const double pole = is_deformed(v) ? p.gamma() : 0.0;
  if (p.x() - pole < 2.0 * h_rel * p.x()) {
    throw domain_error(
        "check_beta_derivative: distance to the pole x - gamma = " +
        std::to_string(p.x() - pole) + " is below the required margin 2*h_rel*x = " +
        std::to_string(2.0 * h_rel * p.x()));
  }
  const auto& d = p.deformation();
  const auto ln_z = [&](double beta) {
    return log_partition_per_mode(ModePoint(beta, d), v);
  };
  const double u = -detail::richardson_derivative(ln_z, p.x(), h_rel * p.x());
  const double expected = distribution(p, v).value;
  return std::fabs(u - expected) / std::fabs(expected);
}

/// Relative residual between -beta z dOmega/dz, differenced numerically,
/// and the four-term partial-fraction occupation at the same z.
inline double check_fugacity_derivative(const ModePoint& p, double z,
                                        double h_rel) {
  if (!(h_rel > 0.0) || !(z > 0.0) || !std::isfinite(z)) {
    throw domain_error("check_fugacity_derivative: need z > 0 and h_rel > 0");
  }
  const double margin = p.x() - std::log(z) - p.gamma();
  if (margin < 2.0 * h_rel) {
    throw domain_error(
        "check_fugacity_derivative: x - ln z - gamma = " + std::to_string(margin) +
        " is below the required margin 2*h_rel");
  }
  const auto beta_omega = [&](double zz) {
    return -log_partition_fugacity(p, zz);
  };
  const double f = -z * detail::richardson_derivative(beta_omega, z, h_rel * z);
  const double expected = deformed_distribution_fugacity(p, z);
  return std::fabs(f - expected) / std::fabs(expected);
}

// --------------------------------------------------------------------------
// Verification suite

struct GridPoint {
  double x = 0.0;
  double gamma = 0.0;
};

struct CheckEntry {
  std::string name;
  // Absent for checks that run once per gamma rather than per point.
  std::optional<double> x;
  double gamma = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
};

struct VerificationReport {
  std::vector<CheckEntry> checks;

  bool overall_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckEntry& c) { return c.pass; });
  }
};

struct VerificationTolerances {
  double series = 1e-11;            // closed form vs series, absolute
  double series_target = 1e-13;     // tail bound requested from the oracle
  double partial_fraction = 1e-12;  // four-term sum vs closed form, absolute
  double derivative = 1e-7;         // finite-difference identities, relative
  double representation = 1e-12;   // cosh vs sinh-product energy, relative
  double symmetry = 1e-12;          // q vs 1/q raw formula, relative
  double recurrence = 1e-12;        // [n+1] = (q + 1/q)[n] - [n-1], relative
  double undeformed_limit = 1e-6;   // gamma = 1e-8 vs undeformed, relative
  double oracle_consistency = 1e-10;
  double h_rel = kDefaultRelativeStep;
  std::uint64_t recurrence_n_max = 1000;
};

/// gamma in {0, 0.01, 0.05, 0.1, 0.3}, 25 log-spaced x in [gamma + 0.5, 10].
inline std::vector<GridPoint> default_grid() {
  std::vector<GridPoint> grid;
  constexpr int kCount = 25;
  for (double g : {0.0, 0.01, 0.05, 0.1, 0.3}) {
    const double lo = std::log(g + 0.5);
    const double hi = std::log(10.0);
    for (int i = 0; i < kCount; ++i) {
      const double x = i == kCount - 1
                           ? 10.0
                           : std::exp(lo + (hi - lo) * i / (kCount - 1));
      grid.push_back({x, g});
    }
  }
  return grid;
}

namespace detail {

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

// Rational-in-q forms, evaluated without canonicalizing q.
inline double raw_no_zpe(double x, double q) {
  const double ex = std::exp(x);
  return (ex - 1.0) / ((q * ex - 1.0) * (ex / q - 1.0));
}
inline double raw_zpe(double x, double q) {
  const double ex = std::exp(x);
  return 0.5 * (ex * ex - 1.0) / ((ex - q) * (ex - 1.0 / q));
}

class ReportBuilder {
 public:
  explicit ReportBuilder(VerificationReport& r) : report_(r) {}

  void at_most(std::string name, std::optional<double> x, double gamma,
               double residual, double tolerance) {
    report_.checks.push_back({std::move(name), x, gamma, residual, tolerance,
                              std::isfinite(residual) && residual <= tolerance,
                              false});
  }

  // Residual must be strictly negative (a sign condition).
  void negative(std::string name, std::optional<double> x, double gamma,
                double residual) {
    report_.checks.push_back(
        {std::move(name), x, gamma, residual, 0.0, residual < 0.0, false});
  }

  void skip(std::string name, std::optional<double> x, double gamma) {
    report_.checks.push_back(
        {std::move(name), x, gamma, 0.0, 0.0, true, true});
  }

  // Evaluates a residual, turning an exception into a failed entry.
  template <typename F>
  void guarded(const std::string& name, std::optional<double> x, double gamma,
               double tolerance, F&& residual) {
    try {
      at_most(name, x, gamma, residual(), tolerance);
    } catch (const std::exception&) {
      report_.checks.push_back({name, x, gamma,
                                std::numeric_limits<double>::quiet_NaN(),
                                tolerance, false, false});
    }
  }

 private:
  VerificationReport& report_;
};

inline void check_point(ReportBuilder& out, const GridPoint& g,
                        const VerificationTolerances& tol) {
  const ModePoint p(g.x, DeformationParameter::from_gamma(g.gamma));
  const double x = g.x;
  const double gamma = p.gamma();

  for (Variant v : {Variant::DeformedNoZpe, Variant::DeformedZpe}) {
    const std::string name = v == Variant::DeformedZpe ? "series_zpe" : "series_no_zpe";
    out.guarded(name, x, gamma, tol.series, [&] {
      const auto est = series_distribution(p, v, tol.series_target);
      return std::fabs(distribution(p, v).value - est.value);
    });
  }

  out.guarded("oracle_self_consistency", x, gamma, tol.oracle_consistency, [&] {
    const auto coarse = series_distribution(p, Variant::DeformedZpe, 1e-10);
    const auto fine = series_distribution(p, Variant::DeformedZpe, 1e-12);
    return std::fabs(coarse.value - fine.value);
  });

  out.guarded("tail_bound_soundness", x, gamma, 0.0, [&] {
    const auto short_sum = truncated_series(p, Variant::DeformedZpe, 8);
    const auto long_sum = truncated_series(p, Variant::DeformedZpe, 16);
    return std::fabs(short_sum.value - long_sum.value) - short_sum.tail_bound;
  });

  out.guarded("partial_fraction_z1", x, gamma, tol.partial_fraction, [&] {
    return std::fabs(deformed_distribution_fugacity(p, 1.0) -
                     deformed_distribution_zpe(p).value);
  });

  out.guarded("beta_derivative", x, gamma, tol.derivative,
              [&] { return check_beta_derivative(p, tol.h_rel); });

  for (double z : {0.5, 1.0}) {
    out.guarded(z == 1.0 ? "fugacity_derivative_z1" : "fugacity_derivative_z0.5",
                x, gamma, tol.derivative,
                [&] { return check_fugacity_derivative(p, z, tol.h_rel); });
  }

  out.guarded("energy_representation", x, gamma, tol.representation, [&] {
    return relative_difference(mean_energy_cosh_form(p),
                               mean_energy_sinh_product_form(p));
  });

  out.guarded("q_inverse_symmetry", x, gamma, tol.symmetry, [&] {
    const double q = std::exp(gamma);
    double worst = 0.0;
    worst = std::max(worst, relative_difference(raw_no_zpe(x, q), raw_no_zpe(x, 1.0 / q)));
    worst = std::max(worst, relative_difference(raw_zpe(x, q), raw_zpe(x, 1.0 / q)));
    worst = std::max(worst, relative_difference(raw_no_zpe(x, 1.0 / q),
                                                deformed_distribution_no_zpe(p).value));
    worst = std::max(worst, relative_difference(raw_zpe(x, 1.0 / q),
                                                deformed_distribution_zpe(p).value));
    return worst;
  });

  out.negative("zpe_dominance", x, gamma,
               deformed_distribution_no_zpe(p).value -
                   deformed_distribution_zpe(p).value);

  // U grows with gamma at fixed x: U(gamma) > U(gamma/2) > U(0).
  if (gamma > 0.0) {
    const double u = deformed_distribution_zpe(p).value;
    const double u_half = deformed_distribution_zpe(ModePoint(x, DeformationParameter::from_gamma(0.5 * gamma))).value;
    const double u_zero = deformed_distribution_zpe(ModePoint(x)).value;
    out.negative("limit_chain", x, gamma, std::max(u_half - u, u_zero - u_half));
  }

  if (gamma == 0.0) {
    out.guarded("q_to_1_limit", x, 1e-8, tol.undeformed_limit, [&] {
      const ModePoint near(x, DeformationParameter::from_gamma(1e-8));
      const double u0 = undeformed_distribution(p, ZeroPoint::included).value;
      const double ln_z0 = log_partition_per_mode(p, Variant::UndeformedZpe);
      double worst = relative_difference(deformed_distribution_zpe(near).value, u0);
      worst = std::max(worst, relative_difference(
                                  deformed_distribution_fugacity(near, 1.0), u0));
      worst = std::max(worst, relative_difference(mean_energy_cosh_form(near), u0));
      worst = std::max(worst, relative_difference(
                                  log_partition_per_mode(near, Variant::DeformedZpe),
                                  ln_z0));
      return worst;
    });
  }
}

inline void check_gamma(ReportBuilder& out, double gamma, std::vector<double> xs,
                        const VerificationTolerances& tol) {
  const auto d = DeformationParameter::from_gamma(gamma);

  out.guarded("basis_recurrence", std::nullopt, gamma, tol.recurrence, [&] {
    const double two_cosh = d.q() + d.q_inverse();
    double worst = 0.0;
    for (std::uint64_t n = 1; n < tol.recurrence_n_max; ++n) {
      // Stop where [n+1] leaves the double range.
      if (log_basis_number(n + 1, d) > 700.0) break;
      const double lhs = basis_number(n + 1, d);
      const double rhs = two_cosh * basis_number(n, d) - basis_number(n - 1, d);
      worst = std::max(worst, relative_difference(lhs, rhs));
    }
    return worst;
  });

  std::sort(xs.begin(), xs.end());
  if (xs.size() >= 2) {
    double worst = -std::numeric_limits<double>::infinity();
    for (Variant v : {Variant::UndeformedNoZpe, Variant::UndeformedZpe,
                      Variant::DeformedNoZpe, Variant::DeformedZpe}) {
      for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] == xs[i - 1]) continue;
        const double lo = distribution(ModePoint(xs[i - 1], d), v).value;
        const double hi = distribution(ModePoint(xs[i], d), v).value;
        worst = std::max(worst, hi - lo);
      }
    }
    if (std::isfinite(worst)) out.negative("monotone_in_x", std::nullopt, gamma, worst);
  }

  EnsembleSpec e{1, xs, d};
  out.at_most("additivity", std::nullopt, gamma, [&] {
    double u = 0.0;
    double ln_z = 0.0;
    for (double x : xs) {
      const ModePoint p(x, d);
      u += x * deformed_distribution_zpe(p).value;
      ln_z += log_partition_per_mode(p, Variant::DeformedZpe);
    }
    return std::max(std::fabs(internal_energy(e) - u),
                    std::fabs(log_partition(e) - ln_z));
  }(), 0.0);
}

}  // namespace detail

/// Runs every pointwise and per-gamma identity over the grid.  Points with
/// x <= 0 or x <= gamma get an explicit skip entry.  Entry order follows
/// the grid, then distinct gammas in ascending order.
inline VerificationReport run_verification_suite(
    const std::vector<GridPoint>& grid, const VerificationTolerances& tol = {}) {
  VerificationReport report;
  detail::ReportBuilder out(report);
  std::map<double, std::vector<double>> by_gamma;
  for (const auto& g : grid) {
    const double gamma = std::fabs(g.gamma);
    if (!std::isfinite(g.x) || !std::isfinite(g.gamma) || !(g.x > gamma)) {
      out.skip("domain_skip", g.x, gamma);
      continue;
    }
    detail::check_point(out, {g.x, gamma}, tol);
    by_gamma[gamma].push_back(g.x);
  }
  for (const auto& [gamma, xs] : by_gamma) {
    detail::check_gamma(out, gamma, xs, tol);
  }
  return report;
}

}  // namespace qdeform

#endif  // QDEFORM_ORACLE_HPP
