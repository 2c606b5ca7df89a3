#ifndef QDEFORM_THERMO_HPP
#define QDEFORM_THERMO_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdeform/distributions.hpp"
#include "qdeform/errors.hpp"
#include "qdeform/qmath.hpp"

// Everything here is dimensionless: ln Z, beta*Omega, beta*U and U/(N E).

namespace qdeform {

namespace detail {

// ln(1 - e^{-a}) for a > 0, accurate at both ends.
inline double log_one_minus_exp_neg(double a) {
  return a < 0.6931471805599453 ? std::log(-std::expm1(-a))
                                : std::log1p(-std::exp(-a));
}

// -1/2 ln(2 (cosh x - cosh g)) written as
// -x/2 - 1/2 ln((1 - q e^{-x})(1 - q^-1 e^{-x})).
inline double log_partition_deformed_zpe(double x, double g) {
  return -0.5 * x -
         0.5 * (log_one_minus_exp_neg(x + g) + log_one_minus_exp_neg(x - g));
}

}  // namespace detail

/// Single-mode ln Z.
///
///   undeformed, no zero point:  ln(e^x/(e^x - 1))
///   undeformed, zero point:     -ln(2 sinh(x/2))
///   deformed, zero point:       -1/2 ln(2 (cosh x - cosh gamma))
///   deformed, no zero point:    -ln(1 - q e^-x)/(1 + q) - q ln(1 - e^-x/q)/(1 + q)
///
/// The deformed forms are the antiderivatives in beta that reproduce
/// U = -d(ln Z)/d(beta) = E f for the matching occupation; the zero-point
/// one reduces to -ln(2 sinh(x/2)) at gamma = 0 and the other to the
/// undeformed no-zero-point value.
inline double log_partition_per_mode(const ModePoint& p, Variant v) {
  const double x = p.x();
  switch (v) {
    case Variant::UndeformedNoZpe:
      return -detail::log_one_minus_exp_neg(x);
    case Variant::UndeformedZpe:
      return -0.5 * x - detail::log_one_minus_exp_neg(x);
    case Variant::DeformedZpe:
      require_below_pole(p, "log_partition_per_mode");
      return detail::log_partition_deformed_zpe(x, p.gamma());
    case Variant::DeformedNoZpe: {
      require_below_pole(p, "log_partition_per_mode");
      const double g = p.gamma();
      const double w_plus = 1.0 / (1.0 + std::exp(g));    // 1/(1+q)
      const double w_minus = 1.0 / (1.0 + std::exp(-g));  // q/(1+q)
      return -w_plus * detail::log_one_minus_exp_neg(x - g) -
             w_minus * detail::log_one_minus_exp_neg(x + g);
    }
  }
  throw domain_error("log_partition_per_mode: unknown variant");
}

inline double log_partition_per_mode(const ModePoint& p, ZeroPoint zpe,
                                     bool deformed) {
  const bool with = zpe == ZeroPoint::included;
  const Variant v = deformed ? (with ? Variant::DeformedZpe : Variant::DeformedNoZpe)
                             : (with ? Variant::UndeformedZpe : Variant::UndeformedNoZpe);
  return log_partition_per_mode(p, v);
}

/// Fugacity-dependent zero-point deformed ln Z of one mode.  It depends on
/// (x, z) only through x - ln z, so z d/dz of it is the four-term occupation
/// and at z = 1 it is log_partition_per_mode(p, DeformedZpe).
inline double log_partition_fugacity(const ModePoint& p, double z) {
  if (!std::isfinite(z) || !(z > 0.0)) {
    throw domain_error("log_partition_fugacity: z must be finite and > 0");
  }
  const double x_eff = p.x() - std::log(z);
  if (!(x_eff > p.gamma())) {
    throw domain_error(
        "log_partition_fugacity: requires q z e^{-x} < 1, got x - ln z = " +
        std::to_string(x_eff) + ", gamma = " + std::to_string(p.gamma()));
  }
  return detail::log_partition_deformed_zpe(x_eff, p.gamma());
}

/// N identical oscillators for each listed mode x_k = beta hbar omega_k.
struct EnsembleSpec {
  std::uint64_t n_oscillators = 1;
  std::vector<double> mode_x;
  DeformationParameter deformation;

  void validate() const {
    if (n_oscillators == 0) {
      throw domain_error("ensemble: n_oscillators must be positive");
    }
    for (double x : mode_x) {
      if (!std::isfinite(x) || !(x > 0.0)) {
        throw domain_error("ensemble: every mode x must be finite and > 0");
      }
    }
  }
};

/// beta * Omega = -ln Z for the ensemble at fugacity z, summed left to
/// right over modes.
inline double thermodynamic_potential(const EnsembleSpec& e, double z) {
  e.validate();
  const double n = static_cast<double>(e.n_oscillators);
  double sum = 0.0;
  for (double x : e.mode_x) {
    sum += -n * log_partition_fugacity(ModePoint(x, e.deformation), z);
  }
  return sum;
}

/// ln Z of the zero-point deformed ensemble at z = 1.
inline double log_partition(const EnsembleSpec& e) {
  e.validate();
  const double n = static_cast<double>(e.n_oscillators);
  double sum = 0.0;
  for (double x : e.mode_x) {
    sum += n * log_partition_per_mode(ModePoint(x, e.deformation),
                                      Variant::DeformedZpe);
  }
  return sum;
}

/// U/(N E) for one mode, cosh-difference form 1/2 sinh x/(cosh x - cosh g),
/// with numerator and denominator scaled by 2 e^{-x}.
inline double mean_energy_cosh_form(const ModePoint& p) {
  require_below_pole(p, "mean_energy_cosh_form");
  const double x = p.x();
  const double e1 = std::exp(-x);
  const double e2 = std::exp(-2.0 * x);
  return 0.5 * (1.0 - e2) / (1.0 + e2 - 2.0 * std::cosh(p.gamma()) * e1);
}

/// U/(N E) for one mode, factorized form
/// 1/2 sinh(x/2) cosh(x/2) / (sinh((x+g)/2) sinh((x-g)/2)).
inline double mean_energy_sinh_product_form(const ModePoint& p) {
  require_below_pole(p, "mean_energy_sinh_product_form");
  const double x = p.x();
  const double g = p.gamma();
  if (x > 700.0) {
    // sinh/cosh overflow; same product with each factor scaled by e^{-a}.
    return 0.5 * detail::one_minus_exp_neg(2.0 * x) / detail::pole_factor(x, g);
  }
  return 0.5 * std::sinh(0.5 * x) * std::cosh(0.5 * x) /
         (std::sinh(0.5 * (x + g)) * std::sinh(0.5 * (x - g)));
}

/// beta * U = sum_k N x_k f_q(x_k) for the zero-point deformed ensemble.
inline double internal_energy(const EnsembleSpec& e) {
  e.validate();
  const double n = static_cast<double>(e.n_oscillators);
  double sum = 0.0;
  for (double x : e.mode_x) {
    sum += n * x * deformed_distribution_zpe(ModePoint(x, e.deformation)).value;
  }
  return sum;
}

enum class Regime { LowT, HighT, Intermediate };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::LowT: return "low-t";
    case Regime::HighT: return "high-t";
    case Regime::Intermediate: return "intermediate";
  }
  return "unknown";
}

struct RegimeThresholds {
  double low_t_min_x = 10.0;          // LowT: x >= this
  double low_t_gamma_ratio = 1e-2;    // LowT: gamma <= ratio * x
  double high_t_max_x = 1e-2;         // HighT: x <= this
  double high_t_gamma_power = 2.0;    // HighT: gamma <= x^power
  double small_deformation_ratio = 1e-2;  // gamma << x means gamma <= ratio * x
};

inline Regime classify_regime(double x, double gamma,
                              const RegimeThresholds& t = {}) {
  if (x >= t.low_t_min_x && gamma <= t.low_t_gamma_ratio * x) {
    return Regime::LowT;
  }
  if (x <= t.high_t_max_x && gamma <= std::pow(x, t.high_t_gamma_power)) {
    return Regime::HighT;
  }
  return Regime::Intermediate;
}

struct RegimeReport {
  Regime regime = Regime::Intermediate;
  bool small_deformation = false;
  // U / E of the limiting law: N/2 at low T, N/x (U = N k T) at high T.
  std::optional<double> asymptote;
  // |U/asymptote - 1|.
  std::optional<double> deviation;
};

/// Places a point in the low/high temperature limits of the zero-point
/// deformed internal energy and measures how close U is to the limit.
inline RegimeReport regime_report(const ModePoint& p, std::uint64_t n_oscillators,
                                  const RegimeThresholds& t = {}) {
  require_below_pole(p, "regime_report");
  if (n_oscillators == 0) {
    throw domain_error("regime_report: n_oscillators must be positive");
  }
  RegimeReport r;
  r.regime = classify_regime(p.x(), p.gamma(), t);
  r.small_deformation = p.gamma() <= t.small_deformation_ratio * p.x();
  const double n = static_cast<double>(n_oscillators);
  const double f = deformed_distribution_zpe(p).value;
  switch (r.regime) {
    case Regime::LowT:
      r.asymptote = 0.5 * n;
      r.deviation = std::fabs(2.0 * f - 1.0);
      break;
    case Regime::HighT:
      r.asymptote = n / p.x();
      r.deviation = std::fabs(p.x() * f - 1.0);
      break;
    case Regime::Intermediate:
      break;
  }
  return r;
}

}  // namespace qdeform

#endif  // QDEFORM_THERMO_HPP
