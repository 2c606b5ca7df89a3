#ifndef QDEFORM_DISTRIBUTIONS_HPP
#define QDEFORM_DISTRIBUTIONS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qdeform/errors.hpp"
#include "qdeform/qmath.hpp"

namespace qdeform {

enum class Variant { UndeformedNoZpe, UndeformedZpe, DeformedNoZpe, DeformedZpe };

// Whether the symmetrized zero-point spectrum 1/2([n+1] + [n]) is used.
enum class ZeroPoint : bool { excluded = false, included = true };

inline constexpr bool has_zero_point(Variant v) {
  return v == Variant::UndeformedZpe || v == Variant::DeformedZpe;
}
inline constexpr bool is_deformed(Variant v) {
  return v == Variant::DeformedNoZpe || v == Variant::DeformedZpe;
}

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::UndeformedNoZpe: return "undeformed-nozpe";
    case Variant::UndeformedZpe: return "undeformed-zpe";
    case Variant::DeformedNoZpe: return "deformed-nozpe";
    case Variant::DeformedZpe: return "deformed-zpe";
  }
  return "unknown";
}

inline std::optional<Variant> parse_variant(std::string_view s) {
  for (Variant v : {Variant::UndeformedNoZpe, Variant::UndeformedZpe,
                    Variant::DeformedNoZpe, Variant::DeformedZpe}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

/// One oscillator mode at one temperature: x = beta*hbar*omega plus the
/// deformation.  Only x > 0 is enforced here; the deformed closed forms
/// additionally need x > gamma and check it themselves.
class ModePoint {
 public:
  ModePoint(double x, DeformationParameter d) : x_(x), deformation_(d) {
    if (!std::isfinite(x) || !(x > 0.0)) {
      throw domain_error("mode point: x must be finite and > 0, got " +
                         std::to_string(x));
    }
  }
  explicit ModePoint(double x) : ModePoint(x, DeformationParameter{}) {}

  double x() const { return x_; }
  double gamma() const { return deformation_.gamma(); }
  const DeformationParameter& deformation() const { return deformation_; }

  // Geometric ratio q e^{-x} of the deformed series is below one.
  bool below_pole() const { return x_ > deformation_.gamma(); }

 private:
  double x_;
  DeformationParameter deformation_;
};

inline void require_below_pole(const ModePoint& p, std::string_view what) {
  if (!p.below_pole()) {
    throw domain_error(std::string(what) +
                       ": x must exceed gamma (pole at e^x = q), got x = " +
                       std::to_string(p.x()) +
                       ", gamma = " + std::to_string(p.gamma()));
  }
}

struct DistributionResult {
  double value = 0.0;
  Variant variant = Variant::UndeformedNoZpe;
};

/// Undeformed canonical level probability P_n^(0).  The deformed theory
/// reuses these as its first-iteration weights.
inline double occupation_probability(std::uint64_t n, const ModePoint& p,
                                     ZeroPoint zpe) {
  const double x = p.x();
  const double nd = static_cast<double>(n);
  if (zpe == ZeroPoint::included && x < 700.0) {
    return 2.0 * std::sinh(0.5 * x) * std::exp(-(nd + 0.5) * x);
  }
  // 2 sinh(x/2) e^{-x/2} = 1 - e^{-x}, so both spectra share this form.
  return detail::one_minus_exp_neg(x) * std::exp(-nd * x);
}

inline double log_occupation_probability(std::uint64_t n, const ModePoint& p) {
  return std::log1p(-std::exp(-p.x())) - static_cast<double>(n) * p.x();
}

/// Bose-Einstein occupation 1/(e^x - 1), plus 1/2 with the zero point.
inline DistributionResult undeformed_distribution(const ModePoint& p,
                                                  ZeroPoint zpe) {
  const double f = 1.0 / std::expm1(p.x());
  if (zpe == ZeroPoint::included) {
    return {0.5 + f, Variant::UndeformedZpe};
  }
  return {f, Variant::UndeformedNoZpe};
}

namespace detail {

// (1 - e^{-(x+g)}) (1 - e^{-(x-g)}) = 2 e^{-x} (cosh x - cosh g).
inline double pole_factor(double x, double g) {
  return one_minus_exp_neg(x + g) * one_minus_exp_neg(x - g);
}

}  // namespace detail

/// First-iteration deformed mean occupation sum_n [n] P_n^(0):
///   (e^x - 1) / ((q e^x - 1)(q^-1 e^x - 1))
///     = e^{-x/2} sinh(x/2) / (cosh x - cosh gamma),
/// evaluated with every factor scaled by e^{-x}.
inline DistributionResult deformed_distribution_no_zpe(const ModePoint& p) {
  require_below_pole(p, "deformed_distribution_no_zpe");
  const double x = p.x();
  const double num = std::exp(-x) * detail::one_minus_exp_neg(x);
  return {num / detail::pole_factor(x, p.gamma()), Variant::DeformedNoZpe};
}

/// Zero-point deformed occupation sum_n 1/2([n+1] + [n]) P_n^(0):
///   1/2 sinh x / (cosh x - cosh gamma).
inline DistributionResult deformed_distribution_zpe(const ModePoint& p) {
  require_below_pole(p, "deformed_distribution_zpe");
  const double x = p.x();
  const double num = 0.5 * detail::one_minus_exp_neg(2.0 * x);
  return {num / detail::pole_factor(x, p.gamma()), Variant::DeformedZpe};
}

inline DistributionResult distribution(const ModePoint& p, Variant v) {
  switch (v) {
    case Variant::UndeformedNoZpe:
      return undeformed_distribution(p, ZeroPoint::excluded);
    case Variant::UndeformedZpe:
      return undeformed_distribution(p, ZeroPoint::included);
    case Variant::DeformedNoZpe:
      return deformed_distribution_no_zpe(p);
    case Variant::DeformedZpe:
      return deformed_distribution_zpe(p);
  }
  throw domain_error("distribution: unknown variant");
}

struct PartialFractionCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// c1 = q/(q - q^-1), c2 = -q^-1/(q - q^-1).
///
/// c1 = 1/(1 - e^{-2 gamma}) > 1, and c2 is formed as 1 - c1; since c1 - 1
/// is exact for c1 < 2^53, c1 + c2 == 1 holds exactly in floating point.
inline PartialFractionCoefficients partial_fraction_coefficients(
    const DeformationParameter& d) {
  if (d.is_undeformed()) {
    throw singular_decomposition_error(
        "partial_fraction_coefficients: gamma = 0, c1 and c2 diverge");
  }
  const double c1 = 1.0 / detail::one_minus_exp_neg(2.0 * d.gamma());
  if (!std::isfinite(c1)) {
    throw singular_decomposition_error(
        "partial_fraction_coefficients: gamma too small, c1 overflows");
  }
  return {c1, 1.0 - c1};
}

/// Four-term partial-fraction form of the zero-point deformed occupation
/// with the chemical potential reinstated, e^{-x} -> z e^{-beta E} and
/// beta E = p.x():
///
///   1/2 [ c1/(1 - q z e^{-bE}) + c2/(1 - z q^-1 e^{-bE})
///       + c2/(e^{bE}/(q z) - 1) + c1/(q e^{bE}/z - 1) ].
///
/// At z = 1 this equals deformed_distribution_zpe.  At gamma = 0 the
/// coefficients are singular and the q -> 1 limit 1/2 coth(x_eff/2) is
/// returned instead.
inline double deformed_distribution_fugacity(const ModePoint& p, double z) {
  if (!std::isfinite(z) || !(z > 0.0)) {
    throw domain_error("deformed_distribution_fugacity: z must be finite and > 0");
  }
  const double g = p.gamma();
  // Every factor depends on z e^{-bE} = e^{-x_eff} only.
  const double x_eff = p.x() - std::log(z);
  if (!(x_eff > g)) {
    throw domain_error(
        "deformed_distribution_fugacity: factor (1 - q z e^{-x}) must be "
        "positive, requires x - ln z > gamma; got x - ln z = " +
        std::to_string(x_eff) + ", gamma = " + std::to_string(g));
  }
  if (p.deformation().is_undeformed()) {
    return 0.5 / std::tanh(0.5 * x_eff);
  }
  const auto [c1, c2] = partial_fraction_coefficients(p.deformation());
  const double t1 = c1 / -std::expm1(g - x_eff);   // 1 - q z e^{-bE}
  const double t2 = c2 / -std::expm1(-g - x_eff);  // 1 - z q^-1 e^{-bE}
  const double t3 = c2 / std::expm1(x_eff - g);    // e^{bE}/(q z) - 1
  const double t4 = c1 / std::expm1(x_eff + g);    // q e^{bE}/z - 1
  return 0.5 * (t1 + t2 + t3 + t4);
}

}  // namespace qdeform

#endif  // QDEFORM_DISTRIBUTIONS_HPP
