#ifndef QDEFORM_QMATH_HPP
#define QDEFORM_QMATH_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qdeform/errors.hpp"

namespace qdeform {

enum class DeformationKind { from_q, from_gamma };

/// Deformation of the boson algebra, held as gamma = ln q.
///
/// The canonical form has gamma >= 0: every quantity in this library is
/// invariant under q -> 1/q, so a parameter built from q < 1 (or a negative
/// gamma) is folded onto its reciprocal.  gamma == 0 is the undeformed theory.
class DeformationParameter {
 public:
  constexpr DeformationParameter() = default;

  static DeformationParameter from_gamma(double gamma) {
    if (!std::isfinite(gamma)) {
      throw domain_error("deformation: gamma must be finite");
    }
    return DeformationParameter(std::fabs(gamma));
  }

  static DeformationParameter from_q(double q) {
    if (!std::isfinite(q) || !(q > 0.0)) {
      throw domain_error("deformation: q must be a finite positive number");
    }
    return DeformationParameter(std::fabs(std::log(q)));
  }

  static DeformationParameter undeformed() { return {}; }

  double gamma() const { return gamma_; }
  double q() const { return std::exp(gamma_); }
  double q_inverse() const { return std::exp(-gamma_); }
  bool is_undeformed() const { return gamma_ == 0.0; }

  friend bool operator==(const DeformationParameter&,
                         const DeformationParameter&) = default;

 private:
  explicit DeformationParameter(double gamma) : gamma_(gamma) {}
  double gamma_ = 0.0;
};

inline DeformationParameter make_deformation(double value,
                                             DeformationKind kind) {
  return kind == DeformationKind::from_q
             ? DeformationParameter::from_q(value)
             : DeformationParameter::from_gamma(value);
}

namespace detail {

// Below these the sinh ratio is replaced by its Taylor expansion; the
// dropped (n*gamma)^4 term is under 1e-14 relative.
inline constexpr double kSmallGamma = 1e-6;
inline constexpr double kSmallNGamma = 1e-3;
// Above this n*gamma the two sinh factors are evaluated in scaled form.
inline constexpr double kLargeNGamma = 20.0;

// 1 - exp(-a) without cancellation for small a.
inline double one_minus_exp_neg(double a) { return -std::expm1(-a); }

}  // namespace detail

/// The q-number [n] = (q^n - q^-n)/(q - q^-1) = sinh(n gamma)/sinh(gamma).
/// Exactly n when gamma == 0; throws overflow_error when [n] exceeds the
/// double range.
inline double basis_number(std::uint64_t n, const DeformationParameter& d) {
  const double g = d.gamma();
  const double nd = static_cast<double>(n);
  if (n == 0) return 0.0;
  if (n == 1) return 1.0;
  if (g == 0.0) return nd;
  const double ng = nd * g;
  if (g < detail::kSmallGamma && ng < detail::kSmallNGamma) {
    return nd * (1.0 + (nd * nd - 1.0) * g * g / 6.0);
  }
  if (ng > detail::kLargeNGamma) {
    // sinh(n g)/sinh(g) = e^{(n-1) g} (1 - e^{-2 n g}) / (1 - e^{-2 g})
    const double log_value = (nd - 1.0) * g +
                             std::log(detail::one_minus_exp_neg(2.0 * ng)) -
                             std::log(detail::one_minus_exp_neg(2.0 * g));
    const double value = std::exp(log_value);
    if (!std::isfinite(value)) {
      throw overflow_error("basis_number: [" + std::to_string(n) +
                           "] overflows double precision at gamma = " +
                           std::to_string(g));
    }
    return value;
  }
  return std::sinh(ng) / std::sinh(g);
}

/// ln [n] for n >= 1, finite for every n the integer type can hold.
inline double log_basis_number(std::uint64_t n, const DeformationParameter& d) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const double g = d.gamma();
  const double nd = static_cast<double>(n);
  if (g == 0.0) return std::log(nd);
  const double ng = nd * g;
  if (ng <= detail::kLargeNGamma) return std::log(basis_number(n, d));
  return (nd - 1.0) * g + std::log(detail::one_minus_exp_neg(2.0 * ng)) -
         std::log(detail::one_minus_exp_neg(2.0 * g));
}

struct BasisNumberValue {
  std::uint64_t n = 0;
  double value = 0.0;
};

/// [0], [1], ..., [count - 1].
inline std::vector<BasisNumberValue> basis_numbers(
    std::uint64_t count, const DeformationParameter& d) {
  std::vector<BasisNumberValue> out;
  out.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    out.push_back({n, basis_number(n, d)});
  }
  return out;
}

}  // namespace qdeform

#endif  // QDEFORM_QMATH_HPP
