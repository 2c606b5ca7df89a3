#ifndef QDEFORM_ERRORS_HPP
#define QDEFORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdeform {

// Argument outside the region where a formula or series is defined
// (x <= 0, x <= gamma, non-positive q, non-finite input, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A finite-input evaluation whose exact result is not representable.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Partial-fraction coefficients requested at gamma = 0, where each one
// diverges individually.
class singular_decomposition_error : public domain_error {
 public:
  using domain_error::domain_error;
};

}  // namespace qdeform

#endif  // QDEFORM_ERRORS_HPP
