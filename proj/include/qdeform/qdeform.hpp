#ifndef QDEFORM_QDEFORM_HPP
#define QDEFORM_QDEFORM_HPP

#include "qdeform/errors.hpp"
#include "qdeform/qmath.hpp"
#include "qdeform/distributions.hpp"
#include "qdeform/thermo.hpp"
#include "qdeform/oracle.hpp"
#include "qdeform/output.hpp"

#endif  // QDEFORM_QDEFORM_HPP
