#pragma once

#include "dioph/exact_arith.hpp"

namespace dioph {

/// Rigorous enclosure of ln(r) for r > 0, computed with directed rounding at
/// `precision_bits` bits and converted exactly to rationals.
RationalEnclosure ln_enclosure(const BigRational& r, long precision_bits = 128);

/// Midpoint as a double, for diagnostics and printing only.
double approx(const RationalEnclosure& e);
double approx(const BigRational& r);

}  // namespace dioph
