#pragma once

// Independent high-precision oracle: the real x is evaluated in closed form
// with MPFR at 400 bits, never through continued fractions.

#include <mpfr.h>

#include <random>
#include <string>

#include "dioph/exact_arith.hpp"

namespace oracle {

enum class Real { sqrt2, golden, sqrt3_minus_1 };

class Value {
 public:
  explicit Value(Real r) {
    mpfr_init2(v_, 400);
    switch (r) {
      case Real::sqrt2:
        mpfr_sqrt_ui(v_, 2, MPFR_RNDN);
        break;
      case Real::golden:
        mpfr_sqrt_ui(v_, 5, MPFR_RNDN);
        mpfr_add_ui(v_, v_, 1, MPFR_RNDN);
        mpfr_div_ui(v_, v_, 2, MPFR_RNDN);
        break;
      case Real::sqrt3_minus_1:
        mpfr_sqrt_ui(v_, 3, MPFR_RNDN);
        mpfr_sub_ui(v_, v_, 1, MPFR_RNDN);
        break;
    }
  }
  ~Value() { mpfr_clear(v_); }
  Value(const Value&) = delete;
  Value& operator=(const Value&) = delete;

  // ||q x|| to about 110 decimal digits, as a rational.
  dioph::BigRational dist(const dioph::BigInt& q) const {
    mpfr_t t;
    mpfr_init2(t, 400);
    mpfr_mul_z(t, v_, q.get_mpz_t(), MPFR_RNDN);
    mpfr_t f;
    mpfr_init2(f, 400);
    mpfr_frac(f, t, MPFR_RNDN);
    if (mpfr_cmp_d(f, 0.5) > 0) mpfr_ui_sub(f, 1, f, MPFR_RNDN);
    dioph::BigRational out;
    mpfr_get_q(out.get_mpq_t(), f);
    mpfr_clear(t);
    mpfr_clear(f);
    return out;
  }

 private:
  mpfr_t v_;
};

// Absolute error bound of Value::dist for q below 2^64.
inline dioph::BigRational slack() { return dioph::BigRational(1) / (dioph::BigInt(1) << 300); }

inline dioph::BigRational random_rational(std::mt19937_64& rng, long max_num, long max_den) {
  std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
  dioph::BigRational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

}  // namespace oracle
