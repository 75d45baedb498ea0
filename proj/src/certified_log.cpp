#include "dioph/certified_log.hpp"

#include <mpfr.h>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

class Mpfr {
 public:
  explicit Mpfr(long prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

  BigRational to_rational() {
    BigRational out;
    mpfr_get_q(out.get_mpq_t(), v_);
    return out;
  }

 private:
  mpfr_t v_;
};

// ln(n) for n >= 1, rounded in direction `rnd`.
BigRational ln_integer(const BigInt& n, long prec, mpfr_rnd_t rnd) {
  Mpfr v(prec);
  mpfr_set_z(v.get(), n.get_mpz_t(), rnd);
  mpfr_log(v.get(), v.get(), rnd);
  return v.to_rational();
}

}  // namespace

RationalEnclosure ln_enclosure(const BigRational& r, long precision_bits) {
  if (r <= 0) throw InvalidInput("ln_enclosure: argument must be positive");
  const BigInt& num = r.get_num();
  const BigInt& den = r.get_den();
  BigRational num_lo = ln_integer(num, precision_bits, MPFR_RNDD);
  BigRational num_hi = ln_integer(num, precision_bits, MPFR_RNDU);
  if (den == 1) return {num_lo, num_hi};
  BigRational den_lo = ln_integer(den, precision_bits, MPFR_RNDD);
  BigRational den_hi = ln_integer(den, precision_bits, MPFR_RNDU);
  return {num_lo - den_hi, num_hi - den_lo};
}

double approx(const BigRational& r) { return r.get_d(); }

double approx(const RationalEnclosure& e) { return BigRational((e.lo + e.hi) / 2).get_d(); }

}  // namespace dioph
