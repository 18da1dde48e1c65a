#include "analysis/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace boolvol::detail {

namespace {

template <class Fn>
BigFloat unary(const BigFloat& x, Fn fn) {
  BigFloat r(x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

void widen(BigFloat& a, const BigFloat& b) {
  if (b.precision() > a.precision()) mpfr_prec_round(a.get(), b.precision(), MPFR_RNDN);
}

}  // namespace

BigFloat::BigFloat(mpfr_prec_t bits, double value) {
  mpfr_init2(v_, bits);
  mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // Swap in a minimal placeholder so the moved-from object stays valid.
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

mpfr_prec_t BigFloat::bits_for_digits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

double BigFloat::log_double() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  BigFloat r(precision());
  mpfr_log(r.v_, v_, MPFR_RNDN);
  return r.to_double();
}

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  widen(*this, o);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  widen(*this, o);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  widen(*this, o);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  widen(*this, o);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(double o) {
  mpfr_mul_d(v_, v_, o, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator+=(double o) {
  mpfr_add_d(v_, v_, o, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(double o) {
  mpfr_sub_d(v_, v_, o, MPFR_RNDN);
  return *this;
}

BigFloat operator-(double b, const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_d_sub(r.get(), b, a.get(), MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& x) { return unary(x, mpfr_log); }
BigFloat exp(const BigFloat& x) { return unary(x, mpfr_exp); }
BigFloat expm1(const BigFloat& x) { return unary(x, mpfr_expm1); }
BigFloat log1p(const BigFloat& x) { return unary(x, mpfr_log1p); }
BigFloat sqrt(const BigFloat& x) { return unary(x, mpfr_sqrt); }
BigFloat abs(const BigFloat& x) { return unary(x, mpfr_abs); }

}  // namespace boolvol::detail
