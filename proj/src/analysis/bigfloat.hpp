#pragma once

#include <mpfr.h>

#include <string>

namespace boolvol::detail {

/// Owning MPFR value with its own precision. Binary operations round to the
/// larger of the operand precisions.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits, double value = 0.0);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  static mpfr_prec_t bits_for_digits(unsigned digits);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Natural log as a double; -inf for zero.
  double log_double() const;
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  std::string to_string(int digits) const;

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat& operator*=(double o);
  BigFloat& operator+=(double o);
  BigFloat& operator-=(double o);

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
  friend BigFloat operator*(BigFloat a, double b) { return a *= b; }
  friend BigFloat operator*(double b, BigFloat a) { return a *= b; }
  friend BigFloat operator+(BigFloat a, double b) { return a += b; }
  friend BigFloat operator+(double b, BigFloat a) { return a += b; }
  friend BigFloat operator-(BigFloat a, double b) { return a -= b; }
  friend BigFloat operator-(double b, const BigFloat& a);

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }

 private:
  mpfr_t v_;
};

BigFloat log(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat expm1(const BigFloat& x);
BigFloat log1p(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat abs(const BigFloat& x);

}  // namespace boolvol::detail
