#pragma once
/**
 * @file real.hpp
 * @brief RAII wrappers over MPFR: a variable-precision real and a complex type built on it.
 *
 * New values are created at the thread's working precision, which is set with
 * PrecisionScope. Copies keep the precision of their source, arithmetic results
 * are produced at the working precision.
 */

#include <mpfr.h>
#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

namespace sdet {

using Bits = mpfr_prec_t;

namespace detail {
inline Bits& working_bits() noexcept {
  thread_local Bits bits = 128;
  return bits;
}
}  // namespace detail

inline Bits working_precision() noexcept { return detail::working_bits(); }

/// Sets the working precision of the calling thread for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(Bits bits) : saved_(detail::working_bits()) {
    detail::working_bits() = bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits;
  }
  ~PrecisionScope() { detail::working_bits() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  Bits saved_;
};

class Real {
 public:
  Real() { init(); mpfr_set_zero(v_, 1); }
  Real(int x) { init(); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(long x) { init(); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(unsigned long x) { init(); mpfr_set_ui(v_, x, MPFR_RNDN); }
  Real(double x) { init(); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const mpz_class& x) { init(); mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN); }
  Real(const mpq_class& x) { init(); mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN); }
  explicit Real(const std::string& decimal) {
    init();
    mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  /// Copy of `x` re-rounded to the current working precision.
  static Real at_working_precision(const Real& x) {
    Real r;
    mpfr_set(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  mpfr_ptr raw() noexcept { return v_; }
  mpfr_srcptr raw() const noexcept { return v_; }
  Bits precision() const noexcept { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log2|x| without overflow; -inf for zero.
  double log2_abs() const {
    if (mpfr_zero_p(v_)) return -INFINITY;
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
  }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Real operator-() const {
    Real r;
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }
  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(long o) { mpfr_mul_si(v_, v_, o, MPFR_RNDN); return *this; }
  Real& operator/=(long o) { mpfr_div_si(v_, v_, o, MPFR_RNDN); return *this; }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, long b) { Real r; mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, long b) { Real r; mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, long b) { Real r; mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, long b) { Real r; mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator-(long a, const Real& b) { Real r; mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator/(long a, const Real& b) { Real r; mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }

 private:
  void init() { mpfr_init2(v_, working_precision()); }
  mpfr_t v_;
};

// Unary maps use the same pattern; keep them terse.
#define SDET_REAL_UNARY(name, fn)        \
  inline Real name(const Real& x) {      \
    Real r;                              \
    fn(r.raw(), x.raw(), MPFR_RNDN);     \
    return r;                            \
  }
SDET_REAL_UNARY(abs, mpfr_abs)
SDET_REAL_UNARY(sqrt, mpfr_sqrt)
SDET_REAL_UNARY(exp, mpfr_exp)
SDET_REAL_UNARY(log, mpfr_log)
SDET_REAL_UNARY(sin, mpfr_sin)
SDET_REAL_UNARY(cos, mpfr_cos)
SDET_REAL_UNARY(acos, mpfr_acos)
SDET_REAL_UNARY(log1p, mpfr_log1p)
#undef SDET_REAL_UNARY

inline Real atan2(const Real& y, const Real& x) {
  Real r;
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& x, const Real& y) {
  Real r;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
inline Real hypot(const Real& x, const Real& y) {
  Real r;
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
inline Real ldexp(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}
inline Real floor(const Real& x) {
  Real r;
  mpfr_floor(r.raw(), x.raw());
  return r;
}
inline Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}
inline Real euler_gamma() {
  Real r;
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}
inline Real zeta(unsigned long k) {
  Real r;
  mpfr_zeta_ui(r.raw(), k, MPFR_RNDN);
  return r;
}
/// 2^{-k} at working precision.
inline Real epsilon_bits(long k) { return ldexp(Real(1), -k); }

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }

/// Scientific notation with `digits` significant digits, e.g. "1.2500e-03".
inline std::string to_string(const Real& x, int digits) {
  if (digits < 1) digits = 1;
  if (x.is_zero()) return "0";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, x.raw());
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

class Complex {
 public:
  Complex() = default;
  Complex(int x) : re_(x) {}
  Complex(long x) : re_(x) {}
  Complex(double x) : re_(x) {}
  Complex(Real re) : re_(std::move(re)) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}

  const Real& real() const { return re_; }
  const Real& imag() const { return im_; }
  Real& real_ref() { return re_; }
  Real& imag_ref() { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  Complex operator-() const { return {-re_, -im_}; }
  Complex& operator+=(const Complex& o) { re_ += o.re_; im_ += o.im_; return *this; }
  Complex& operator-=(const Complex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
  Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }
  Complex& operator/=(const Complex& o) { *this = *this / o; return *this; }
  Complex& operator*=(const Real& o) { re_ *= o; im_ *= o; return *this; }
  Complex& operator/=(const Real& o) { re_ /= o; im_ /= o; return *this; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    if (a.im_.is_zero() && b.im_.is_zero()) return {a.re_ * b.re_, Real()};
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    if (b.im_.is_zero()) return {a.re_ / b.re_, a.im_ / b.re_};
    Real den = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / den, (a.im_ * b.re_ - a.re_ * b.im_) / den};
  }
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re_ * s, a.im_ * s}; }
  friend Complex operator*(const Real& s, const Complex& a) { return a * s; }
  friend Complex operator/(const Complex& a, const Real& s) { return {a.re_ / s, a.im_ / s}; }
  friend Complex operator*(const Complex& a, long s) { return {a.re_ * s, a.im_ * s}; }
  friend Complex operator/(const Complex& a, long s) { return {a.re_ / s, a.im_ / s}; }

  friend bool operator==(const Complex& a, const Complex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

 private:
  Real re_, im_;
};

inline Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }
inline Real abs(const Complex& z) { return hypot(z.real(), z.imag()); }
inline Real norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }
inline Real arg(const Complex& z) { return atan2(z.imag(), z.real()); }
inline Complex polar(const Real& r, const Real& theta) {
  Real s, c;
  mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
  return {r * c, r * s};
}
/// e^{i theta}
inline Complex expi(const Real& theta) {
  Real s, c;
  mpfr_sin_cos(s.raw(), c.raw(), theta.raw(), MPFR_RNDN);
  return {std::move(c), std::move(s)};
}
inline Complex exp(const Complex& z) {
  if (z.imag().is_zero()) return Complex(exp(z.real()));
  return polar(exp(z.real()), z.imag());
}
/// Principal logarithm.
inline Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }
/// Principal power z^w = exp(w log z).
inline Complex pow(const Complex& z, const Complex& w) {
  if (z.is_zero()) return Complex();
  return exp(w * log(z));
}
inline Complex sqrt(const Complex& z) {
  if (z.is_zero()) return Complex();
  return polar(sqrt(abs(z)), arg(z) / 2);
}

/// acc -= x * y, reusing the two scratch values.
inline void sub_mul(Real& acc, const Real& x, const Real& y, Real& t) {
  mpfr_mul(t.raw(), x.raw(), y.raw(), MPFR_RNDN);
  mpfr_sub(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
}
inline void sub_mul(Complex& acc, const Complex& x, const Complex& y, Real& t) {
  sub_mul(acc.real_ref(), x.real(), y.real(), t);
  if (!x.imag().is_zero() || !y.imag().is_zero()) {
    mpfr_mul(t.raw(), x.imag().raw(), y.imag().raw(), MPFR_RNDN);
    mpfr_add(acc.real_ref().raw(), acc.real_ref().raw(), t.raw(), MPFR_RNDN);
    sub_mul(acc.imag_ref(), x.real(), y.imag(), t);
    sub_mul(acc.imag_ref(), x.imag(), y.real(), t);
  }
}

inline Complex at_working_precision(const Complex& z) {
  return {Real::at_working_precision(z.real()), Real::at_working_precision(z.imag())};
}
inline Real at_working_precision(const Real& x) { return Real::at_working_precision(x); }

inline double bits_to_digits(Bits bits) { return static_cast<double>(bits) * 0.30102999566398120; }

}  // namespace sdet
