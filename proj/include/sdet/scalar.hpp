#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "sdet/error.hpp"
#include "sdet/real.hpp"

namespace sdet {

using Rational = mpq_class;
using Integer = mpz_class;

/// Complex number with exact rational parts; how symbol data is stored before a field is chosen.
struct QComplex {
  Rational re{0};
  Rational im{0};

  QComplex() = default;
  QComplex(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
  QComplex(long r) : re(r) {}

  bool is_real() const { return im == 0; }
  bool is_zero() const { return re == 0 && im == 0; }
  Complex to_complex() const { return {Real(re), Real(im)}; }

  QComplex operator-() const { return {-re, -im}; }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }
};

/// Parses "p/q", an integer, or a decimal such as "-1.25e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw Error("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + s + "'");
    Rational r = num / den;
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      any_digit = true;
      if (seen_point) ++scale;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw Error("malformed number '" + s + "'");
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw Error("malformed number '" + s + "'");
    std::string rest = s.substr(i + 1);
    std::size_t used = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (const std::exception&) {
      throw Error("malformed exponent in '" + s + "'");
    }
    if (used != rest.size()) throw Error("malformed exponent in '" + s + "'");
  }
  Integer mant(digits, 10);
  long e10 = exponent - scale;
  Integer p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(e10 < 0 ? -e10 : e10));
  Rational r = e10 >= 0 ? Rational(mant * p10) : Rational(mant, p10);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rational(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

/// Scalar fields understood by the generic algorithms.
enum class Field { rational, hp_real, hp_complex };

inline const char* to_string(Field f) {
  switch (f) {
    case Field::rational: return "rational";
    case Field::hp_real: return "hp_real";
    case Field::hp_complex: return "hp_complex";
  }
  return "?";
}

template <class T>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr Field field = Field::rational;
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_qcomplex(const QComplex& q) {
    if (!q.is_real()) throw Error("exact mode supports real rational data only");
    return q.re;
  }
  static bool is_zero(const Rational& x) { return x == 0; }
  static double magnitude_log2(const Rational& x) {
    if (x == 0) return -INFINITY;
    PrecisionScope p(64);
    return Real(x).log2_abs();
  }
  static std::string format(const Rational& x, int) { return x.get_str(); }
};

template <>
struct FieldTraits<Real> {
  static constexpr Field field = Field::hp_real;
  static constexpr bool exact = false;
  static Real from_rational(const Rational& q) { return Real(q); }
  static Real from_qcomplex(const QComplex& q) { return Real(q.re); }
  static bool is_zero(const Real& x) { return x.is_zero(); }
  static Real magnitude(const Real& x) { return abs(x); }
  static double magnitude_log2(const Real& x) { return x.log2_abs(); }
  static std::string format(const Real& x, int digits) { return to_string(x, digits); }
};

template <>
struct FieldTraits<Complex> {
  static constexpr Field field = Field::hp_complex;
  static constexpr bool exact = false;
  static Complex from_rational(const Rational& q) { return Complex(Real(q)); }
  static Complex from_qcomplex(const QComplex& q) { return q.to_complex(); }
  static bool is_zero(const Complex& x) { return x.is_zero(); }
  static Real magnitude(const Complex& x) { return abs(x); }
  static double magnitude_log2(const Complex& x) { return abs(x).log2_abs(); }
  static std::string format(const Complex& x, int digits) {
    if (x.imag().is_zero()) return to_string(x.real(), digits);
    return to_string(x.real(), digits) + (x.imag().sign() < 0 ? "" : "+") + to_string(x.imag(), digits) + "i";
  }
};

}  // namespace sdet
