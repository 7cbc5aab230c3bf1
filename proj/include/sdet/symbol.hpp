#pragma once
/**
 * @file symbol.hpp
 * @brief Symbols on the unit circle (Fourier symbols) and on [-1, 1] (moment symbols).
 *
 * A FourierSymbol is an immutable tree: coefficient sequences, the sign jump chi,
 * pure jumps t_beta, Fisher-Hartwig products, products, argument doubling and
 * closed-form evaluators. Coefficients come from closed forms where one exists and
 * from jump-split quadrature otherwise.
 *
 * Angles: t_beta and Fisher-Hartwig jump factors use theta in (0, 2pi); chi and
 * closed-form evaluators receive theta wrapped to (-pi, pi].
 */

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sdet/error.hpp"
#include "sdet/quadrature.hpp"
#include "sdet/real.hpp"
#include "sdet/scalar.hpp"
#include "sdet/sequence.hpp"

namespace sdet {

enum class Symmetry { none, even, odd };

inline const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::even: return "even";
    case Symmetry::odd: return "odd";
  }
  return "?";
}

/// Exact angle pi_part * pi + rad_part.
struct Angle {
  Rational pi_part{0};
  Rational rad_part{0};

  static Angle pi_times(Rational q) { return {std::move(q), Rational(0)}; }
  static Angle radians(Rational q) { return {Rational(0), std::move(q)}; }

  Real value() const { return Real(pi_part) * pi() + Real(rad_part); }
  Angle operator-() const { return {-pi_part, -rad_part}; }
  Angle scaled(const Rational& s) const { return {pi_part * s, rad_part * s}; }
  Angle plus_pi(const Rational& q) const { return {pi_part + q, rad_part}; }
  friend bool operator==(const Angle& a, const Angle& b) {
    return a.pi_part == b.pi_part && a.rad_part == b.rad_part;
  }
};

/// theta reduced to [0, 2pi).
inline Real wrap_two_pi(const Real& theta) {
  Real two_pi = pi() * 2L;
  Real r = theta - two_pi * floor(theta / two_pi);
  if (r >= two_pi) r -= two_pi;
  if (r.sign() < 0) r += two_pi;
  return r;
}

/// theta reduced to (-pi, pi].
inline Real wrap_signed(const Real& theta) {
  Real r = wrap_two_pi(theta);
  if (r > pi()) r -= pi() * 2L;
  return r;
}

struct JumpSpec {
  Angle theta;
  QComplex beta;
};

/// d(e^{i theta}) = exp(sum_n L_n e^{i n theta}) * prod_r t_{beta_r}(e^{i(theta - theta_r)}).
struct FHDescriptor {
  std::map<long, QComplex> log_smooth;
  std::vector<JumpSpec> jumps;

  void validate() const {
    PrecisionScope ps(std::max<Bits>(working_precision(), 64));
    std::vector<Real> seen;
    for (std::size_t r = 0; r < jumps.size(); ++r) {
      Real t = jumps[r].theta.value();
      if (t.sign() <= 0 || t >= pi() * 2L) {
        throw Error("jump " + std::to_string(r) + ": theta must lie in (0, 2pi)");
      }
      for (const auto& s : seen) {
        if (abs(s - t) <= epsilon_bits(40)) throw Error("jump " + std::to_string(r) + ": duplicate theta");
      }
      seen.push_back(t);
      if (abs(jumps[r].beta.re) >= Rational(1, 2)) {
        throw Error("jump " + std::to_string(r) + ": |Re beta| must be < 1/2");
      }
    }
  }
};

/// Closed-form evaluator; receives theta in (-pi, pi].
using AngularFn = std::function<Complex(const Real&)>;

class FourierSymbol;

namespace symbol_node {
struct Coeffs {
  std::map<long, QComplex> entries;
  Symmetry symmetry = Symmetry::none;
};
struct Chi {};
struct Jump {
  QComplex beta;
  Angle at;  // t_beta(e^{i(theta - at)})
};
struct FH {
  FHDescriptor desc;
};
struct Product {
  std::vector<FourierSymbol> factors;
};
struct Doubled {
  std::shared_ptr<const FourierSymbol> inner;
};
struct Closed {
  AngularFn fn;
  std::vector<Angle> jumps;
  Symmetry symmetry = Symmetry::none;
  std::string label;
};
}  // namespace symbol_node

class FourierSymbol {
 public:
  using Variant = std::variant<symbol_node::Coeffs, symbol_node::Chi, symbol_node::Jump, symbol_node::FH,
                               symbol_node::Product, symbol_node::Doubled, symbol_node::Closed>;

  /// Finite coefficient map; `symmetry` is checked exactly against the entries.
  static FourierSymbol coeffs(std::map<long, QComplex> entries, Symmetry symmetry = Symmetry::none);
  static FourierSymbol constant(const QComplex& c) { return coeffs({{0, c}}, Symmetry::even); }
  static FourierSymbol chi() { return FourierSymbol(symbol_node::Chi{}); }
  static FourierSymbol jump(QComplex beta, Angle at = {}) {
    return FourierSymbol(symbol_node::Jump{std::move(beta), std::move(at)});
  }
  static FourierSymbol fisher_hartwig(FHDescriptor desc) {
    desc.validate();
    return FourierSymbol(symbol_node::FH{std::move(desc)});
  }
  static FourierSymbol product(std::vector<FourierSymbol> factors) {
    if (factors.empty()) return constant(QComplex(1));
    if (factors.size() == 1) return factors.front();
    return FourierSymbol(symbol_node::Product{std::move(factors)});
  }
  /// a(e^{i theta}) = inner(e^{2 i theta}).
  static FourierSymbol doubled(const FourierSymbol& inner);
  /// Closed form; a claimed symmetry is certified by sampling.
  static FourierSymbol closed_form(AngularFn fn, std::vector<Angle> jumps, Symmetry symmetry, std::string label);

  const Variant& node() const { return *node_; }

 private:
  explicit FourierSymbol(Variant v) : node_(std::make_shared<const Variant>(std::move(v))) {}
  std::shared_ptr<const Variant> node_;
};

// ---------------------------------------------------------------------------
// Pointwise evaluation

namespace detail {

inline Real jump_tolerance() { return epsilon_bits(static_cast<long>(working_precision()) - 8); }

inline Complex i_times(const Complex& z) { return {-z.imag(), z.real()}; }

inline Complex complex_sin(const Complex& z) {
  // sin(x+iy) = sin x cosh y + i cos x sinh y
  Real s, c;
  mpfr_sin_cos(s.raw(), c.raw(), z.real().raw(), MPFR_RNDN);
  Real ch, sh;
  mpfr_sinh_cosh(sh.raw(), ch.raw(), z.imag().raw(), MPFR_RNDN);
  return {s * ch, c * sh};
}

/// t_beta(e^{i phi}) = e^{i beta (phi - pi)}, phi taken in (0, 2pi).
inline Complex jump_factor(const QComplex& beta, const Real& phi) {
  Real p = wrap_two_pi(phi) - pi();
  Complex b = beta.to_complex();
  return exp(i_times(b * p));
}

inline Complex fh_value(const FHDescriptor& desc, const Real& theta) {
  Complex expo;
  for (const auto& [n, l] : desc.log_smooth) expo += l.to_complex() * expi(theta * n);
  Complex v = exp(expo);
  for (const auto& j : desc.jumps) v *= jump_factor(j.beta, theta - j.theta.value());
  return v;
}

Complex raw_eval(const FourierSymbol& a, const Real& theta);

struct RawEval {
  const Real& theta;
  Complex operator()(const symbol_node::Coeffs& c) const {
    Complex s;
    for (const auto& [n, v] : c.entries) s += v.to_complex() * expi(theta * n);
    return s;
  }
  Complex operator()(const symbol_node::Chi&) const {
    Real t = wrap_signed(theta);
    return Complex(Real(), Real(t.sign() > 0 ? 1 : -1));
  }
  Complex operator()(const symbol_node::Jump& j) const { return jump_factor(j.beta, theta - j.at.value()); }
  Complex operator()(const symbol_node::FH& f) const { return fh_value(f.desc, theta); }
  Complex operator()(const symbol_node::Product& p) const {
    Complex v(1);
    for (const auto& f : p.factors) v *= raw_eval(f, theta);
    return v;
  }
  Complex operator()(const symbol_node::Doubled& d) const { return raw_eval(*d.inner, theta * 2L); }
  Complex operator()(const symbol_node::Closed& c) const { return c.fn(wrap_signed(theta)); }
};

inline Complex raw_eval(const FourierSymbol& a, const Real& theta) { return std::visit(RawEval{theta}, a.node()); }

inline void add_jump(std::vector<Real>& out, const Real& t) { out.push_back(wrap_two_pi(t)); }

inline void collect_jumps(const FourierSymbol& a, std::vector<Real>& out);

struct JumpCollector {
  std::vector<Real>& out;
  void operator()(const symbol_node::Coeffs&) const {}
  void operator()(const symbol_node::Chi&) const {
    add_jump(out, Real(0));
    add_jump(out, pi());
  }
  void operator()(const symbol_node::Jump& j) const {
    if (!j.beta.is_zero()) add_jump(out, j.at.value());
  }
  void operator()(const symbol_node::FH& f) const {
    for (const auto& j : f.desc.jumps) {
      if (!j.beta.is_zero()) add_jump(out, j.theta.value());
    }
  }
  void operator()(const symbol_node::Product& p) const {
    for (const auto& f : p.factors) collect_jumps(f, out);
  }
  void operator()(const symbol_node::Doubled& d) const {
    std::vector<Real> inner;
    collect_jumps(*d.inner, inner);
    for (const auto& t : inner) {
      add_jump(out, t / 2L);
      add_jump(out, t / 2L + pi());
    }
  }
  void operator()(const symbol_node::Closed& c) const {
    for (const auto& j : c.jumps) add_jump(out, j.value());
  }
};

inline void collect_jumps(const FourierSymbol& a, std::vector<Real>& out) { std::visit(JumpCollector{out}, a.node()); }

}  // namespace detail

/// Jump points of `a`, sorted and deduplicated in [0, 2pi).
inline std::vector<Real> jump_points(const FourierSymbol& a) {
  std::vector<Real> raw;
  detail::collect_jumps(a, raw);
  std::sort(raw.begin(), raw.end());
  std::vector<Real> out;
  Real tol = detail::jump_tolerance();
  Real two_pi = pi() * 2L;
  for (auto& t : raw) {
    if (!out.empty() && abs(t - out.back()) <= tol) continue;
    out.push_back(t);
  }
  if (out.size() > 1 && abs(out.back() - two_pi - out.front()) <= tol) out.pop_back();
  return out;
}

/// a(e^{i theta}); throws JumpError at a jump point.
inline Complex eval(const FourierSymbol& a, const Real& theta) {
  Real t = wrap_two_pi(theta);
  Real tol = detail::jump_tolerance();
  Real two_pi = pi() * 2L;
  for (const auto& j : jump_points(a)) {
    if (abs(t - j) <= tol || abs(t - j - two_pi) <= tol || abs(t - j + two_pi) <= tol) {
      throw JumpError("symbol evaluated at its jump theta = " + to_string(j, 12));
    }
  }
  return detail::raw_eval(a, theta);
}

// ---------------------------------------------------------------------------
// Symmetry

namespace detail {

/// 64 sample angles in (0, pi) kept away from the given jump points (and their mirrors).
inline std::vector<Real> sample_angles(const std::vector<Real>& jumps, int count = 64) {
  std::vector<Real> out;
  Real two_pi = pi() * 2L;
  Real guard = Real(1) / 100000L;
  for (int k = 0; k < count; ++k) {
    Real t = pi() * (Real(k) + Real(0.3183098861837907)) / static_cast<long>(count);
    for (int attempt = 0; attempt < 8; ++attempt) {
      bool clash = false;
      for (const auto& j : jumps) {
        for (const Real& cand : {t, two_pi - t, t + pi(), pi() - t}) {
          Real d = abs(wrap_two_pi(cand) - j);
          if (d < guard || abs(d - two_pi) < guard) clash = true;
        }
      }
      if (!clash) break;
      t += Real(1) / 3000L;
    }
    out.push_back(t);
  }
  return out;
}

inline bool sampled_close(const Complex& x, const Complex& y) {
  Real scale = max(abs(x), abs(y));
  Real d = abs(x - y);
  if (d.is_zero()) return true;
  return d <= scale * Real(1e-12);
}

}  // namespace detail

Symmetry declared_symmetry(const FourierSymbol& a);

namespace detail {
struct DeclaredSymmetry {
  Symmetry operator()(const symbol_node::Coeffs& c) const { return c.symmetry; }
  Symmetry operator()(const symbol_node::Chi&) const { return Symmetry::odd; }
  Symmetry operator()(const symbol_node::Jump& j) const {
    return j.beta.is_zero() ? Symmetry::even : Symmetry::none;
  }
  Symmetry operator()(const symbol_node::FH& f) const {
    bool jumps_trivial = std::all_of(f.desc.jumps.begin(), f.desc.jumps.end(),
                                     [](const JumpSpec& j) { return j.beta.is_zero(); });
    if (!jumps_trivial) return Symmetry::none;
    for (const auto& [n, v] : f.desc.log_smooth) {
      auto it = f.desc.log_smooth.find(-n);
      QComplex mirror = it == f.desc.log_smooth.end() ? QComplex() : it->second;
      if (mirror != v) return Symmetry::none;
    }
    return Symmetry::even;
  }
  Symmetry operator()(const symbol_node::Product& p) const {
    int odd_count = 0;
    for (const auto& f : p.factors) {
      Symmetry s = declared_symmetry(f);
      if (s == Symmetry::none) return Symmetry::none;
      if (s == Symmetry::odd) ++odd_count;
    }
    return odd_count % 2 == 0 ? Symmetry::even : Symmetry::odd;
  }
  Symmetry operator()(const symbol_node::Doubled& d) const { return declared_symmetry(*d.inner); }
  Symmetry operator()(const symbol_node::Closed& c) const { return c.symmetry; }
};
}  // namespace detail

/// Symmetry known structurally, without sampling.
inline Symmetry declared_symmetry(const FourierSymbol& a) { return std::visit(detail::DeclaredSymmetry{}, a.node()); }

/// a(t^{-1}) = +-a(t) at 64 sample points within 1e-12 relative.
inline bool sampled_symmetry(const FourierSymbol& a, Symmetry s) {
  if (s == Symmetry::none) return true;
  auto jumps = jump_points(a);
  for (const auto& t : detail::sample_angles(jumps)) {
    Complex x = detail::raw_eval(a, t);
    Complex y = detail::raw_eval(a, -t);
    if (s == Symmetry::odd) y = -y;
    if (!detail::sampled_close(x, y)) return false;
  }
  return true;
}

/// Structural answer when available, otherwise sampled.
inline bool is_even(const FourierSymbol& a) {
  Symmetry d = declared_symmetry(a);
  if (d != Symmetry::none) return d == Symmetry::even && !std::holds_alternative<symbol_node::Chi>(a.node());
  return sampled_symmetry(a, Symmetry::even);
}
inline bool is_odd(const FourierSymbol& a) {
  Symmetry d = declared_symmetry(a);
  if (d != Symmetry::none) return d == Symmetry::odd;
  return sampled_symmetry(a, Symmetry::odd);
}

/// a(-t) = a(t), i.e. every odd Fourier coefficient vanishes.
inline bool is_rotation_symmetric(const FourierSymbol& a) {
  if (const auto* c = std::get_if<symbol_node::Coeffs>(&a.node())) {
    return std::all_of(c->entries.begin(), c->entries.end(),
                       [](const auto& e) { return e.first % 2 == 0 || e.second.is_zero(); });
  }
  if (std::holds_alternative<symbol_node::Doubled>(a.node())) return true;
  auto jumps = jump_points(a);
  for (const auto& t : detail::sample_angles(jumps)) {
    if (!detail::sampled_close(detail::raw_eval(a, t), detail::raw_eval(a, t + pi()))) return false;
  }
  return true;
}

/// a(-t) = a(t^{-1}) = a(t).
inline bool is_quarter_wave(const FourierSymbol& a) { return is_even(a) && is_rotation_symmetric(a); }

// ---------------------------------------------------------------------------
// Fourier coefficients

namespace detail {

inline void add_mul(Complex& acc, const Complex& a, const Complex& b, Real& t) {
  mpfr_mul(t.raw(), a.real().raw(), b.real().raw(), MPFR_RNDN);
  mpfr_add(acc.real_ref().raw(), acc.real_ref().raw(), t.raw(), MPFR_RNDN);
  mpfr_mul(t.raw(), a.imag().raw(), b.imag().raw(), MPFR_RNDN);
  mpfr_sub(acc.real_ref().raw(), acc.real_ref().raw(), t.raw(), MPFR_RNDN);
  mpfr_mul(t.raw(), a.real().raw(), b.imag().raw(), MPFR_RNDN);
  mpfr_add(acc.imag_ref().raw(), acc.imag_ref().raw(), t.raw(), MPFR_RNDN);
  mpfr_mul(t.raw(), a.imag().raw(), b.real().raw(), MPFR_RNDN);
  mpfr_add(acc.imag_ref().raw(), acc.imag_ref().raw(), t.raw(), MPFR_RNDN);
}

inline void mul_in_place(Complex& z, const Complex& u, Real& t1, Real& t2) {
  // (a+ib)(c+id) = (ac - bd) + i(ad + bc)
  mpfr_mul(t1.raw(), z.real().raw(), u.real().raw(), MPFR_RNDN);
  mpfr_mul(t2.raw(), z.imag().raw(), u.imag().raw(), MPFR_RNDN);
  mpfr_sub(t1.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
  mpfr_mul(t2.raw(), z.real().raw(), u.imag().raw(), MPFR_RNDN);
  mpfr_mul(z.imag_ref().raw(), z.imag().raw(), u.real().raw(), MPFR_RNDN);
  mpfr_add(z.imag_ref().raw(), z.imag().raw(), t2.raw(), MPFR_RNDN);
  mpfr_swap(z.real_ref().raw(), t1.raw());
}

/// Quadrature of (1/2pi) int a(e^{i theta}) e^{-i n theta} for lo <= n <= hi.
inline std::vector<Complex> quadrature_coeffs(const FourierSymbol& a, long lo, long hi, const Real& tol) {
  auto jumps = jump_points(a);
  std::vector<Panel> panels;
  bool periodic = jumps.empty();
  Real two_pi = pi() * 2L;
  if (periodic) {
    panels.push_back({Real(0), two_pi});
  } else {
    for (std::size_t i = 0; i + 1 < jumps.size(); ++i) panels.push_back({jumps[i], jumps[i + 1]});
    panels.push_back({jumps.back(), jumps.front() + two_pi});
  }
  const long count = hi - lo + 1;
  BatchEstimator<Complex> estimator = [&](const std::vector<Node>& nodes) {
    BatchEstimate<Complex> est;
    est.values.assign(count, Complex());
    Real l1;
    Real t1, t2;
    for (const auto& node : nodes) {
      Complex f = raw_eval(a, node.x);
      l1 += node.w * abs(f);
      Complex wf = f * node.w;
      Complex z = expi(-(node.x * lo));
      Complex u = expi(-node.x);
      for (long k = 0; k < count; ++k) {
        add_mul(est.values[k], wf, z, t1);
        if (k + 1 < count) mul_in_place(z, u, t1, t2);
      }
    }
    for (auto& v : est.values) v /= two_pi;
    l1 /= two_pi;
    est.scales.assign(count, l1);
    return est;
  };
  RefinementPolicy policy;
  long reach = std::max(std::labs(lo), std::labs(hi)) + 1;
  while (policy.initial_trapezoid < 4 * reach) policy.initial_trapezoid *= 2;
  if (policy.max_trapezoid < 8 * policy.initial_trapezoid) policy.max_trapezoid = 8 * policy.initial_trapezoid;
  return adaptive_batch<Complex>(panels, periodic, estimator, tol, policy);
}

std::vector<Complex> coeffs_impl(const FourierSymbol& a, long lo, long hi, const Real& tol);

struct CoeffVisitor {
  const FourierSymbol& self;
  long lo, hi;
  const Real& tol;

  std::vector<Complex> operator()(const symbol_node::Coeffs& c) const {
    std::vector<Complex> out;
    for (long n = lo; n <= hi; ++n) {
      auto it = c.entries.find(n);
      out.push_back(it == c.entries.end() ? Complex() : it->second.to_complex());
    }
    return out;
  }
  std::vector<Complex> operator()(const symbol_node::Chi&) const {
    std::vector<Complex> out;
    for (long n = lo; n <= hi; ++n) {
      if (n % 2 == 0) {
        out.emplace_back();
      } else {
        out.emplace_back(Real(2) / (pi() * n));
      }
    }
    return out;
  }
  std::vector<Complex> operator()(const symbol_node::Jump& j) const {
    std::vector<Complex> out;
    Complex beta = j.beta.to_complex();
    Complex s = complex_sin(beta * pi());
    Real at = j.at.value();
    for (long n = lo; n <= hi; ++n) {
      Complex den = (beta - Complex(n)) * pi();
      Complex v;
      if (j.beta == QComplex(n)) {
        v = Complex(n % 2 == 0 ? 1 : -1);
      } else {
        v = s / den;
      }
      // rotation by `at` multiplies a_n by e^{-i n at}
      if (!at.is_zero()) v *= expi(-(at * n));
      out.push_back(std::move(v));
    }
    return out;
  }
  std::vector<Complex> operator()(const symbol_node::Doubled& d) const {
    long ilo = lo >= 0 ? (lo + 1) / 2 : -((-lo) / 2);
    long ihi = hi >= 0 ? hi / 2 : -((-hi + 1) / 2);
    std::vector<Complex> inner;
    if (ilo <= ihi) inner = coeffs_impl(*d.inner, ilo, ihi, tol);
    std::vector<Complex> out;
    for (long n = lo; n <= hi; ++n) {
      if (n % 2 != 0) {
        out.emplace_back();
      } else {
        out.push_back(inner[n / 2 - ilo]);
      }
    }
    return out;
  }
  /// A finite-coefficient factor is convolved in exactly; the rest goes through quadrature.
  std::vector<Complex> operator()(const symbol_node::Product& p) const {
    std::vector<FourierSymbol> rest;
    std::map<long, Complex> finite{{0, Complex(1)}};
    for (const auto& f : p.factors) {
      if (const auto* c = std::get_if<symbol_node::Coeffs>(&f.node())) {
        std::map<long, Complex> next;
        for (const auto& [m, x] : finite) {
          for (const auto& [k, y] : c->entries) {
            auto it = next.try_emplace(m + k).first;
            it->second += x * y.to_complex();
          }
        }
        finite = std::move(next);
      } else {
        rest.push_back(f);
      }
    }
    if (rest.size() == p.factors.size()) return quadrature_coeffs(self, lo, hi, tol);
    std::vector<Complex> out(static_cast<std::size_t>(hi - lo + 1));
    if (finite.empty()) return out;
    long mlo = finite.begin()->first, mhi = finite.rbegin()->first;
    std::vector<Complex> inner;
    if (rest.empty()) {
      for (long n = lo - mhi; n <= hi - mlo; ++n) inner.emplace_back(n == 0 ? 1 : 0);
    } else {
      inner = coeffs_impl(FourierSymbol::product(rest), lo - mhi, hi - mlo, tol);
    }
    for (long n = lo; n <= hi; ++n) {
      Complex acc;
      for (const auto& [m, x] : finite) acc += x * inner[static_cast<std::size_t>(n - m - (lo - mhi))];
      out[static_cast<std::size_t>(n - lo)] = std::move(acc);
    }
    return out;
  }
  template <class Other>
  std::vector<Complex> operator()(const Other&) const {
    return quadrature_coeffs(self, lo, hi, tol);
  }
};

inline std::vector<Complex> coeffs_impl(const FourierSymbol& a, long lo, long hi, const Real& tol) {
  return std::visit(CoeffVisitor{a, lo, hi, tol}, a.node());
}

}  // namespace detail

/// Coefficients by jump-split quadrature regardless of closed forms (oracle for the closed forms).
inline std::vector<Complex> quadrature_fourier_coeffs(const FourierSymbol& a, long lo, long hi, const Real& accuracy) {
  Bits outer = working_precision();
  std::vector<Complex> r;
  {
    PrecisionScope guard(outer + 32);
    r = detail::quadrature_coeffs(a, lo, hi, Real::at_working_precision(accuracy));
  }
  for (auto& z : r) z = at_working_precision(z);
  return r;
}

/// Default accuracy for a working precision: 2^{-(bits - 16)}.
inline Real default_accuracy() { return epsilon_bits(static_cast<long>(working_precision()) - 16); }

/// a_n for lo <= n <= hi, relative to the L1 scale of a; quadrature runs with 32 guard bits.
inline std::vector<Complex> fourier_coeffs(const FourierSymbol& a, long lo, long hi, const Real& accuracy) {
  if (accuracy.sign() <= 0) throw Error("accuracy target must be positive");
  if (hi < lo) return {};
  Bits outer = working_precision();
  std::vector<Complex> r;
  {
    PrecisionScope guard(outer + 32);
    Real tol = Real::at_working_precision(accuracy);
    r = detail::coeffs_impl(a, lo, hi, tol);
  }
  for (auto& z : r) z = at_working_precision(z);
  return r;
}

inline Complex fourier_coeff(const FourierSymbol& a, long n, const Real& accuracy) {
  return fourier_coeffs(a, n, n, accuracy).front();
}

/// Coefficients |n| <= radius as a truncated sequence; symmetric symbols compute n >= 0 only.
inline ScalarSeq<Complex> coefficient_sequence(const FourierSymbol& a, long radius, const Real& accuracy) {
  Symmetry s = declared_symmetry(a);
  std::map<long, Complex> entries;
  if (s == Symmetry::even || s == Symmetry::odd) {
    auto v = fourier_coeffs(a, 0, radius, accuracy);
    for (long n = 0; n <= radius; ++n) entries.emplace(n, v[n]);
    if (s == Symmetry::odd) entries[0] = Complex();
    return ScalarSeq<Complex>(s == Symmetry::even ? SeqKind::even : SeqKind::odd, entries, radius);
  }
  auto v = fourier_coeffs(a, -radius, radius, accuracy);
  for (long n = -radius; n <= radius; ++n) entries.emplace(n, v[n + radius]);
  return ScalarSeq<Complex>(SeqKind::general, entries, radius);
}

/// Exact coefficients of a finite real rational coefficient symbol.
inline ScalarSeq<Rational> exact_coefficients(const FourierSymbol& a) {
  const auto* c = std::get_if<symbol_node::Coeffs>(&a.node());
  if (!c) throw SpeciesError("exact mode needs a finite coefficient sequence ('coeffs' symbol)");
  std::map<long, Rational> entries;
  for (const auto& [n, v] : c->entries) {
    if (!v.is_real()) throw SpeciesError("exact mode supports real rational coefficients only");
    entries.emplace(n, v.re);
  }
  SeqKind kind = c->symmetry == Symmetry::even ? SeqKind::even
                 : c->symmetry == Symmetry::odd ? SeqKind::odd
                                                : SeqKind::general;
  return ScalarSeq<Rational>(kind, entries);
}

// ---------------------------------------------------------------------------
// Factory definitions

inline FourierSymbol FourierSymbol::coeffs(std::map<long, QComplex> entries, Symmetry symmetry) {
  for (const auto& [n, v] : entries) {
    auto it = entries.find(-n);
    QComplex mirror = it == entries.end() ? QComplex() : it->second;
    if (symmetry == Symmetry::even && mirror != v) {
      throw SymmetryError("coefficients declared even but a_{" + std::to_string(-n) + "} != a_{" + std::to_string(n) +
                          "}");
    }
    if (symmetry == Symmetry::odd && mirror != -v) {
      throw SymmetryError("coefficients declared odd but a_{" + std::to_string(-n) + "} != -a_{" + std::to_string(n) +
                          "}");
    }
  }
  std::map<long, QComplex> kept;
  for (auto& [n, v] : entries) {
    if (!v.is_zero()) kept.emplace(n, v);
  }
  return FourierSymbol(symbol_node::Coeffs{std::move(kept), symmetry});
}

inline FourierSymbol FourierSymbol::doubled(const FourierSymbol& inner) {
  if (const auto* c = std::get_if<symbol_node::Coeffs>(&inner.node())) {
    std::map<long, QComplex> e;
    for (const auto& [n, v] : c->entries) e.emplace(2 * n, v);
    return coeffs(std::move(e), c->symmetry);
  }
  return FourierSymbol(symbol_node::Doubled{std::make_shared<const FourierSymbol>(inner)});
}

inline FourierSymbol FourierSymbol::closed_form(AngularFn fn, std::vector<Angle> jumps, Symmetry symmetry,
                                                std::string label) {
  FourierSymbol s(symbol_node::Closed{std::move(fn), std::move(jumps), symmetry, std::move(label)});
  if (symmetry != Symmetry::none && !sampled_symmetry(s, symmetry)) {
    throw SymmetryError(std::string("closed-form symbol claimed ") + to_string(symmetry) + " fails the sampled check");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Symbol transformations

/// d(e^{i theta}) = a(e^{i theta/2}); requires a(-t) = a(t).
inline FourierSymbol halve_argument(const FourierSymbol& a) {
  if (const auto* c = std::get_if<symbol_node::Coeffs>(&a.node())) {
    std::map<long, QComplex> e;
    for (const auto& [n, v] : c->entries) {
      if (n % 2 != 0) {
        throw SymmetryError("halve_argument: a_" + std::to_string(n) + " != 0, so a(-t) != a(t)");
      }
      e.emplace(n / 2, v);
    }
    return FourierSymbol::coeffs(std::move(e), c->symmetry);
  }
  if (const auto* d = std::get_if<symbol_node::Doubled>(&a.node())) return *d->inner;
  if (!is_rotation_symmetric(a)) throw SymmetryError("halve_argument: a(-t) != a(t) at sampled points");
  FourierSymbol copy = a;
  Symmetry sym = declared_symmetry(a);
  auto fn = [copy](const Real& theta) { return detail::raw_eval(copy, theta / 2L); };
  std::vector<Angle> doubled_jumps;
  std::function<void(const FourierSymbol&, const Rational&)> gather;
  gather = [&](const FourierSymbol& f, const Rational& scale) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, symbol_node::Chi>) {
            doubled_jumps.push_back(Angle::pi_times(0));
            doubled_jumps.push_back(Angle::pi_times(scale));
          } else if constexpr (std::is_same_v<N, symbol_node::Jump>) {
            doubled_jumps.push_back(n.at.scaled(scale));
          } else if constexpr (std::is_same_v<N, symbol_node::FH>) {
            for (const auto& j : n.desc.jumps) doubled_jumps.push_back(j.theta.scaled(scale));
          } else if constexpr (std::is_same_v<N, symbol_node::Product>) {
            for (const auto& g : n.factors) gather(g, scale);
          } else if constexpr (std::is_same_v<N, symbol_node::Doubled>) {
            gather(*n.inner, scale / 2);
          } else if constexpr (std::is_same_v<N, symbol_node::Closed>) {
            for (const auto& j : n.jumps) doubled_jumps.push_back(j.scaled(scale));
          }
        },
        f.node());
  };
  gather(a, Rational(2));
  return FourierSymbol::closed_form(fn, std::move(doubled_jumps), sym, "halve_argument");
}

/// chi(e^{i theta}) a(e^{i theta}).
inline FourierSymbol multiply_by_chi(const FourierSymbol& a) { return FourierSymbol::product({FourierSymbol::chi(), a}); }

// ---------------------------------------------------------------------------
// Moment symbols

enum class Weight { one, sqrt_ratio };

inline const char* to_string(Weight w) { return w == Weight::one ? "one" : "sqrt_ratio"; }

enum class Parity { none, even };

/**
 * b(x) = smooth_factor(x) * w(x) on [-1, 1], with w = 1 or sqrt((1+x)/(1-x)).
 *
 * The smooth factor is stored in angular form g(theta) = smooth_factor(cos theta),
 * theta in [0, pi]; moments are integrated in theta.
 */
class MomentSymbol {
 public:
  static MomentSymbol from_angular(AngularFn g, Weight weight, std::vector<Angle> jumps, Parity parity,
                                   std::string label) {
    MomentSymbol m;
    m.angular_ = std::move(g);
    m.weight_ = weight;
    m.jumps_ = std::move(jumps);
    m.parity_ = parity;
    m.label_ = std::move(label);
    if (parity == Parity::even && !m.sampled_even()) {
      throw SymmetryError("moment symbol claimed even fails the sampled check");
    }
    return m;
  }

  /// smooth_factor(cos theta) = a(e^{i theta}).
  static MomentSymbol from_fourier(const FourierSymbol& a, Weight weight) {
    auto g = [a](const Real& theta) { return detail::raw_eval(a, theta); };
    MomentSymbol m = from_angular(g, weight, {}, Parity::none, "fourier");
    m.source_ = std::make_shared<const FourierSymbol>(a);
    return m;
  }

  /// smooth_factor(x) = sum_k c_k x^k.
  static MomentSymbol polynomial(std::vector<QComplex> c, Weight weight) {
    auto g = [c](const Real& theta) {
      Real x = cos(theta);
      Complex acc;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->to_complex();
      return acc;
    };
    MomentSymbol m = from_angular(g, weight, {}, odd_powers_vanish(c) ? Parity::even : Parity::none, "poly");
    m.poly_ = c;
    return m;
  }

  /// smooth_factor(x) = exp(sum_k c_k x^k).
  static MomentSymbol exp_polynomial(std::vector<QComplex> c, Weight weight) {
    auto g = [c](const Real& theta) {
      Real x = cos(theta);
      Complex acc;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->to_complex();
      return exp(acc);
    };
    MomentSymbol m = from_angular(g, weight, {}, odd_powers_vanish(c) ? Parity::even : Parity::none, "exp_poly");
    m.exp_poly_ = c;
    return m;
  }

  /// Moments b_1, b_2, ... given directly.
  static MomentSymbol explicit_moments(std::vector<QComplex> values) {
    MomentSymbol m;
    m.explicit_ = std::move(values);
    m.label_ = "moments";
    return m;
  }

  Weight weight() const { return weight_; }
  Parity declared_parity() const { return parity_; }
  const std::string& label() const { return label_; }
  bool has_explicit_moments() const { return explicit_.has_value(); }
  const std::vector<QComplex>& explicit_values() const {
    if (!explicit_) throw Error("moment symbol has no explicit moments");
    return *explicit_;
  }
  const FourierSymbol* source() const { return source_.get(); }
  const std::vector<QComplex>* polynomial_coeffs() const { return poly_ ? &*poly_ : nullptr; }
  const std::vector<QComplex>* exp_polynomial_coeffs() const { return exp_poly_ ? &*exp_poly_ : nullptr; }

  /// g(theta) = smooth_factor(cos theta), theta in [0, pi].
  Complex smooth_at_angle(const Real& theta) const {
    require_pointwise();
    return angular_(theta);
  }
  Complex smooth_factor(const Real& x) const { return smooth_at_angle(acos(x)); }
  /// b(x) including the weight.
  Complex value(const Real& x) const {
    Complex f = smooth_factor(x);
    if (weight_ == Weight::sqrt_ratio) f *= sqrt((1 + x) / (1 - x));
    return f;
  }

  /// Jump angles strictly inside (0, pi), sorted.
  std::vector<Real> angular_jumps() const {
    std::vector<Real> out;
    auto add = [&](const Real& t) {
      Real w = wrap_two_pi(t);
      if (w.sign() > 0 && w < pi()) out.push_back(w);
    };
    for (const auto& j : jumps_) add(j.value());
    if (source_) {
      for (const auto& j : jump_points(*source_)) add(j);
    }
    std::sort(out.begin(), out.end());
    std::vector<Real> dedup;
    for (auto& t : out) {
      if (dedup.empty() || abs(t - dedup.back()) > detail::jump_tolerance()) dedup.push_back(t);
    }
    return dedup;
  }

  /// Exact jump angles (for symbols derived from this one).
  std::vector<Angle> exact_jumps() const { return jumps_; }

  /// smooth_factor(-x) = smooth_factor(x), structurally or by sampling.
  bool is_even() const {
    if (explicit_) return false;
    if (parity_ == Parity::even) return true;
    return sampled_even();
  }

 private:
  static bool odd_powers_vanish(const std::vector<QComplex>& c) {
    for (std::size_t k = 1; k < c.size(); k += 2) {
      if (!c[k].is_zero()) return false;
    }
    return true;
  }
  void require_pointwise() const {
    if (explicit_) throw Error("moment symbol given by explicit moments has no pointwise values");
  }
  bool sampled_even() const {
    require_pointwise();
    std::vector<Real> mirrored;
    for (const auto& j : angular_jumps()) mirrored.push_back(j);
    for (const auto& t : detail::sample_angles(mirrored)) {
      Real th = t / 2L;  // keep inside (0, pi/2)
      if (!detail::sampled_close(angular_(th), angular_(pi() - th))) return false;
    }
    return true;
  }

  AngularFn angular_;
  Weight weight_ = Weight::one;
  std::vector<Angle> jumps_;
  Parity parity_ = Parity::none;
  std::string label_;
  std::optional<std::vector<QComplex>> explicit_;
  std::optional<std::vector<QComplex>> poly_;
  std::optional<std::vector<QComplex>> exp_poly_;
  std::shared_ptr<const FourierSymbol> source_;
};

/// Moments b_1..b_count: (1/pi) int_0^pi b(cos theta)(2 cos theta)^{n-1} sin theta d theta.
inline std::vector<Complex> moments(const MomentSymbol& b, long count, const Real& accuracy) {
  if (count < 1) return {};
  if (b.has_explicit_moments()) {
    const auto& v = b.explicit_values();
    if (static_cast<long>(v.size()) < count) {
      throw SupportError("explicit moments cover b_1..b_" + std::to_string(v.size()) + ", need b_" +
                         std::to_string(count));
    }
    std::vector<Complex> out;
    for (long n = 0; n < count; ++n) out.push_back(v[n].to_complex());
    return out;
  }
  if (accuracy.sign() <= 0) throw Error("accuracy target must be positive");
  Bits outer = working_precision();
  std::vector<Complex> r;
  {
    PrecisionScope guard(outer + 32);
    Real tol = Real::at_working_precision(accuracy);
    auto jumps = b.angular_jumps();
    std::vector<Panel> panels;
    Real lo(0);
    for (const auto& j : jumps) {
      panels.push_back({lo, j});
      lo = j;
    }
    panels.push_back({lo, pi()});
    BatchEstimator<Complex> estimator = [&](const std::vector<Node>& nodes) {
      BatchEstimate<Complex> est;
      est.values.assign(count, Complex());
      est.scales.assign(count, Real());
      Real t1;
      for (const auto& node : nodes) {
        Complex g = b.smooth_at_angle(node.x);
        Real c = cos(node.x);
        Real w = b.weight() == Weight::one ? sin(node.x) : 1 + c;
        Complex f = g * (w * node.w);
        Real mag = abs(f);
        Real two_c = c * 2L;
        Real abs_two_c = abs(two_c);
        Complex term = f;
        for (long k = 0; k < count; ++k) {
          est.values[k] += term;
          est.scales[k] += mag;
          if (k + 1 < count) {
            term *= two_c;
            mag *= abs_two_c;
          }
        }
      }
      Real p = pi();
      for (long k = 0; k < count; ++k) {
        est.values[k] /= p;
        est.scales[k] /= p;
      }
      return est;
    };
    try {
      r = adaptive_batch<Complex>(panels, false, estimator, tol);
    } catch (const AccuracyError& e) {
      throw IntegrabilityError(std::string("moment quadrature diverged; b may not be integrable: ") + e.what());
    }
  }
  for (auto& z : r) z = at_working_precision(z);
  return r;
}

inline Complex moment(const MomentSymbol& b, long n, const Real& accuracy) {
  if (n < 1) throw Error("moments are indexed from 1");
  return moments(b, n, accuracy).back();
}

/// b(cos theta) = a(e^{i theta}) sqrt((1+cos theta)/(1-cos theta)); a must be even.
inline MomentSymbol th_to_moment_symbol(const FourierSymbol& a) {
  if (!is_even(a)) throw SymmetryError("th_to_moment_symbol: a is not even");
  return MomentSymbol::from_fourier(a, Weight::sqrt_ratio);
}

/// Even Fourier symbol a(e^{i theta}) = smooth_factor(cos theta) (inverse of th_to_moment_symbol).
inline FourierSymbol moment_to_th_symbol(const MomentSymbol& b) {
  if (const FourierSymbol* src = b.source(); src && declared_symmetry(*src) == Symmetry::even) return *src;
  auto fn = [b](const Real& theta) { return b.smooth_at_angle(abs(theta)); };
  std::vector<Angle> jumps;
  for (const auto& j : b.exact_jumps()) {
    jumps.push_back(j);
    jumps.push_back(-j);
  }
  return FourierSymbol::closed_form(fn, std::move(jumps), Symmetry::even, "moment_to_th");
}

/// c(e^{i theta}) = i sign(theta) b(cos theta); needs b(x)/sqrt(1-x^2) integrable.
inline FourierSymbol moment_to_skew_symbol(const MomentSymbol& b) {
  if (b.has_explicit_moments()) {
    throw Error("moment_to_skew_symbol needs pointwise values; use the sequence route (b_to_c) instead");
  }
  if (b.weight() == Weight::sqrt_ratio) {
    // b(x)/sqrt(1-x^2) ~ 2 f(1)/(1-x) at x = 1.
    Complex at_one = b.smooth_at_angle(Real(0));
    Complex probe = b.smooth_at_angle(pi() / 2L);
    Real scale = max(abs(probe), Real(1));
    if (abs(at_one) > scale * epsilon_bits(static_cast<long>(working_precision()) / 2)) {
      throw IntegrabilityError("b(x)/sqrt(1-x^2) is not integrable at x = 1 (smooth factor does not vanish there)");
    }
  }
  if (b.weight() == Weight::one) {
    if (const FourierSymbol* src = b.source(); src && declared_symmetry(*src) == Symmetry::even) {
      return multiply_by_chi(*src);
    }
  }
  Weight w = b.weight();
  auto fn = [b, w](const Real& theta) {
    Real t = abs(theta);
    Complex v = b.smooth_at_angle(t);
    if (w == Weight::sqrt_ratio) v *= cos(t / 2L) / sin(t / 2L);
    Complex iv = detail::i_times(v);
    return theta.sign() < 0 ? Complex(-iv) : iv;
  };
  std::vector<Angle> jumps{Angle::pi_times(0), Angle::pi_times(1)};
  for (const auto& j : b.exact_jumps()) {
    jumps.push_back(j);
    jumps.push_back(-j);
  }
  return FourierSymbol::closed_form(fn, std::move(jumps), Symmetry::odd, "moment_to_skew");
}

/// d(e^{i theta}) = b0(cos(theta/2)); b0 (the smooth factor) must be even.
inline FourierSymbol moment_to_halfangle(const MomentSymbol& b0) {
  if (b0.has_explicit_moments()) throw Error("moment_to_halfangle needs pointwise values");
  if (!b0.is_even()) throw SymmetryError("moment_to_halfangle: b0(-x) != b0(x)");
  if (const FourierSymbol* src = b0.source(); src && is_rotation_symmetric(*src)) {
    // b0(cos phi) = a(e^{i phi}) with a quarter-wave: d = halve_argument(a).
    if (declared_symmetry(*src) == Symmetry::even) return halve_argument(*src);
  }
  auto fn = [b0](const Real& theta) { return b0.smooth_at_angle(abs(theta) / 2L); };
  std::vector<Angle> jumps;
  for (const auto& j : b0.exact_jumps()) {
    jumps.push_back(j.scaled(2));
    jumps.push_back(j.scaled(-2));
  }
  return FourierSymbol::closed_form(fn, std::move(jumps), Symmetry::even, "moment_to_halfangle");
}

}  // namespace sdet
