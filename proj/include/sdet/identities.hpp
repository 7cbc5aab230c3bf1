#pragma once
/**
 * @file identities.hpp
 * @brief Determinant identities between Toeplitz, Hankel, Toeplitz+Hankel and Hankel
 *        moment matrices, each checked over a range of N in exact or hp arithmetic.
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sdet/determinant.hpp"
#include "sdet/matrix.hpp"
#include "sdet/symbol.hpp"
#include "sdet/symbol_json.hpp"
#include "sdet/transforms.hpp"

namespace sdet {

enum class IdentityKind {
  hankel_congruence,   // det(T_N(a) + H_N(a)) = det B_N,  b = a_to_b(a)
  th_vs_moment,        // det H_N[b] = det(T_N(a) + H_N(a)),  b(cos t) = a(e^{it}) sqrt((1+cos t)/(1-cos t))
  quarter_wave,        // det(T_N(a) + H_N(a)) = det T_N(d),  d(e^{it}) = a(e^{it/2})
  moment_to_toeplitz,  // det H_N[b0 w] = det T_N(d),  d(e^{it}) = b0(cos(t/2))
  skew_square,         // det T_2N(c) = det(T_N(a) + H_N(a))^2,  c = a_to_c(a)
  cseq_square,         // det T_2N(c) = det(B_N)^2,  b = c_to_b(c)
  moment_skew_square,  // det T_2N(c) = det(H_N[b])^2,  c(e^{it}) = i sign(t) b(cos t)
  parity_split_even,   // det T_2N(a) = det(T_N(d))^2,  a(e^{it}) = d(e^{2it})
  parity_split_chi,    // det T_2N(chi a) = det T_N(t_{-1/2} d) det T_N(t_{1/2} d)
};

inline const std::vector<IdentityKind>& all_identity_kinds() {
  static const std::vector<IdentityKind> kinds{
      IdentityKind::hankel_congruence, IdentityKind::th_vs_moment,       IdentityKind::quarter_wave,
      IdentityKind::moment_to_toeplitz, IdentityKind::skew_square,       IdentityKind::cseq_square,
      IdentityKind::moment_skew_square, IdentityKind::parity_split_even, IdentityKind::parity_split_chi};
  return kinds;
}

inline const char* to_string(IdentityKind k) {
  switch (k) {
    case IdentityKind::hankel_congruence: return "HankelCongruence";
    case IdentityKind::th_vs_moment: return "THvsMoment";
    case IdentityKind::quarter_wave: return "QuarterWave";
    case IdentityKind::moment_to_toeplitz: return "MomentToToeplitz";
    case IdentityKind::skew_square: return "SkewSquare";
    case IdentityKind::cseq_square: return "CSeqSquare";
    case IdentityKind::moment_skew_square: return "MomentSkewSquare";
    case IdentityKind::parity_split_even: return "ParitySplitEven";
    case IdentityKind::parity_split_chi: return "ParitySplitChi";
  }
  return "?";
}

inline std::optional<IdentityKind> identity_kind_from_string(const std::string& s) {
  for (auto k : all_identity_kinds()) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

/// Bits used when the caller leaves precision open: SDET_DEFAULT_BITS or 128.
inline Bits default_bits() {
  if (const char* env = std::getenv("SDET_DEFAULT_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 64) return v;
  }
  return 128;
}

/// max(default_bits(), 12 N): Hankel moment matrices lose about 12 bits per order.
inline Bits auto_bits(long N) { return std::max<Bits>(default_bits(), 12 * N); }

struct Mode {
  bool exact = true;
  Bits bits = 0;  // hp only; 0 means auto_bits(N)

  static Mode exact_mode() { return {true, 0}; }
  static Mode hp(Bits b = 0) { return {false, b}; }
  Bits bits_for(long N) const { return bits ? bits : auto_bits(N); }
};

using IdentityInput = std::variant<FourierSymbol, MomentSymbol>;

struct IdentityRecord {
  long N = 0;
  std::string lhs, rhs, abs_resid, rel_resid;
  double rel = 0;                     // relative residual as a double (0 for exact agreement)
  double digits = INFINITY;           // guaranteed digits of the determinants (inf when exact)
  std::string mode;                   // "exact" | "hp"
  Bits bits = 0;
  std::optional<double> pfaffian_rel; // |Pf^2 - det| / |det| where a Pfaffian check applies
  bool pass = false;
};

enum class Verdict { pass, fail, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

struct IdentityReport {
  IdentityKind kind{};
  std::vector<IdentityRecord> records;
  Verdict verdict = Verdict::not_applicable;
  std::vector<std::string> notes;
};

namespace identity_detail {

template <class T>
struct Det {
  T value;
  double digits = INFINITY;
};

template <class T>
Det<T> det_of(const StructuredMatrix<T>& M, Bits bits) {
  if constexpr (FieldTraits<T>::exact) {
    return {det_bareiss(M).value, INFINITY};
  } else {
    auto r = det_lu(M, bits);
    return {r.value, r.agreed_digits};
  }
}

template <class T>
T square(const T& x) {
  return T(x * x);
}

template <class T>
struct Cell {
  T lhs, rhs;
  double digits = INFINITY;
  std::optional<T> pf_squared;  // compared against lhs
};

/// Sequences shared by every N of one report, computed once at the largest radius.
template <class T>
struct Prepared {
  std::optional<ScalarSeq<T>> a;  // even
  std::optional<ScalarSeq<T>> b;  // one-sided moments
  std::optional<ScalarSeq<T>> c;  // odd
  std::optional<ScalarSeq<T>> d;
  std::optional<ScalarSeq<T>> d1;
  std::optional<ScalarSeq<T>> d2;
  bool want_pfaffian = false;
  std::vector<std::string> notes;
};

template <class T>
ScalarSeq<T> retag_even(const ScalarSeq<T>& s, long radius) {
  if (s.kind() == SeqKind::even) return s;
  std::map<long, T> e;
  for (long n = -radius; n <= radius; ++n) e.emplace(n, s[n]);
  return ScalarSeq<T>(SeqKind::even, e, s.bound() ? s.bound() : std::optional<long>(radius));
}

template <class T>
ScalarSeq<T> retag_odd(const ScalarSeq<T>& s, long radius) {
  if (s.kind() == SeqKind::odd) return s;
  std::map<long, T> e;
  for (long n = -radius; n <= radius; ++n) e.emplace(n, s[n]);
  return ScalarSeq<T>(SeqKind::odd, e, s.bound() ? s.bound() : std::optional<long>(radius));
}

inline bool exact_coeffs(const FourierSymbol& a) {
  const auto* c = std::get_if<symbol_node::Coeffs>(&a.node());
  if (!c) return false;
  for (const auto& [n, v] : c->entries) {
    if (!v.is_real()) return false;
  }
  return true;
}

/// Coefficient sequence in field T with the requested symmetry enforced.
template <class T>
ScalarSeq<T> coeffs_as(const FourierSymbol& a, long radius, SeqKind kind) {
  ScalarSeq<T> s = symbol_coefficients<T>(a, radius);
  if (kind == SeqKind::even) return retag_even(s, radius);
  if (kind == SeqKind::odd) return retag_odd(s, radius);
  return s;
}

[[noreturn]] inline void mismatch(IdentityKind k, const std::string& why) {
  throw SpeciesError(std::string(to_string(k)) + ": " + why);
}

/// Kinds whose input must satisfy a(-t) = a(t).
inline bool needs_rotation_symmetry(IdentityKind k) {
  return k == IdentityKind::quarter_wave || k == IdentityKind::parity_split_even ||
         k == IdentityKind::parity_split_chi;
}

/// Kinds whose data are integrals; hp unless the integrals are rational (see verify_impl).
inline bool integral_defined(IdentityKind k) {
  return k == IdentityKind::th_vs_moment || k == IdentityKind::moment_to_toeplitz ||
         k == IdentityKind::moment_skew_square || k == IdentityKind::parity_split_chi;
}

/// verify_all may feed derived inputs that verify() itself rejects.
struct Derivations {
  bool c_from_even = false;  // CSeqSquare on c = a_to_c(a)
};

template <class T>
Prepared<T> prepare(IdentityKind kind, const IdentityInput& input, long n_max, const Derivations& der) {
  Prepared<T> p;
  const FourierSymbol* f = std::get_if<FourierSymbol>(&input);
  const MomentSymbol* m = std::get_if<MomentSymbol>(&input);
  constexpr bool exact = FieldTraits<T>::exact;

  auto require_even_fourier = [&]() -> const FourierSymbol& {
    if (!f) mismatch(kind, "needs an even Fourier symbol, got a moment symbol");
    if (!is_even(*f)) mismatch(kind, "needs an even Fourier symbol a(1/t) = a(t)");
    if (exact && !exact_coeffs(*f)) mismatch(kind, "exact mode needs a finite real rational coefficient sequence");
    return *f;
  };

  switch (kind) {
    case IdentityKind::hankel_congruence: {
      const auto& a = require_even_fourier();
      p.a = coeffs_as<T>(a, 2 * n_max, SeqKind::even);
      p.b = a_to_b(*p.a, 2 * n_max - 1);
      break;
    }
    case IdentityKind::th_vs_moment: {
      {
        if (m) {
          if (m->weight() != Weight::sqrt_ratio) mismatch(kind, "moment symbol must carry the sqrt_ratio weight");
          if (m->has_explicit_moments()) mismatch(kind, "explicit moments have no pointwise smooth factor");
          p.b = moment_sequence<T>(*m, 2 * n_max - 1);
          p.a = coeffs_as<T>(moment_to_th_symbol(*m), 2 * n_max, SeqKind::even);
        } else {
          const auto& a = require_even_fourier();
          p.a = coeffs_as<T>(a, 2 * n_max, SeqKind::even);
          p.b = moment_sequence<T>(th_to_moment_symbol(a), 2 * n_max - 1);
        }
      }
      break;
    }
    case IdentityKind::quarter_wave: {
      const auto& a = require_even_fourier();
      if (!is_rotation_symmetric(a)) mismatch(kind, "needs a(-t) = a(t): odd coefficients must vanish");
      p.a = coeffs_as<T>(a, 2 * n_max, SeqKind::even);
      p.d = coeffs_as<T>(halve_argument(a), n_max, SeqKind::even);
      break;
    }
    case IdentityKind::moment_to_toeplitz: {
      {
        MomentSymbol b = [&] {
          if (m) return *m;
          // b0(cos phi) = a(e^{2 i phi}) so that d = a.
          const auto& a = require_even_fourier();
          p.notes.push_back("moment symbol derived from the even input a: b0(cos phi) = a(e^{2i phi}), weight sqrt_ratio");
          return MomentSymbol::from_fourier(FourierSymbol::doubled(a), Weight::sqrt_ratio);
        }();
        if (b.weight() != Weight::sqrt_ratio) mismatch(kind, "moment symbol must carry the sqrt_ratio weight");
        if (b.has_explicit_moments()) mismatch(kind, "explicit moments have no pointwise smooth factor");
        if (!b.is_even()) mismatch(kind, "smooth factor b0 must be even");
        p.b = moment_sequence<T>(b, 2 * n_max - 1);
        p.d = coeffs_as<T>(moment_to_halfangle(b), n_max, SeqKind::even);
      }
      break;
    }
    case IdentityKind::skew_square: {
      const auto& a = require_even_fourier();
      p.a = coeffs_as<T>(a, 2 * n_max, SeqKind::even);
      p.c = a_to_c(*p.a, 2 * n_max);
      p.want_pfaffian = true;
      break;
    }
    case IdentityKind::cseq_square: {
      if (der.c_from_even) {
        const auto& a = require_even_fourier();
        auto aseq = coeffs_as<T>(a, 2 * n_max, SeqKind::even);
        p.c = a_to_c(aseq, 2 * n_max);
        p.b = c_to_b(*p.c, 2 * n_max - 1);
        p.notes.push_back(
            "c = a_to_c(a) from the even input; sequence-level input, not necessarily the coefficients of an "
            "L1 symbol");
      } else if (m) {
        if (!m->has_explicit_moments()) mismatch(kind, "needs an odd sequence or explicit moments");
        p.b = moment_sequence<T>(*m, 2 * n_max - 1);
        p.c = b_to_c(*p.b, 2 * n_max);
        p.notes.push_back("c = b_to_c(b) from the explicit moments; sequence-level identity");
      } else {
        if (!is_odd(*f)) mismatch(kind, "needs an odd sequence c_{-n} = -c_n");
        if (exact && !exact_coeffs(*f)) mismatch(kind, "exact mode needs a finite real rational sequence");
        p.c = coeffs_as<T>(*f, 2 * n_max, SeqKind::odd);
        p.b = c_to_b(*p.c, 2 * n_max - 1);
      }
      p.want_pfaffian = true;
      break;
    }
    case IdentityKind::moment_skew_square: {
      if (m && m->has_explicit_moments()) {
        // Sequence-level version with rational moments.
        p.b = moment_sequence<T>(*m, 2 * n_max - 1);
        p.c = b_to_c(*p.b, 2 * n_max);
        p.notes.push_back("explicit moments: c = b_to_c(b), sequence-level identity");
      } else if constexpr (!exact) {
        MomentSymbol b = [&] {
          if (m) return *m;
          const auto& a = require_even_fourier();
          p.notes.push_back("moment symbol derived from the even input a: b(cos t) = a(e^{it}), weight one");
          return MomentSymbol::from_fourier(a, Weight::one);
        }();
        p.b = moment_sequence<T>(b, 2 * n_max - 1);
        p.c = coeffs_as<T>(moment_to_skew_symbol(b), 2 * n_max, SeqKind::odd);
      } else {
        mismatch(kind, "exact mode needs explicit rational moments; the skew symbol has irrational coefficients");
      }
      p.want_pfaffian = true;
      break;
    }
    case IdentityKind::parity_split_even: {
      if (!f) mismatch(kind, "needs a Fourier symbol");
      if (exact && !exact_coeffs(*f)) mismatch(kind, "exact mode needs a finite real rational coefficient sequence");
      if (!is_rotation_symmetric(*f)) mismatch(kind, "needs a(e^{it}) = d(e^{2it}): odd coefficients must vanish");
      SeqKind k = is_even(*f) ? SeqKind::even : SeqKind::general;
      p.a = coeffs_as<T>(*f, 2 * n_max, k);
      p.d = coeffs_as<T>(halve_argument(*f), n_max, k);
      break;
    }
    case IdentityKind::parity_split_chi: {
      if constexpr (!exact) {
        if (!f) mismatch(kind, "needs a Fourier symbol");
        if (!is_rotation_symmetric(*f)) mismatch(kind, "needs a(e^{it}) = d(e^{2it}): odd coefficients must vanish");
        FourierSymbol d = halve_argument(*f);
        p.c = coeffs_as<T>(multiply_by_chi(*f), 2 * n_max, is_even(*f) ? SeqKind::odd : SeqKind::general);
        p.d1 = coeffs_as<T>(FourierSymbol::product({FourierSymbol::jump(QComplex(Rational(-1, 2))), d}), n_max,
                            SeqKind::general);
        p.d2 = coeffs_as<T>(FourierSymbol::product({FourierSymbol::jump(QComplex(Rational(1, 2))), d}), n_max,
                            SeqKind::general);
      } else {
        mismatch(kind, "exact mode unavailable: chi and t_beta have irrational coefficients");
      }
      break;
    }
  }
  return p;
}

template <class T>
Cell<T> cell(IdentityKind kind, const Prepared<T>& p, long N, Bits bits) {
  Cell<T> out;
  auto take = [&](const StructuredMatrix<T>& M) {
    auto d = det_of(M, bits);
    out.digits = std::min(out.digits, d.digits);
    return d.value;
  };
  switch (kind) {
    case IdentityKind::hankel_congruence:
      out.lhs = take(toeplitz_plus_hankel(*p.a, N));
      out.rhs = take(hankel_moment(*p.b, N));
      break;
    case IdentityKind::th_vs_moment:
      out.lhs = take(hankel_moment(*p.b, N));
      out.rhs = take(toeplitz_plus_hankel(*p.a, N));
      break;
    case IdentityKind::quarter_wave:
      out.lhs = take(toeplitz_plus_hankel(*p.a, N));
      out.rhs = take(toeplitz(*p.d, N));
      break;
    case IdentityKind::moment_to_toeplitz:
      out.lhs = take(hankel_moment(*p.b, N));
      out.rhs = take(toeplitz(*p.d, N));
      break;
    case IdentityKind::skew_square: {
      auto C = toeplitz(*p.c, 2 * N);
      out.lhs = take(C);
      out.rhs = square(take(toeplitz_plus_hankel(*p.a, N)));
      if (p.want_pfaffian) {
        PrecisionScope ps(bits);
        out.pf_squared = square(pfaffian(C));
      }
      break;
    }
    case IdentityKind::cseq_square:
    case IdentityKind::moment_skew_square: {
      auto C = toeplitz(*p.c, 2 * N);
      out.lhs = take(C);
      out.rhs = square(take(hankel_moment(*p.b, N)));
      if (p.want_pfaffian) {
        PrecisionScope ps(bits);
        out.pf_squared = square(pfaffian(C));
      }
      break;
    }
    case IdentityKind::parity_split_even:
      out.lhs = take(toeplitz(*p.a, 2 * N));
      out.rhs = square(take(toeplitz(*p.d, N)));
      break;
    case IdentityKind::parity_split_chi:
      out.lhs = take(toeplitz(*p.c, 2 * N));
      out.rhs = T(take(toeplitz(*p.d1, N)) * take(toeplitz(*p.d2, N)));
      break;
  }
  return out;
}

inline std::string fmt_digits(const Real& x, int digits) { return to_string(x, std::max(digits, 1)); }

template <class T>
std::string format_value(const T& x, int digits) {
  if constexpr (FieldTraits<T>::exact) {
    return x.get_str();
  } else if constexpr (std::is_same_v<T, Complex>) {
    // imaginary noise below the shown digits is not printed
    if (abs(x.imag()) <= abs(x) * pow(Real(10), Real(-std::max(digits, 1)))) {
      return to_string(x.real(), std::max(digits, 1));
    }
    return FieldTraits<T>::format(x, digits);
  } else {
    return FieldTraits<T>::format(x, digits);
  }
}

/// Relative residual of (x, y); returns (abs, rel) for hp and the literal difference for exact.
template <class T>
IdentityRecord make_record(long N, const Cell<T>& c, Bits bits) {
  IdentityRecord r;
  r.N = N;
  if constexpr (FieldTraits<T>::exact) {
    Rational diff = c.lhs - c.rhs;
    r.mode = "exact";
    r.bits = 0;
    r.lhs = c.lhs.get_str();
    r.rhs = c.rhs.get_str();
    r.abs_resid = Rational(abs(diff)).get_str();
    Rational scale = std::max(Rational(abs(c.lhs)), Rational(abs(c.rhs)));
    r.rel_resid = diff == 0 ? "0" : Rational(abs(diff) / scale).get_str();
    r.rel = diff == 0 ? 0.0 : Rational(abs(diff) / scale).get_d();
    r.digits = INFINITY;
    bool pf_ok = true;
    if (c.pf_squared) {
      Rational pd = *c.pf_squared - c.lhs;
      r.pfaffian_rel = pd == 0 ? 0.0 : 1.0;
      pf_ok = pd == 0;
    }
    r.pass = diff == 0 && pf_ok;
  } else {
    PrecisionScope ps(bits);
    r.mode = "hp";
    r.bits = bits;
    r.digits = c.digits;
    int shown = std::max(1, static_cast<int>(std::floor(c.digits)));
    r.lhs = format_value(c.lhs, shown);
    r.rhs = format_value(c.rhs, shown);
    Real diff = abs(c.lhs - c.rhs);
    Real scale = max(abs(c.lhs), abs(c.rhs));
    Real rel = scale.is_zero() ? Real(0) : diff / scale;
    r.abs_resid = to_string(diff, 6);
    r.rel_resid = to_string(rel, 6);
    r.rel = rel.to_double();
    double threshold = std::pow(10.0, -c.digits / 2);
    bool pf_ok = true;
    if (c.pf_squared) {
      Real pd = abs(*c.pf_squared - c.lhs);
      Real ps_scale = max(abs(*c.pf_squared), abs(c.lhs));
      double prel = ps_scale.is_zero() ? 0.0 : (pd / ps_scale).to_double();
      r.pfaffian_rel = prel;
      pf_ok = prel < threshold;
    }
    r.pass = r.rel < threshold && pf_ok;
  }
  return r;
}

template <class T>
IdentityReport run(IdentityKind kind, const IdentityInput& input, const std::vector<long>& Ns, const Mode& mode,
                   const Derivations& der) {
  IdentityReport rep;
  rep.kind = kind;
  long n_max = 1;
  Bits bits_max = 0;
  for (long N : Ns) {
    if (N < 1) throw Error("N values must be >= 1");
    n_max = std::max(n_max, N);
    bits_max = std::max(bits_max, mode.bits_for(N));
  }
  Prepared<T> p;
  {
    std::optional<PrecisionScope> ps;
    if constexpr (!FieldTraits<T>::exact) ps.emplace(bits_max);
    p = prepare<T>(kind, input, n_max, der);
  }
  rep.notes = p.notes;
  bool all = true;
  for (long N : Ns) {
    Bits bits = FieldTraits<T>::exact ? 0 : mode.bits_for(N);
    Cell<T> c = [&] {
      if constexpr (FieldTraits<T>::exact) {
        return cell(kind, p, N, 0);
      } else {
        PrecisionScope ps(bits);
        return cell(kind, p, N, bits);
      }
    }();
    rep.records.push_back(make_record(N, c, bits));
    all = all && rep.records.back().pass;
  }
  rep.verdict = all ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace identity_detail

inline std::vector<long> range_1_to(long n_max) {
  std::vector<long> v;
  for (long n = 1; n <= n_max; ++n) v.push_back(n);
  return v;
}

/**
 * Checks one identity for every N in `Ns`.
 *
 * Species mismatches throw SpeciesError. Kinds whose data are integrals run in hp
 * arithmetic even in exact mode (noted in the report) unless moments are given as
 * rationals.
 */
namespace identity_detail {
inline IdentityReport verify_impl(IdentityKind kind, const IdentityInput& input, const std::vector<long>& Ns,
                                  const Mode& mode, const Derivations& der) {
  bool explicit_moments = std::holds_alternative<MomentSymbol>(input) &&
                          std::get<MomentSymbol>(input).has_explicit_moments();
  if (mode.exact && integral_defined(kind) && !(kind == IdentityKind::moment_skew_square && explicit_moments)) {
    // exact moments exist for rational cosine polynomials with the sqrt_ratio weight
    if (kind == IdentityKind::th_vs_moment || kind == IdentityKind::moment_to_toeplitz) {
      try {
        return run<Rational>(kind, input, Ns, mode, der);
      } catch (const SpeciesError&) {
      }
    }
    Mode hp = Mode::hp(0);
    IdentityReport r = run<Complex>(kind, input, Ns, hp, der);
    r.notes.insert(r.notes.begin(), "exact mode replaced by hp: this identity's data are integrals");
    return r;
  }
  if (mode.exact) return run<Rational>(kind, input, Ns, mode, der);
  return run<Complex>(kind, input, Ns, mode, der);
}
}  // namespace identity_detail

inline IdentityReport verify(IdentityKind kind, const IdentityInput& input, const std::vector<long>& Ns,
                             const Mode& mode) {
  return identity_detail::verify_impl(kind, input, Ns, mode, {});
}

inline IdentityReport verify(IdentityKind kind, const IdentityInput& input, long n_max, const Mode& mode) {
  return verify(kind, input, range_1_to(n_max), mode);
}

/**
 * Runs every kind that applies to `input`.
 *
 * For an even input a without a(-t) = a(t), the rotation-symmetric kinds run on
 * a(t^2); CSeqSquare runs on c = a_to_c(a). Inapplicable kinds and individual
 * failures are reported, never thrown.
 */
inline std::vector<IdentityReport> verify_all(const IdentityInput& input, long n_max, const Mode& mode) {
  using namespace identity_detail;
  std::vector<IdentityReport> out;
  const FourierSymbol* f = std::get_if<FourierSymbol>(&input);
  bool even_input = f && is_even(*f);
  bool rotation = f && is_rotation_symmetric(*f);
  for (auto kind : all_identity_kinds()) {
    IdentityInput in = input;
    std::vector<std::string> pre_notes;
    if (even_input && needs_rotation_symmetry(kind) && !rotation) {
      in = FourierSymbol::doubled(*f);
      pre_notes.push_back("input applied as a(t^2) to satisfy a(-t) = a(t)");
    }
    Derivations der;
    der.c_from_even = even_input && kind == IdentityKind::cseq_square;
    IdentityReport rep;
    try {
      rep = verify_impl(kind, in, range_1_to(n_max), mode, der);
    } catch (const SpeciesError& e) {
      rep.kind = kind;
      rep.verdict = Verdict::not_applicable;
      rep.notes.push_back(std::string("species mismatch: ") + e.what());
    } catch (const IntegrabilityError& e) {
      rep.kind = kind;
      rep.verdict = Verdict::not_applicable;
      rep.notes.push_back(std::string("integrability precondition fails: ") + e.what());
    } catch (const PrecisionError& e) {
      rep.kind = kind;
      rep.verdict = Verdict::fail;
      rep.notes.push_back(std::string("precision failure: ") + e.what());
    } catch (const Error& e) {
      rep.kind = kind;
      rep.verdict = Verdict::fail;
      rep.notes.push_back(std::string("error: ") + e.what());
    }
    rep.notes.insert(rep.notes.begin(), pre_notes.begin(), pre_notes.end());
    out.push_back(std::move(rep));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const IdentityRecord& r) {
  nlohmann::ordered_json j;
  j["N"] = r.N;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["abs_resid"] = r.abs_resid;
  j["rel_resid"] = r.rel_resid;
  j["mode"] = r.mode;
  j["bits"] = r.bits;
  if (r.pfaffian_rel) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", *r.pfaffian_rel);
    j["pfaffian_rel"] = buf;
  }
  j["pass"] = r.pass;
  return j;
}

inline nlohmann::ordered_json to_json(const IdentityReport& rep) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(rep.kind);
  j["verdict"] = to_string(rep.verdict);
  j["notes"] = rep.notes;
  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : rep.records) recs.push_back(to_json(r));
  j["records"] = recs;
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<IdentityReport>& reps) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& r : reps) a.push_back(to_json(r));
  return a;
}

/// One row per record: kind,N,lhs,rhs,abs_resid,rel_resid,mode,bits.
inline std::string to_csv(const std::vector<IdentityReport>& reps) {
  std::string out = "kind,N,lhs,rhs,abs_resid,rel_resid,mode,bits\n";
  for (const auto& rep : reps) {
    for (const auto& r : rep.records) {
      out += std::string(to_string(rep.kind)) + "," + std::to_string(r.N) + "," + r.lhs + "," + r.rhs + "," +
             r.abs_resid + "," + r.rel_resid + "," + r.mode + "," + std::to_string(r.bits) + "\n";
    }
  }
  return out;
}

}  // namespace sdet
