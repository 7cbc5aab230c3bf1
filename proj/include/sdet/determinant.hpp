#pragma once
/**
 * @file determinant.hpp
 * @brief Exact (Bareiss) and high-precision (LU) determinants, and Pfaffians.
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "sdet/error.hpp"
#include "sdet/matrix.hpp"
#include "sdet/real.hpp"
#include "sdet/scalar.hpp"

namespace sdet {

enum class DetMethod { bareiss, lu };

inline const char* to_string(DetMethod m) { return m == DetMethod::bareiss ? "bareiss" : "lu"; }

template <class T>
struct DetResult {
  T value;
  DetMethod method = DetMethod::lu;
  double condition = 1.0;     // max/min pivot magnitude (lu only)
  Bits bits = 0;              // 0 for exact results
  double agreed_digits = 0;   // digits shared by the run and its 2x-precision recheck; inf when exact
};

// ---------------------------------------------------------------------------
// Bareiss

/// Fraction-free elimination on the integer matrix obtained by clearing row denominators.
inline DetResult<Rational> det_bareiss(const StructuredMatrix<Rational>& M) {
  const long N = M.order();
  DetResult<Rational> r;
  r.method = DetMethod::bareiss;
  r.agreed_digits = INFINITY;
  if (N == 0) {
    r.value = 1;
    return r;
  }
  std::vector<Integer> a(static_cast<std::size_t>(N * N));
  Integer scale = 1;
  for (long j = 0; j < N; ++j) {
    Integer l = 1;
    for (long k = 0; k < N; ++k) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), M(j, k).get_den_mpz_t());
    scale *= l;
    for (long k = 0; k < N; ++k) {
      const Rational& q = M(j, k);
      a[static_cast<std::size_t>(j * N + k)] = q.get_num() * (l / q.get_den());
    }
  }
  auto at = [&](long j, long k) -> Integer& { return a[static_cast<std::size_t>(j * N + k)]; };
  int sign = 1;
  Integer prev = 1;
  Integer t;
  for (long k = 0; k < N - 1; ++k) {
    if (at(k, k) == 0) {
      long p = k + 1;
      while (p < N && at(p, k) == 0) ++p;
      if (p == N) {
        r.value = 0;
        return r;
      }
      for (long c = 0; c < N; ++c) std::swap(at(k, c), at(p, c));
      sign = -sign;
    }
    for (long i = k + 1; i < N; ++i) {
      for (long j = k + 1; j < N; ++j) {
        // a_ij = (a_kk a_ij - a_ik a_kj) / prev, exact division
        mpz_mul(t.get_mpz_t(), at(k, k).get_mpz_t(), at(i, j).get_mpz_t());
        mpz_submul(t.get_mpz_t(), at(i, k).get_mpz_t(), at(k, j).get_mpz_t());
        mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = at(k, k);
  }
  Rational v(at(N - 1, N - 1) * sign, scale);
  v.canonicalize();
  r.value = v;
  return r;
}

// ---------------------------------------------------------------------------
// LU

namespace detail {

struct LuOutcome {
  Complex value;
  double condition = 1.0;
  bool singular = false;
};

/// Partial-pivoted elimination on real parts only; every imaginary part is zero.
inline LuOutcome lu_real(std::vector<Real> a, long N, const Real& zero_threshold) {
  LuOutcome out;
  Real det(1);
  int sign = 1;
  Real max_pivot, min_pivot;
  bool first = true;
  Real t, f;
  for (long k = 0; k < N; ++k) {
    long p = k;
    Real best = abs(a[static_cast<std::size_t>(k * N + k)]);
    for (long i = k + 1; i < N; ++i) {
      Real m = abs(a[static_cast<std::size_t>(i * N + k)]);
      if (m > best) {
        best = std::move(m);
        p = i;
      }
    }
    if (best <= zero_threshold) {
      out.value = Complex();
      out.singular = true;
      return out;
    }
    if (p != k) {
      for (long c = k; c < N; ++c) std::swap(a[static_cast<std::size_t>(k * N + c)], a[static_cast<std::size_t>(p * N + c)]);
      sign = -sign;
    }
    const Real& piv = a[static_cast<std::size_t>(k * N + k)];
    if (first || best > max_pivot) max_pivot = best;
    if (first || best < min_pivot) min_pivot = best;
    first = false;
    det *= piv;
    for (long i = k + 1; i < N; ++i) {
      Real& lead = a[static_cast<std::size_t>(i * N + k)];
      if (lead.is_zero()) continue;
      mpfr_div(f.raw(), lead.raw(), piv.raw(), MPFR_RNDN);
      for (long c = k + 1; c < N; ++c) {
        sub_mul(a[static_cast<std::size_t>(i * N + c)], f, a[static_cast<std::size_t>(k * N + c)], t);
      }
    }
  }
  if (sign < 0) det = -det;
  out.value = Complex(det);
  out.condition = first ? 1.0 : std::exp2(max_pivot.log2_abs() - min_pivot.log2_abs());
  return out;
}

inline LuOutcome lu_complex(std::vector<Complex> a, long N, const Real& zero_threshold) {
  LuOutcome out;
  Complex det(1);
  int sign = 1;
  Real max_pivot, min_pivot;
  bool first = true;
  Real t;
  for (long k = 0; k < N; ++k) {
    long p = k;
    Real best = abs(a[static_cast<std::size_t>(k * N + k)]);
    for (long i = k + 1; i < N; ++i) {
      Real m = abs(a[static_cast<std::size_t>(i * N + k)]);
      if (m > best) {
        best = std::move(m);
        p = i;
      }
    }
    if (best <= zero_threshold) {
      out.value = Complex();
      out.singular = true;
      return out;
    }
    if (p != k) {
      for (long c = k; c < N; ++c) std::swap(a[static_cast<std::size_t>(k * N + c)], a[static_cast<std::size_t>(p * N + c)]);
      sign = -sign;
    }
    const Complex& piv = a[static_cast<std::size_t>(k * N + k)];
    if (first || best > max_pivot) max_pivot = best;
    if (first || best < min_pivot) min_pivot = best;
    first = false;
    det *= piv;
    for (long i = k + 1; i < N; ++i) {
      const Complex& lead = a[static_cast<std::size_t>(i * N + k)];
      if (lead.is_zero()) continue;
      Complex f = lead / piv;
      for (long c = k + 1; c < N; ++c) {
        sub_mul(a[static_cast<std::size_t>(i * N + c)], f, a[static_cast<std::size_t>(k * N + c)], t);
      }
    }
  }
  if (sign < 0) det = -det;
  out.value = det;
  out.condition = first ? 1.0 : std::exp2(max_pivot.log2_abs() - min_pivot.log2_abs());
  return out;
}

template <class T>
LuOutcome lu_at(const StructuredMatrix<T>& M, Bits bits) {
  PrecisionScope ps(bits);
  const long N = M.order();
  Real max_entry;
  bool real = true;
  for (const auto& x : M.entries()) {
    if constexpr (std::is_same_v<T, Complex>) {
      if (!x.is_real()) real = false;
    }
    Real m = abs(x);
    if (m > max_entry) max_entry = std::move(m);
  }
  Real threshold = max_entry * epsilon_bits(static_cast<long>(bits) / 2);
  if (real) {
    std::vector<Real> a;
    a.reserve(M.entries().size());
    for (const auto& x : M.entries()) {
      if constexpr (std::is_same_v<T, Complex>) {
        a.push_back(Real::at_working_precision(x.real()));
      } else {
        a.push_back(Real::at_working_precision(x));
      }
    }
    return lu_real(std::move(a), N, threshold);
  }
  std::vector<Complex> a;
  a.reserve(M.entries().size());
  for (const auto& x : M.entries()) a.push_back(at_working_precision(Complex(x)));
  return lu_complex(std::move(a), N, threshold);
}

/// Decimal digits on which x and y agree (relative), capped at `cap`.
inline double agreed_digits(const Complex& x, const Complex& y, double cap) {
  Real d = abs(x - y);
  if (d.is_zero()) return cap;
  Real s = max(abs(x), abs(y));
  if (s.is_zero()) return cap;
  double lg = (s.log2_abs() - d.log2_abs()) * 0.30102999566398120;
  return std::clamp(lg, 0.0, cap);
}

template <class T>
T narrow(const Complex& z) {
  if constexpr (std::is_same_v<T, Complex>) {
    return z;
  } else {
    return z.real();
  }
}

}  // namespace detail

/**
 * Partial-pivoted LU at `bits`, rechecked at 2*bits on the same entries.
 *
 * A pivot counts as zero below 2^{-bits/2} times the largest entry. Throws
 * PrecisionError when the two runs share fewer than bits/4 bits.
 */
template <class T>
DetResult<T> det_lu(const StructuredMatrix<T>& M, Bits bits) {
  static_assert(!FieldTraits<T>::exact, "det_lu needs a high-precision field; use det_bareiss");
  if (bits < 64) throw Error("det_lu: precision must be at least 64 bits");
  DetResult<T> r;
  r.method = DetMethod::lu;
  r.bits = bits;
  auto lo = detail::lu_at(M, bits);
  auto hi = detail::lu_at(M, 2 * bits);
  double cap = bits_to_digits(bits);
  {
    PrecisionScope ps(2 * bits);
    if (lo.singular != hi.singular) {
      throw PrecisionError("det_lu: singularity decision differs between " + std::to_string(bits) + " and " +
                               std::to_string(2 * bits) + " bits",
                           static_cast<long>(4 * bits));
    }
    r.agreed_digits = lo.singular ? cap : detail::agreed_digits(lo.value, hi.value, cap);
  }
  r.condition = lo.condition;
  if (!lo.singular && r.agreed_digits < bits_to_digits(bits / 4)) {
    throw PrecisionError("det_lu: only " + std::to_string(static_cast<int>(r.agreed_digits)) + " digits agree between " +
                             std::to_string(bits) + " and " + std::to_string(2 * bits) + " bits",
                         static_cast<long>(2 * bits));
  }
  PrecisionScope ps(bits);
  r.value = detail::narrow<T>(at_working_precision(lo.value));
  return r;
}

template <class T>
DetResult<T> determinant(const StructuredMatrix<T>& M, Bits bits = 0) {
  if constexpr (FieldTraits<T>::exact) {
    (void)bits;
    return det_bareiss(M);
  } else {
    return det_lu(M, bits ? bits : working_precision());
  }
}

// ---------------------------------------------------------------------------
// Pfaffian

/**
 * Pfaffian by skew-symmetric elimination, Pf([[0, m], [-m, 0]]) = m.
 *
 * With p = M[k][k+1], a = row k and b = row k+1, the trailing block updates as
 * C += (b a^T - a b^T) / p; Pf picks up p, and each index swap flips its sign.
 */
template <class T>
T pfaffian(const StructuredMatrix<T>& M) {
  const long N = M.order();
  if (N % 2 != 0) throw Error("pfaffian needs even order, got " + std::to_string(N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k <= j; ++k) {
      if (!detail::nearly_equal(M(j, k), T(-M(k, j)))) {
        throw SymmetryError("pfaffian needs a skewsymmetric matrix; fails at (" + std::to_string(j) + "," +
                            std::to_string(k) + ")");
      }
    }
  }
  std::vector<T> a = M.entries();
  auto at = [&](long j, long k) -> T& { return a[static_cast<std::size_t>(j * N + k)]; };
  auto swap_index = [&](long x, long y) {
    for (long c = 0; c < N; ++c) std::swap(at(x, c), at(y, c));
    for (long r = 0; r < N; ++r) std::swap(at(r, x), at(r, y));
  };
  T pf = FieldTraits<T>::from_rational(1);
  for (long k = 0; k < N; k += 2) {
    long p = -1;
    if constexpr (FieldTraits<T>::exact) {
      for (long j = k + 1; j < N; ++j) {
        if (at(k, j) != 0) {
          p = j;
          break;
        }
      }
    } else {
      Real best;
      for (long j = k + 1; j < N; ++j) {
        Real m = abs(at(k, j));
        if (m > best) {
          best = std::move(m);
          p = j;
        }
      }
    }
    if (p < 0) return detail::zero_of<T>();
    if (p != k + 1) {
      swap_index(k + 1, p);
      pf = T(-pf);
    }
    T piv = at(k, k + 1);
    pf = T(pf * piv);
    for (long i = k + 2; i < N; ++i) {
      for (long j = k + 2; j < N; ++j) {
        // C_ij += (b_i a_j - a_i b_j) / p
        at(i, j) += T((at(k + 1, i) * at(k, j) - at(k, i) * at(k + 1, j)) / piv);
      }
    }
  }
  return pf;
}

}  // namespace sdet
