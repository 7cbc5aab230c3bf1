#pragma once
/**
 * @file transforms.hpp
 * @brief Linear maps between the a-sequence (Fourier coefficients of an even symbol),
 *        the b-sequence (moments) and the c-sequence (coefficients of an odd symbol),
 *        plus the binomial matrix D with B_N = D_N^T A_N D_N.
 */

#include <map>
#include <string>
#include <vector>

#include "sdet/error.hpp"
#include "sdet/scalar.hpp"
#include "sdet/sequence.hpp"

namespace sdet {

namespace detail {

template <class T>
T zero_of() {
  if constexpr (FieldTraits<T>::exact) {
    return T(0);
  } else {
    return T();
  }
}

template <class T>
T scale_by(const T& x, const Rational& q) {
  if constexpr (FieldTraits<T>::exact) {
    return T(x * q);
  } else {
    return x * Real(q);
  }
}

template <class T>
void require_kind(const ScalarSeq<T>& s, SeqKind kind, const char* op) {
  if (s.kind() != kind) {
    throw SpeciesError(std::string(op) + ": expected a sequence declared " + to_string(kind) + ", got " +
                       to_string(s.kind()));
  }
}

}  // namespace detail

/// b_n = sum_{k=0}^{n-1} C(n-1,k) (a_{1-n+2k} + a_{2-n+2k}), 1 <= n <= n_max.
template <class T>
ScalarSeq<T> a_to_b(const ScalarSeq<T>& a, long n_max) {
  detail::require_kind(a, SeqKind::even, "a_to_b");
  if (n_max < 1) throw Error("a_to_b: n_max must be >= 1");
  std::map<long, T> b;
  for (long n = 1; n <= n_max; ++n) {
    T acc = detail::zero_of<T>();
    for (long k = 0; k <= n - 1; ++k) {
      acc += detail::scale_by(T(a[1 - n + 2 * k] + a[2 - n + 2 * k]), binomial(n - 1, k));
    }
    b.emplace(n, std::move(acc));
  }
  return ScalarSeq<T>(SeqKind::one_sided, b);
}

/// c_n = sum_{k=-n+1}^{n} a_k for n > 0, c_0 = 0, c_{-n} = -c_n.
template <class T>
ScalarSeq<T> a_to_c(const ScalarSeq<T>& a, long n_max) {
  detail::require_kind(a, SeqKind::even, "a_to_c");
  if (n_max < 1) throw Error("a_to_c: n_max must be >= 1");
  std::map<long, T> c;
  c.emplace(0, detail::zero_of<T>());
  T acc = a[0];
  for (long n = 1; n <= n_max; ++n) {
    // c_n = c_{n-1} + a_n + a_{-n+1}
    acc += a[n];
    if (n > 1) acc += a[-n + 1];
    c.emplace(n, acc);
  }
  return ScalarSeq<T>(SeqKind::odd, c);
}

/// b_n = sum_{k=0}^{floor(n/2)} (C(n-1,k) - C(n-1,k-1)) c_{n-2k}.
template <class T>
ScalarSeq<T> c_to_b(const ScalarSeq<T>& c, long n_max) {
  detail::require_kind(c, SeqKind::odd, "c_to_b");
  if (n_max < 1) throw Error("c_to_b: n_max must be >= 1");
  std::map<long, T> b;
  for (long n = 1; n <= n_max; ++n) {
    T acc = detail::zero_of<T>();
    for (long k = 0; 2 * k <= n; ++k) {
      Rational w = binomial(n - 1, k) - binomial(n - 1, k - 1);
      if (w != 0) acc += detail::scale_by(c[n - 2 * k], w);
    }
    b.emplace(n, std::move(acc));
  }
  return ScalarSeq<T>(SeqKind::one_sided, b);
}

/// Inverse of c_to_b: the map is triangular with unit coefficient on c_n.
template <class T>
ScalarSeq<T> b_to_c(const ScalarSeq<T>& b, long n_max) {
  detail::require_kind(b, SeqKind::one_sided, "b_to_c");
  if (n_max < 1) throw Error("b_to_c: n_max must be >= 1");
  std::map<long, T> c;
  c.emplace(0, detail::zero_of<T>());
  for (long n = 1; n <= n_max; ++n) {
    T acc = b[n];
    for (long k = 1; 2 * k < n; ++k) {
      Rational w = binomial(n - 1, k) - binomial(n - 1, k - 1);
      if (w != 0) acc -= detail::scale_by(c.at(n - 2 * k), w);
    }
    c.emplace(n, std::move(acc));
  }
  return ScalarSeq<T>(SeqKind::odd, c);
}

/// Even a with a_to_c(a) = c on 1..n_max, taking a_0 = c_1/2 and a_n + a_{n-1} = c_n - c_{n-1}.
template <class T>
ScalarSeq<T> recover_a_from_c(const ScalarSeq<T>& c, long n_max) {
  detail::require_kind(c, SeqKind::odd, "recover_a_from_c");
  if (n_max < 1) throw Error("recover_a_from_c: n_max must be >= 1");
  std::map<long, T> a;
  T prev = detail::scale_by(c[1], Rational(1, 2));
  a.emplace(0, prev);
  for (long n = 1; n <= n_max; ++n) {
    T next = c[n] - c[n - 1] - prev;
    a.emplace(n, next);
    prev = std::move(next);
  }
  return ScalarSeq<T>(SeqKind::even, a);
}

/// xi(n, k) = C(n, floor(k/2)).
inline Rational xi(long n, long k) {
  if (k < 0) return Rational(0);
  return binomial(n, k / 2);
}

/// N x N section of D: entry (j, n) = xi(n, n - j), upper triangular with unit diagonal.
struct BinomialD {
  long size = 0;
  std::vector<Rational> entries;  // row-major

  const Rational& operator()(long j, long n) const { return entries[static_cast<std::size_t>(j * size + n)]; }
};

inline BinomialD build_D(long N) {
  if (N < 1) throw Error("build_D: N must be >= 1");
  BinomialD d;
  d.size = N;
  d.entries.assign(static_cast<std::size_t>(N * N), Rational(0));
  for (long j = 0; j < N; ++j) {
    for (long n = j; n < N; ++n) d.entries[static_cast<std::size_t>(j * N + n)] = xi(n, n - j);
  }
  return d;
}

/// max |B_N - D_N^T A_N D_N| with A_N = (a_{j-k} + a_{j+k+1}), B_N = (b_{1+j+k}).
template <class T>
auto congruence_check(const ScalarSeq<T>& a, long N) {
  detail::require_kind(a, SeqKind::even, "congruence_check");
  if (N < 1) throw Error("congruence_check: N must be >= 1");
  if (a.bound() && *a.bound() < 2 * N - 1) {
    throw SupportError("congruence_check: need a_n for |n| <= " + std::to_string(2 * N - 1) + ", have |n| <= " +
                       std::to_string(*a.bound()));
  }
  auto b = a_to_b(a, 2 * N - 1);
  BinomialD D = build_D(N);
  std::vector<T> A(static_cast<std::size_t>(N * N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k < N; ++k) A[static_cast<std::size_t>(j * N + k)] = a[j - k] + a[j + k + 1];
  }
  // AD then D^T (AD)
  std::vector<T> AD(static_cast<std::size_t>(N * N), detail::zero_of<T>());
  for (long j = 0; j < N; ++j) {
    for (long n = 0; n < N; ++n) {
      T acc = detail::zero_of<T>();
      for (long k = 0; k <= n; ++k) acc += detail::scale_by(A[static_cast<std::size_t>(j * N + k)], D(k, n));
      AD[static_cast<std::size_t>(j * N + n)] = std::move(acc);
    }
  }
  using Mag = std::conditional_t<FieldTraits<T>::exact, Rational, Real>;
  Mag worst = Mag(0);
  for (long m = 0; m < N; ++m) {
    for (long n = 0; n < N; ++n) {
      T acc = detail::zero_of<T>();
      for (long j = 0; j <= m; ++j) acc += detail::scale_by(AD[static_cast<std::size_t>(j * N + n)], D(j, m));
      T diff = b[1 + m + n] - acc;
      Mag mag = abs(diff);
      if (mag > worst) worst = mag;
    }
  }
  return worst;
}

}  // namespace sdet
