#pragma once
/**
 * @file matrix.hpp
 * @brief Dense structured matrices built from symbols and sequences, and the
 *        checkerboard rearrangement of T_{2N} for symbols with a vanishing parity class.
 */

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sdet/error.hpp"
#include "sdet/scalar.hpp"
#include "sdet/sequence.hpp"
#include "sdet/symbol.hpp"
#include "sdet/transforms.hpp"

namespace sdet {

enum class Structure { toeplitz, hankel, toeplitz_plus_hankel, hankel_moment, general };

inline const char* to_string(Structure s) {
  switch (s) {
    case Structure::toeplitz: return "toeplitz";
    case Structure::hankel: return "hankel";
    case Structure::toeplitz_plus_hankel: return "toeplitz_plus_hankel";
    case Structure::hankel_moment: return "hankel_moment";
    case Structure::general: return "general";
  }
  return "?";
}

/// Expected transpose relation checked at construction.
enum class Transpose { any, symmetric, skew };

template <class T>
class StructuredMatrix {
 public:
  StructuredMatrix() = default;

  StructuredMatrix(long order, std::vector<T> entries, Structure structure = Structure::general,
                   Transpose transpose = Transpose::any)
      : order_(order), entries_(std::move(entries)), structure_(structure), bits_(working_precision()) {
    if (order_ < 0 || static_cast<long>(entries_.size()) != order_ * order_) {
      throw Error("matrix entry count does not match order " + std::to_string(order_));
    }
    check_structure();
    check_transpose(transpose);
  }

  long order() const { return order_; }
  Structure structure() const { return structure_; }
  Field field() const { return FieldTraits<T>::field; }
  /// Working precision at construction (meaningless for the rational field).
  Bits bits() const { return bits_; }

  const T& operator()(long j, long k) const { return entries_[index(j, k)]; }
  const std::vector<T>& entries() const { return entries_; }

  StructuredMatrix<T> transposed() const {
    std::vector<T> e(entries_.size());
    for (long j = 0; j < order_; ++j) {
      for (long k = 0; k < order_; ++k) e[index(k, j)] = entries_[index(j, k)];
    }
    return StructuredMatrix<T>(order_, std::move(e), structure_);
  }

  /// Rows and columns permuted: result(i, j) = M(perm[i], perm[j]).
  StructuredMatrix<T> permuted(const std::vector<long>& perm) const {
    if (static_cast<long>(perm.size()) != order_) throw Error("permutation size mismatch");
    std::vector<T> e;
    e.reserve(entries_.size());
    for (long j = 0; j < order_; ++j) {
      for (long k = 0; k < order_; ++k) e.push_back(entries_[index(perm[j], perm[k])]);
    }
    return StructuredMatrix<T>(order_, std::move(e), Structure::general);
  }

 private:
  std::size_t index(long j, long k) const { return static_cast<std::size_t>(j * order_ + k); }

  void check_structure() const {
    for (long j = 1; j < order_; ++j) {
      for (long k = 1; k < order_; ++k) {
        bool ok = true;
        if (structure_ == Structure::toeplitz) ok = detail::nearly_equal((*this)(j, k), (*this)(j - 1, k - 1));
        if (structure_ == Structure::hankel || structure_ == Structure::hankel_moment) {
          ok = detail::nearly_equal((*this)(j, k - 1), (*this)(j - 1, k));
        }
        if (!ok) {
          throw Error(std::string("matrix tagged ") + to_string(structure_) + " violates its structure at (" +
                      std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
    }
  }

  void check_transpose(Transpose t) const {
    if (t == Transpose::any) return;
    for (long j = 0; j < order_; ++j) {
      for (long k = 0; k <= j; ++k) {
        const T& x = (*this)(j, k);
        T y = t == Transpose::symmetric ? (*this)(k, j) : T(-(*this)(k, j));
        if (!detail::nearly_equal(x, y)) {
          throw SymmetryError(std::string("matrix expected ") + (t == Transpose::symmetric ? "symmetric" : "skewsymmetric") +
                              " fails at (" + std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
    }
  }

  long order_ = 0;
  std::vector<T> entries_;
  Structure structure_ = Structure::general;
  Bits bits_ = 0;
};

namespace detail {

inline Transpose transpose_of(SeqKind k) {
  if (k == SeqKind::even) return Transpose::symmetric;
  if (k == SeqKind::odd) return Transpose::skew;
  return Transpose::any;
}

inline SeqKind kind_of(Symmetry s) {
  if (s == Symmetry::even) return SeqKind::even;
  if (s == Symmetry::odd) return SeqKind::odd;
  return SeqKind::general;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sequence-level builders

/// (s_{j-k})
template <class T>
StructuredMatrix<T> toeplitz(const ScalarSeq<T>& s, long N) {
  std::vector<T> e;
  e.reserve(static_cast<std::size_t>(N * N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k < N; ++k) e.push_back(s[j - k]);
  }
  return StructuredMatrix<T>(N, std::move(e), Structure::toeplitz, detail::transpose_of(s.kind()));
}

/// (s_{j+k+1})
template <class T>
StructuredMatrix<T> hankel(const ScalarSeq<T>& s, long N) {
  std::vector<T> e;
  e.reserve(static_cast<std::size_t>(N * N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k < N; ++k) e.push_back(s[j + k + 1]);
  }
  return StructuredMatrix<T>(N, std::move(e), Structure::hankel, Transpose::symmetric);
}

/// (b_{1+j+k}) from a one-sided moment sequence.
template <class T>
StructuredMatrix<T> hankel_moment(const ScalarSeq<T>& b, long N) {
  std::vector<T> e;
  e.reserve(static_cast<std::size_t>(N * N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k < N; ++k) e.push_back(b[1 + j + k]);
  }
  return StructuredMatrix<T>(N, std::move(e), Structure::hankel_moment, Transpose::symmetric);
}

/// (a_{j-k} + a_{j+k+1}) for even a.
template <class T>
StructuredMatrix<T> toeplitz_plus_hankel(const ScalarSeq<T>& a, long N) {
  if (a.kind() != SeqKind::even) throw SpeciesError("toeplitz_plus_hankel needs an even sequence");
  std::vector<T> e;
  e.reserve(static_cast<std::size_t>(N * N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k < N; ++k) e.push_back(a[j - k] + a[j + k + 1]);
  }
  return StructuredMatrix<T>(N, std::move(e), Structure::toeplitz_plus_hankel, Transpose::symmetric);
}

// ---------------------------------------------------------------------------
// Symbol-level builders

/// Coefficients a_n, |n| <= radius, in field T; quadrature at default_accuracy() for hp fields.
template <class T>
ScalarSeq<T> symbol_coefficients(const FourierSymbol& a, long radius) {
  if constexpr (FieldTraits<T>::exact) {
    return exact_coefficients(a);
  } else {
    ScalarSeq<Complex> s = coefficient_sequence(a, radius, default_accuracy());
    if constexpr (std::is_same_v<T, Complex>) {
      return s;
    } else {
      return s.template map<Real>([](const Complex& z) {
        if (!z.is_real() && abs(z.imag()) > abs(z.real()) * epsilon_bits(static_cast<long>(working_precision()) / 2)) {
          throw Error("hp_real field requested for a symbol with complex coefficients");
        }
        return z.real();
      });
    }
  }
}

namespace detail {

/**
 * Cosine series g(theta) = sum_k g_k e^{ik theta} (g_{-k} = g_k, rational) of the smooth
 * factor, when it is a rational trigonometric polynomial: an even "coeffs" source or a
 * real "poly" factor.
 */
inline std::optional<std::map<long, Rational>> rational_cosine_series(const MomentSymbol& b) {
  if (b.has_explicit_moments()) return std::nullopt;
  std::map<long, Rational> g;
  if (const auto* poly = b.polynomial_coeffs()) {
    // cos^k = 2^{-k} sum_j C(k, j) e^{i(k-2j) theta}
    for (long k = 0; k < static_cast<long>(poly->size()); ++k) {
      const QComplex& c = (*poly)[static_cast<std::size_t>(k)];
      if (!c.is_real()) return std::nullopt;
      if (c.re == 0) continue;
      Rational scale = c.re / Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(k));
      for (long j = 0; j <= k; ++j) g[k - 2 * j] += scale * binomial(k, j);
    }
    return g;
  }
  const FourierSymbol* src = b.source();
  if (!src) return std::nullopt;
  const auto* c = std::get_if<symbol_node::Coeffs>(&src->node());
  if (!c) return std::nullopt;
  for (const auto& [n, v] : c->entries) {
    if (!v.is_real()) return std::nullopt;
    auto it = c->entries.find(-n);
    if (it == c->entries.end() || it->second != v) return std::nullopt;
    g[n] = v.re;
  }
  return g;
}

/**
 * b_n = (1/pi) int_0^pi g(theta) (1 + cos theta) (2 cos theta)^{n-1} d theta, evaluated
 * exactly: with h = g (1 + cos theta), b_n = sum_j C(n-1, j) h_{n-1-2j}.
 */
inline std::map<long, Rational> exact_sqrt_ratio_moments(const std::map<long, Rational>& g, long count) {
  std::map<long, Rational> h;
  for (const auto& [k, v] : g) {
    h[k] += v;
    h[k + 1] += v / 2;
    h[k - 1] += v / 2;
  }
  auto at = [&](long k) {
    auto it = h.find(k);
    return it == h.end() ? Rational(0) : it->second;
  };
  std::map<long, Rational> out;
  for (long n = 1; n <= count; ++n) {
    Rational acc(0);
    for (long j = 0; j <= n - 1; ++j) acc += binomial(n - 1, j) * at(n - 1 - 2 * j);
    out.emplace(n, acc);
  }
  return out;
}

}  // namespace detail

/// True when moment_sequence<Rational> can produce b exactly.
inline bool has_exact_moments(const MomentSymbol& b) {
  if (b.has_explicit_moments()) {
    for (const auto& v : b.explicit_values()) {
      if (!v.is_real()) return false;
    }
    return true;
  }
  return b.weight() == Weight::sqrt_ratio && detail::rational_cosine_series(b).has_value();
}

/**
 * Moments b_1..b_count in field T. Exact fields accept rational explicit moments and
 * sqrt_ratio symbols whose smooth factor is a rational cosine polynomial.
 */
template <class T>
ScalarSeq<T> moment_sequence(const MomentSymbol& b, long count) {
  std::map<long, T> m;
  if constexpr (FieldTraits<T>::exact) {
    if (!b.has_explicit_moments()) {
      auto g = b.weight() == Weight::sqrt_ratio ? detail::rational_cosine_series(b) : std::nullopt;
      if (!g) {
        throw SpeciesError(
            "exact moments need rational explicit moments or a rational cosine polynomial with the sqrt_ratio weight");
      }
      for (auto& [n, v] : detail::exact_sqrt_ratio_moments(*g, count)) m.emplace(n, T(v));
      return ScalarSeq<T>(SeqKind::one_sided, m);
    }
    const auto& v = b.explicit_values();
    if (static_cast<long>(v.size()) < count) {
      throw SupportError("explicit moments cover b_1..b_" + std::to_string(v.size()) + ", need b_" +
                         std::to_string(count));
    }
    for (long n = 1; n <= count; ++n) m.emplace(n, FieldTraits<T>::from_qcomplex(v[n - 1]));
  } else {
    auto v = moments(b, count, default_accuracy());
    for (long n = 1; n <= count; ++n) {
      if constexpr (std::is_same_v<T, Complex>) {
        m.emplace(n, v[n - 1]);
      } else {
        m.emplace(n, v[n - 1].real());
      }
    }
  }
  return ScalarSeq<T>(SeqKind::one_sided, m);
}

template <class T>
StructuredMatrix<T> toeplitz(const FourierSymbol& a, long N) {
  return toeplitz(symbol_coefficients<T>(a, N - 1), N);
}

template <class T>
StructuredMatrix<T> hankel(const FourierSymbol& a, long N) {
  return hankel(symbol_coefficients<T>(a, 2 * N - 1), N);
}

template <class T>
StructuredMatrix<T> toeplitz_plus_hankel(const FourierSymbol& a, long N) {
  if (!is_even(a)) throw SpeciesError("toeplitz_plus_hankel needs an even symbol");
  ScalarSeq<T> s = symbol_coefficients<T>(a, 2 * N);
  if (s.kind() != SeqKind::even) {
    // Sampled-even symbol without a declared flag: rebuild with n >= 0.
    std::map<long, T> e;
    for (long n = 0; n <= 2 * N; ++n) e.emplace(n, s[n]);
    s = ScalarSeq<T>(SeqKind::even, e, 2 * N);
  }
  return toeplitz_plus_hankel(s, N);
}

template <class T>
StructuredMatrix<T> hankel_moment(const MomentSymbol& b, long N) {
  return hankel_moment(moment_sequence<T>(b, 2 * N - 1), N);
}

/// Reversal permutation W_N.
template <class T>
StructuredMatrix<T> flip(long N) {
  if (N < 1) throw Error("flip: N must be >= 1");
  std::vector<T> e(static_cast<std::size_t>(N * N), detail::zero_of<T>());
  for (long j = 0; j < N; ++j) e[static_cast<std::size_t>(j * N + (N - 1 - j))] = FieldTraits<T>::from_rational(1);
  return StructuredMatrix<T>(N, std::move(e), Structure::hankel);
}

template <class T>
StructuredMatrix<T> identity_matrix(long N) {
  std::vector<T> e(static_cast<std::size_t>(N * N), detail::zero_of<T>());
  for (long j = 0; j < N; ++j) e[static_cast<std::size_t>(j * N + j)] = FieldTraits<T>::from_rational(1);
  return StructuredMatrix<T>(N, std::move(e), Structure::toeplitz);
}

template <class T>
StructuredMatrix<T> multiply(const StructuredMatrix<T>& A, const StructuredMatrix<T>& B) {
  long N = A.order();
  if (B.order() != N) throw Error("multiply: order mismatch");
  std::vector<T> e;
  e.reserve(static_cast<std::size_t>(N * N));
  for (long j = 0; j < N; ++j) {
    for (long k = 0; k < N; ++k) {
      T acc = detail::zero_of<T>();
      for (long l = 0; l < N; ++l) acc += A(j, l) * B(l, k);
      e.push_back(std::move(acc));
    }
  }
  return StructuredMatrix<T>(N, std::move(e));
}

// ---------------------------------------------------------------------------
// Checkerboard split

enum class ParityClass { even_entries, odd_entries };

template <class T>
struct CheckerboardBlocks {
  StructuredMatrix<T> first;   // even_entries: rows/cols 0,2,4..; odd_entries: D1 = (c_{2(j-k)+1})
  StructuredMatrix<T> second;  // even_entries: rows/cols 1,3,5..; odd_entries: D2 = (c_{2(j-k)-1})
};

/**
 * Splits T_{2N} by row and column parity.
 *
 * even_entries: the symbol has only even coefficients, T_{2N} ~ diag(B0, B1).
 * odd_entries: only odd coefficients, T_{2N} ~ [[0, D2], [D1, 0]] and
 * det T_{2N} = (-1)^N det D1 det D2.
 */
template <class T>
CheckerboardBlocks<T> checkerboard_split(const StructuredMatrix<T>& M, ParityClass parity) {
  if (M.structure() != Structure::toeplitz) throw Error("checkerboard_split needs a Toeplitz matrix");
  if (M.order() % 2 != 0) throw Error("checkerboard_split needs even order");
  long N = M.order() / 2;
  // The vanishing class: entries with j - k odd (even_entries) or even (odd_entries).
  for (long j = 0; j < M.order(); ++j) {
    for (long k = 0; k < M.order(); ++k) {
      bool odd_diag = ((j - k) % 2 + 2) % 2 == 1;
      bool must_vanish = parity == ParityClass::even_entries ? odd_diag : !odd_diag;
      if (!must_vanish) continue;
      const T& v = M(j, k);
      bool zero;
      if constexpr (FieldTraits<T>::exact) {
        zero = FieldTraits<T>::is_zero(v);
      } else {
        Real scale;
        for (const auto& x : M.entries()) scale = max(scale, abs(x));
        zero = abs(v) <= scale * epsilon_bits(static_cast<long>(working_precision()) / 2);
      }
      if (!zero) {
        throw SymmetryError(std::string("checkerboard_split: coefficient class expected to vanish is nonzero at (") +
                            std::to_string(j) + "," + std::to_string(k) + ")");
      }
    }
  }
  auto block = [&](long row_off, long col_off) {
    std::vector<T> e;
    e.reserve(static_cast<std::size_t>(N * N));
    for (long j = 0; j < N; ++j) {
      for (long k = 0; k < N; ++k) e.push_back(M(2 * j + row_off, 2 * k + col_off));
    }
    return StructuredMatrix<T>(N, std::move(e), Structure::toeplitz);
  };
  if (parity == ParityClass::even_entries) return {block(0, 0), block(1, 1)};
  return {block(1, 0), block(0, 1)};
}

// ---------------------------------------------------------------------------
// JSON dump

template <class T>
std::string format_scalar_part(const T& x, int digits, bool imag) {
  if constexpr (std::is_same_v<T, Rational>) {
    return imag ? std::string("0") : x.get_str();
  } else if constexpr (std::is_same_v<T, Real>) {
    return imag ? std::string("0") : to_string(x, digits);
  } else {
    return to_string(imag ? x.imag() : x.real(), digits);
  }
}

/// {order, field, entries: [[re, im], ...]} in row-major order.
template <class T>
nlohmann::ordered_json to_json(const StructuredMatrix<T>& M, int digits = 0) {
  if (digits <= 0) digits = static_cast<int>(bits_to_digits(M.bits()));
  nlohmann::ordered_json j;
  j["order"] = M.order();
  j["field"] = to_string(M.field());
  if constexpr (!FieldTraits<T>::exact) j["bits"] = M.bits();
  j["structure"] = to_string(M.structure());
  auto arr = nlohmann::ordered_json::array();
  for (const auto& x : M.entries()) {
    arr.push_back(nlohmann::ordered_json::array({format_scalar_part(x, digits, false), format_scalar_part(x, digits, true)}));
  }
  j["entries"] = std::move(arr);
  return j;
}

}  // namespace sdet
