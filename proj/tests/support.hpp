#pragma once
// Shared generators and independent oracles for the test suites.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "sdet/determinant.hpp"
#include "sdet/matrix.hpp"
#include "sdet/scalar.hpp"
#include "sdet/symbol.hpp"

namespace testing_support {

using sdet::Rational;

/// Fixed-seed source of small rationals and integers.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : g_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g_); }

  /// p/q with |p| <= max_num, 1 <= q <= max_den; zero with probability about zero_pct/100.
  Rational rational(long max_num = 9, long max_den = 7, int zero_pct = 0) {
    if (zero_pct > 0 && integer(1, 100) <= zero_pct) return Rational(0);
    Rational q(integer(-max_num, max_num), integer(1, max_den));
    q.canonicalize();
    return q;
  }

  /// Even finite sequence a_{-n} = a_n, |n| <= support.
  std::map<long, Rational> even_seq(long support) {
    std::map<long, Rational> m;
    for (long n = 0; n <= support; ++n) {
      Rational v = rational(9, 7, 20);
      m[n] = v;
      m[-n] = v;
    }
    return m;
  }

  /// Odd finite sequence c_{-n} = -c_n, c_0 = 0.
  std::map<long, Rational> odd_seq(long support) {
    std::map<long, Rational> m;
    m[0] = 0;
    for (long n = 1; n <= support; ++n) {
      Rational v = rational(9, 7, 20);
      m[n] = v;
      m[-n] = -v;
    }
    return m;
  }

  /// Random skewsymmetric rational matrix.
  sdet::StructuredMatrix<Rational> skew(long n) {
    std::vector<Rational> e(static_cast<std::size_t>(n * n), Rational(0));
    for (long j = 0; j < n; ++j) {
      for (long k = j + 1; k < n; ++k) {
        Rational v = rational(9, 5, 10);
        e[static_cast<std::size_t>(j * n + k)] = v;
        e[static_cast<std::size_t>(k * n + j)] = -v;
      }
    }
    return {n, e, sdet::Structure::general, sdet::Transpose::skew};
  }

  sdet::StructuredMatrix<Rational> square(long n) {
    std::vector<Rational> e;
    for (long i = 0; i < n * n; ++i) e.push_back(rational(9, 5, 10));
    return {n, e};
  }

  std::vector<long> permutation(long n) {
    std::vector<long> p(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    std::shuffle(p.begin(), p.end(), g_);
    return p;
  }

  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

inline std::map<long, sdet::QComplex> as_qcomplex(const std::map<long, Rational>& m) {
  std::map<long, sdet::QComplex> out;
  for (const auto& [n, v] : m) out.emplace(n, sdet::QComplex(v));
  return out;
}

inline sdet::ScalarSeq<Rational> as_seq(sdet::SeqKind kind, const std::map<long, Rational>& m) {
  return sdet::ScalarSeq<Rational>(kind, m);
}

/// Sign of a permutation by cycle counting.
inline int permutation_sign(const std::vector<long>& p) {
  std::vector<bool> seen(p.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

/// Leibniz expansion; only for tiny orders.
inline Rational leibniz_det(const sdet::StructuredMatrix<Rational>& M) {
  long n = M.order();
  std::vector<long> p(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  Rational total(0);
  do {
    Rational term(permutation_sign(p));
    for (long i = 0; i < n; ++i) term *= M(i, p[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

/// Cofactor expansion in doubles for small complex matrices.
inline std::complex<double> cofactor_det(const std::vector<std::complex<double>>& m, long n) {
  if (n == 1) return m[0];
  std::complex<double> total = 0;
  for (long c = 0; c < n; ++c) {
    std::vector<std::complex<double>> minor;
    for (long r = 1; r < n; ++r) {
      for (long k = 0; k < n; ++k) {
        if (k != c) minor.push_back(m[static_cast<std::size_t>(r * n + k)]);
      }
    }
    double s = c % 2 == 0 ? 1.0 : -1.0;
    total += s * m[static_cast<std::size_t>(c)] * cofactor_det(minor, n - 1);
  }
  return total;
}

/**
 * (1/2pi) int_0^{2pi} f(theta) e^{-in theta} d theta by composite Simpson in double,
 * with panel edges at the given breakpoints. Accurate to roughly 1e-12 for piecewise
 * smooth f.
 */
inline std::complex<double> simpson_coeff(const std::function<std::complex<double>(double)>& f, long n,
                                          std::vector<double> breaks = {}, int per_panel = 4000) {
  const double two_pi = 2 * M_PI;
  breaks.push_back(0.0);
  breaks.push_back(two_pi);
  std::sort(breaks.begin(), breaks.end());
  std::complex<double> total = 0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double a = breaks[p], b = breaks[p + 1];
    if (b - a < 1e-14) continue;
    // shrink away from the breakpoints so piecewise functions are sampled on their own side
    double eps = 1e-13;
    a += eps;
    b -= eps;
    double h = (b - a) / per_panel;
    auto g = [&](double t) { return f(t) * std::exp(std::complex<double>(0, -static_cast<double>(n) * t)); };
    std::complex<double> s = g(a) + g(b);
    for (int i = 1; i < per_panel; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
    total += s * h / 3.0;
  }
  return total / two_pi;
}

/// (1/pi) int_0^pi f(theta) d theta by composite Simpson.
inline std::complex<double> simpson_half(const std::function<std::complex<double>(double)>& f, int panels = 20000) {
  double a = 0, b = M_PI, h = (b - a) / panels;
  std::complex<double> s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0 / M_PI;
}

inline std::complex<double> to_std(const sdet::Complex& z) { return {z.real().to_double(), z.imag().to_double()}; }

inline double gap(const sdet::Complex& x, const sdet::Complex& y) { return sdet::abs(x - y).to_double(); }

}  // namespace testing_support
