#include <gtest/gtest.h>

#include "sdet/transforms.hpp"
#include "support.hpp"

using namespace sdet;
using testing_support::as_seq;
using testing_support::Gen;

namespace {

using RSeq = ScalarSeq<Rational>;

RSeq delta() { return RSeq(SeqKind::even, {{0, Rational(1)}}); }

RSeq geometric(long radius) {
  std::map<long, Rational> m;
  for (long n = 0; n <= radius; ++n) m[n] = Rational(1, 1L << n);
  return RSeq(SeqKind::even, m);
}

// Laurent polynomial (z + 1/z)^(n-1) (1 + z); b_n pairs a_m with the coefficient of z^m.
std::map<long, Rational> kernel(long n) {
  std::map<long, Rational> p{{0, Rational(1)}};
  for (long r = 0; r < n - 1; ++r) {
    std::map<long, Rational> q;
    for (const auto& [e, v] : p) {
      q[e + 1] += v;
      q[e - 1] += v;
    }
    p = q;
  }
  std::map<long, Rational> out;
  for (const auto& [e, v] : p) {
    out[e] += v;
    out[e + 1] += v;
  }
  return out;
}

Rational b_oracle(const RSeq& a, long n) {
  Rational s(0);
  for (const auto& [m, w] : kernel(n)) s += w * a[m];
  return s;
}

Rational c_oracle(const RSeq& a, long n) {
  Rational s(0);
  for (long k = -n + 1; k <= n; ++k) s += a[k];
  return s;
}

}  // namespace

TEST(AToB, Examples) {
  auto b = a_to_b(delta(), 6);
  std::vector<Rational> want = {1, 1, 2, 3, 6, 10};
  for (long n = 1; n <= 6; ++n) EXPECT_EQ(b[n], want[static_cast<std::size_t>(n - 1)]) << n;
  auto g = a_to_b(geometric(8), 3);
  EXPECT_EQ(g[1], Rational(3, 2));
  EXPECT_EQ(g[2], Rational(9, 4));
  EXPECT_EQ(g[3], Rational(33, 8));
  auto z = a_to_b(RSeq(SeqKind::even, {}), 5);
  for (long n = 1; n <= 5; ++n) EXPECT_EQ(z[n], Rational(0));
}

TEST(AToB, AgreesWithLaurentExpansion) {
  Gen gen(101);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = as_seq(SeqKind::even, gen.even_seq(gen.integer(0, 6)));
    auto b = a_to_b(a, 12);
    for (long n = 1; n <= 12; ++n) EXPECT_EQ(b[n], b_oracle(a, n)) << "trial " << trial << " n " << n;
  }
}

TEST(AToB, RejectsWrongSpecies) {
  EXPECT_THROW(a_to_b(RSeq(SeqKind::odd, {{1, Rational(1)}}), 3), SpeciesError);
  EXPECT_THROW(a_to_b(delta(), 0), Error);
}

TEST(AToC, Examples) {
  auto c = a_to_c(delta(), 5);
  EXPECT_EQ(c[0], Rational(0));
  for (long n = 1; n <= 5; ++n) {
    EXPECT_EQ(c[n], Rational(1));
    EXPECT_EQ(c[-n], Rational(-1));
  }
  auto g = a_to_c(geometric(8), 3);
  EXPECT_EQ(g[1], Rational(3, 2));
  EXPECT_EQ(g[2], Rational(9, 4));
  EXPECT_EQ(g[3], Rational(21, 8));
  EXPECT_EQ(g[0], Rational(0));
}

TEST(AToC, AgreesWithDirectSummation) {
  Gen gen(202);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = as_seq(SeqKind::even, gen.even_seq(gen.integer(0, 6)));
    auto c = a_to_c(a, 10);
    EXPECT_EQ(c[0], Rational(0));
    for (long n = 1; n <= 10; ++n) {
      EXPECT_EQ(c[n], c_oracle(a, n));
      EXPECT_EQ(c[-n], -c_oracle(a, n));
    }
  }
}

TEST(CToB, Examples) {
  std::map<long, Rational> ones;
  for (long n = 1; n <= 8; ++n) ones[n] = 1;
  auto b = c_to_b(RSeq(SeqKind::odd, ones), 5);
  std::vector<Rational> want = {1, 1, 2, 3, 6};
  for (long n = 1; n <= 5; ++n) EXPECT_EQ(b[n], want[static_cast<std::size_t>(n - 1)]);
  auto z = c_to_b(RSeq(SeqKind::odd, {}), 4);
  for (long n = 1; n <= 4; ++n) EXPECT_EQ(z[n], Rational(0));
  EXPECT_THROW(c_to_b(delta(), 3), SpeciesError);
}

TEST(Composition, CToBAfterAToCIsAToB) {
  Gen gen(303);
  for (int trial = 0; trial < 120; ++trial) {
    auto a = as_seq(SeqKind::even, gen.even_seq(gen.integer(0, 6)));
    auto lhs = c_to_b(a_to_c(a, 12), 12);
    auto rhs = a_to_b(a, 12);
    for (long n = 1; n <= 12; ++n) ASSERT_EQ(lhs[n], rhs[n]) << "trial " << trial << " n " << n;
  }
}

TEST(Inverse, BToCUndoesCToB) {
  Gen gen(404);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = as_seq(SeqKind::odd, gen.odd_seq(gen.integer(1, 8)));
    auto back = b_to_c(c_to_b(c, 10), 10);
    for (long n = -10; n <= 10; ++n) ASSERT_EQ(back[n], c[n]) << n;
  }
}

TEST(Inverse, RecoverAFromCRoundTrips) {
  Gen gen(505);
  for (int trial = 0; trial < 40; ++trial) {
    auto c = as_seq(SeqKind::odd, gen.odd_seq(gen.integer(1, 8)));
    auto a = recover_a_from_c(c, 12);
    EXPECT_EQ(a[0], c[1] / 2);
    EXPECT_EQ(a[1], c[1] / 2);
    auto again = a_to_c(a, 12);
    for (long n = -12; n <= 12; ++n) ASSERT_EQ(again[n], c[n]) << n;
  }
}

TEST(Linearity, AllTransforms) {
  Gen gen(606);
  for (int trial = 0; trial < 25; ++trial) {
    auto xm = gen.even_seq(5), ym = gen.even_seq(5);
    Rational alpha = gen.rational(), beta = gen.rational();
    std::map<long, Rational> zm;
    for (long n = -5; n <= 5; ++n) zm[n] = alpha * xm[n] + beta * ym[n];
    auto x = as_seq(SeqKind::even, xm), y = as_seq(SeqKind::even, ym), z = as_seq(SeqKind::even, zm);
    auto bx = a_to_b(x, 10), by = a_to_b(y, 10), bz = a_to_b(z, 10);
    auto cx = a_to_c(x, 10), cy = a_to_c(y, 10), cz = a_to_c(z, 10);
    auto dx = c_to_b(cx, 10), dy = c_to_b(cy, 10), dz = c_to_b(cz, 10);
    for (long n = 1; n <= 10; ++n) {
      EXPECT_EQ(bz[n], alpha * bx[n] + beta * by[n]);
      EXPECT_EQ(cz[n], alpha * cx[n] + beta * cy[n]);
      EXPECT_EQ(dz[n], alpha * dx[n] + beta * dy[n]);
    }
  }
}

TEST(BinomialD, Entries) {
  EXPECT_EQ(build_D(1)(0, 0), Rational(1));
  EXPECT_EQ(xi(2, 2), Rational(2));
  EXPECT_EQ(xi(3, 4), Rational(3));
  EXPECT_EQ(xi(4, 4), Rational(6));
  EXPECT_EQ(xi(3, 3), Rational(3));
  auto D = build_D(7);
  for (long j = 0; j < 7; ++j) {
    EXPECT_EQ(D(j, j), Rational(1));
    for (long n = 0; n < j; ++n) EXPECT_EQ(D(j, n), Rational(0));
  }
  EXPECT_THROW(build_D(0), Error);
}

TEST(Congruence, ExamplesAreExact) {
  EXPECT_EQ(congruence_check(delta(), 4), Rational(0));
  EXPECT_EQ(congruence_check(geometric(12), 5), Rational(0));
}

TEST(Congruence, InsufficientSupportRaises) {
  auto a = RSeq(SeqKind::even, {{0, Rational(1)}}, 3);
  EXPECT_THROW(congruence_check(a, 4), SupportError);
  EXPECT_NO_THROW(congruence_check(a, 2));
}

TEST(Congruence, RandomMatchesDirectMatrixProduct) {
  Gen gen(707);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = as_seq(SeqKind::even, gen.even_seq(gen.integer(0, 8)));
    long N = gen.integer(1, 6);
    EXPECT_EQ(congruence_check(a, N), Rational(0));
    // independent product D^T A D with D built from binomials here
    auto d = [](long j, long n) { return n >= j ? binomial(n, (n - j) / 2) : Rational(0); };
    for (long m = 0; m < N; ++m) {
      for (long n = 0; n < N; ++n) {
        Rational s(0);
        for (long j = 0; j < N; ++j)
          for (long k = 0; k < N; ++k) s += d(j, m) * (a[j - k] + a[j + k + 1]) * d(k, n);
        ASSERT_EQ(s, b_oracle(a, 1 + m + n));
      }
    }
  }
}
