#include <gtest/gtest.h>

#include "sdet/determinant.hpp"
#include "support.hpp"

using namespace sdet;
using testing_support::Gen;

namespace {

using RMat = StructuredMatrix<Rational>;

StructuredMatrix<Real> to_real(const RMat& M) {
  std::vector<Real> e;
  for (const auto& x : M.entries()) e.emplace_back(x);
  return {M.order(), e};
}

RMat skew_of(long n, const std::function<Rational(long, long)>& upper) {
  std::vector<Rational> e(static_cast<std::size_t>(n * n), Rational(0));
  for (long j = 0; j < n; ++j)
    for (long k = j + 1; k < n; ++k) {
      e[static_cast<std::size_t>(j * n + k)] = upper(j, k);
      e[static_cast<std::size_t>(k * n + j)] = -upper(j, k);
    }
  return {n, e, Structure::general, Transpose::skew};
}

double rel(const Real& x, const Rational& y) {
  if (y == 0) return abs(x).to_double();
  return (abs(x - Real(y)) / abs(Real(y))).to_double();
}

}  // namespace

TEST(Bareiss, Examples) {
  EXPECT_EQ(det_bareiss(identity_matrix<Rational>(3)).value, Rational(1));
  EXPECT_EQ(det_bareiss(RMat(2, {1, Rational(1, 2), Rational(1, 2), Rational(1, 3)})).value, Rational(1, 12));
  EXPECT_EQ(det_bareiss(RMat(2, {0, -1, 1, 0})).value, Rational(1));
  EXPECT_EQ(det_bareiss(RMat(3, {1, 2, 3, 2, 4, 6, 0, 1, 5})).value, Rational(0));
  EXPECT_EQ(det_bareiss(RMat(0, {})).value, Rational(1));
}

TEST(Bareiss, MatchesLeibnizExpansion) {
  Gen gen(21);
  for (int trial = 0; trial < 60; ++trial) {
    long n = gen.integer(1, 6);
    auto M = gen.square(n);
    ASSERT_EQ(det_bareiss(M).value, testing_support::leibniz_det(M)) << "trial " << trial;
  }
}

TEST(Lu, IdentityIsExactlyOne) {
  PrecisionScope ps(128);
  auto r = det_lu(identity_matrix<Real>(4), 128);
  EXPECT_EQ(r.value, Real(1));
  EXPECT_EQ(r.method, DetMethod::lu);
  EXPECT_THROW(det_lu(identity_matrix<Real>(2), 32), Error);
}

TEST(Lu, HankelMomentOfUnitWeight) {
  // b_n = r_n / pi with r_n = 2^{n-1} (1 - (-1)^n) / n, so det H_4 = det(r_{1+j+k}) / pi^4
  PrecisionScope ps(256);
  auto r = [](long n) { return n % 2 ? Rational(1L << n, n) : Rational(0); };
  std::vector<Rational> e;
  for (long j = 0; j < 4; ++j)
    for (long k = 0; k < 4; ++k) e.push_back(r(1 + j + k));
  Rational exact = det_bareiss(RMat(4, e)).value;
  Real want = Real(exact) / pow(pi(), 4);
  auto b = MomentSymbol::polynomial({QComplex(1)}, Weight::one);
  auto got = det_lu(hankel_moment<Real>(b, 4), 256).value;
  EXPECT_LT((abs(got - want) / abs(want)).to_double(), 1e-20);
}

TEST(Lu, AgreesWithBareissOnRandomMatrices) {
  PrecisionScope ps(256);
  Gen gen(22);
  for (int trial = 0; trial < 30; ++trial) {
    long n = gen.integer(1, 10);
    auto M = gen.square(n);
    Rational exact = det_bareiss(M).value;
    auto r = det_lu(to_real(M), 256);
    if (exact == 0) {
      EXPECT_LT(abs(r.value).to_double(), 1e-30);
      continue;
    }
    double err = rel(r.value, exact);
    EXPECT_LT(err, 1e-30) << "trial " << trial;
    // the reported agreement is honest: the true error is within that many digits
    EXPECT_GE(r.agreed_digits, 30.0);
    EXPECT_LT(err, std::pow(10.0, -r.agreed_digits + 2));
  }
}

TEST(Lu, DeterminantDispatch) {
  PrecisionScope ps(128);
  EXPECT_EQ(determinant(RMat(2, {2, 0, 0, 3})).method, DetMethod::bareiss);
  EXPECT_EQ(determinant(identity_matrix<Real>(3)).method, DetMethod::lu);
}

TEST(Pfaffian, Examples) {
  EXPECT_EQ(pfaffian(RMat(2, {0, -1, 1, 0})), Rational(-1));
  EXPECT_EQ(det_bareiss(RMat(2, {0, -1, 1, 0})).value, Rational(1));
  auto m = RMat(2, {0, Rational(-3, 2), Rational(3, 2), 0});
  EXPECT_EQ(pfaffian(m), Rational(-3, 2));
  EXPECT_EQ(pfaffian(m) * pfaffian(m), Rational(9, 4));
  auto block = skew_of(4, [](long j, long k) {
    if (j == 0 && k == 1) return Rational(5);
    if (j == 2 && k == 3) return Rational(-2, 7);
    return Rational(0);
  });
  EXPECT_EQ(pfaffian(block), Rational(-10, 7));
}

TEST(Pfaffian, Errors) {
  EXPECT_THROW(pfaffian(RMat(3, {0, 1, 2, -1, 0, 3, -2, -3, 0})), Error);
  EXPECT_THROW(pfaffian(RMat(2, {0, 1, 1, 0})), SymmetryError);
  EXPECT_THROW(pfaffian(RMat(2, {1, 1, -1, 0})), SymmetryError);
}

TEST(Pfaffian, FourByFourClosedForm) {
  Gen gen(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto M = gen.skew(4);
    Rational want = M(0, 1) * M(2, 3) - M(0, 2) * M(1, 3) + M(0, 3) * M(1, 2);
    EXPECT_EQ(pfaffian(M), want);
  }
}

TEST(Pfaffian, SquareIsDeterminant) {
  Gen gen(24);
  for (int trial = 0; trial < 60; ++trial) {
    long n = 2 * gen.integer(1, 5);
    auto M = gen.skew(n);
    Rational pf = pfaffian(M);
    ASSERT_EQ(pf * pf, det_bareiss(M).value) << "order " << n;
  }
}

TEST(Pfaffian, PermutationCovariance) {
  Gen gen(25);
  for (int trial = 0; trial < 40; ++trial) {
    long n = 2 * gen.integer(1, 4);
    auto M = gen.skew(n);
    auto p = gen.permutation(n);
    auto P = M.permuted(p);
    StructuredMatrix<Rational> Ps(n, P.entries(), Structure::general, Transpose::skew);
    EXPECT_EQ(det_bareiss(P).value, det_bareiss(M).value);
    EXPECT_EQ(pfaffian(Ps), Rational(testing_support::permutation_sign(p)) * pfaffian(M));
  }
}

TEST(Pfaffian, HighPrecisionMatchesExact) {
  PrecisionScope ps(256);
  Gen gen(26);
  for (int trial = 0; trial < 10; ++trial) {
    auto M = gen.skew(8);
    Rational exact = pfaffian(M);
    std::vector<Real> e;
    for (const auto& x : M.entries()) e.emplace_back(x);
    Real got = pfaffian(StructuredMatrix<Real>(8, e, Structure::general, Transpose::skew));
    EXPECT_LT(rel(got, exact), 1e-60);
  }
}
