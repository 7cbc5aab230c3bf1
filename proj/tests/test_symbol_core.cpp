#include <gtest/gtest.h>

#include "sdet/symbol.hpp"
#include "sdet/symbol_json.hpp"
#include "support.hpp"

using namespace sdet;
using testing_support::gap;
using testing_support::simpson_coeff;
using testing_support::simpson_half;
using testing_support::to_std;
using cd = std::complex<double>;

namespace {

FourierSymbol one() { return FourierSymbol::constant(QComplex(1)); }

Real acc() { return default_accuracy(); }

FourierSymbol exp03cos() {
  FHDescriptor d;
  d.log_smooth = {{1, QComplex(Rational(3, 20))}, {-1, QComplex(Rational(3, 20))}};
  return FourierSymbol::fisher_hartwig(d);
}

}  // namespace

TEST(FourierCoeff, DeltaSequence) {
  EXPECT_EQ(fourier_coeff(one(), 0, acc()), Complex(1));
  EXPECT_TRUE(fourier_coeff(one(), 3, acc()).is_zero());
}

TEST(FourierCoeff, ChiFirstCoefficientMatchesQuadratureOfDefinition) {
  auto oracle = simpson_coeff([](double t) { return t < M_PI ? cd(0, 1) : cd(0, -1); }, 1, {M_PI});
  Complex c = fourier_coeff(FourierSymbol::chi(), 1, acc());
  EXPECT_NEAR(c.real().to_double(), 2 / M_PI, 1e-15);
  EXPECT_NEAR(std::abs(to_std(c) - oracle), 0.0, 1e-10);
}

TEST(FourierCoeff, JumpHalfZerothCoefficient) {
  auto oracle = simpson_coeff([](double t) { return std::exp(cd(0, 0.5 * (t - M_PI))); }, 0);
  Complex c = fourier_coeff(FourierSymbol::jump(QComplex(Rational(1, 2))), 0, acc());
  EXPECT_NEAR(c.real().to_double(), 2 / M_PI, 1e-15);
  EXPECT_NEAR(std::abs(to_std(c) - oracle), 0.0, 1e-10);
}

TEST(FourierCoeff, CoeffSeqQuadratureAgreesWithStoredValues) {
  testing_support::Gen gen(11);
  auto m = gen.even_seq(5);
  m[7] = Rational(1, 3);
  auto a = FourierSymbol::coeffs(testing_support::as_qcomplex(m));
  auto q = quadrature_fourier_coeffs(a, -16, 16, acc());
  for (long n = -16; n <= 16; ++n) {
    auto it = m.find(n);
    Complex want = it == m.end() ? Complex(0) : Complex(Real(it->second));
    EXPECT_LT(gap(q[static_cast<std::size_t>(n + 16)], want), 1e-30) << "n=" << n;
  }
}

TEST(FourierCoeff, ChiCoefficientsAgainstForcedQuadrature) {
  PrecisionScope ps(128);
  auto q = quadrature_fourier_coeffs(FourierSymbol::chi(), -9, 9, acc());
  for (long n = -9; n <= 9; ++n) {
    Complex closed = fourier_coeff(FourierSymbol::chi(), n, acc());
    EXPECT_LT(gap(q[static_cast<std::size_t>(n + 9)], closed), 1e-30) << "n=" << n;
    if (n % 2 == 0) {
      EXPECT_TRUE(closed.is_zero());
    }
  }
}

TEST(FourierCoeff, JumpCoefficientsAgainstForcedQuadrature) {
  std::vector<QComplex> betas = {QComplex(Rational(3, 10)), QComplex(Rational(-3, 10)),
                                 QComplex(Rational(0), Rational(1, 2))};
  for (const auto& beta : betas) {
    auto t = FourierSymbol::jump(beta);
    auto q = quadrature_fourier_coeffs(t, -6, 6, acc());
    for (long n = -6; n <= 6; ++n) {
      // sin(pi beta) / (pi (beta - n))
      Complex b = beta.to_complex();
      Complex want = detail::complex_sin(b * pi()) / ((b - Complex(n)) * pi());
      EXPECT_LT(gap(q[static_cast<std::size_t>(n + 6)], want), 1e-30);
      EXPECT_LT(gap(fourier_coeff(t, n, acc()), want), 1e-30);
    }
  }
}

TEST(FourierCoeff, FisherHartwigProductMatchesDoubleOracle) {
  FHDescriptor d;
  d.log_smooth = {{1, QComplex(Rational(1, 5))}, {-1, QComplex(Rational(1, 10))}};
  d.jumps = {{Angle::pi_times(Rational(1, 2)), QComplex(Rational(1, 4))}};
  auto a = FourierSymbol::fisher_hartwig(d);
  auto f = [](double t) {
    cd smooth = std::exp(0.2 * std::exp(cd(0, t)) + 0.1 * std::exp(cd(0, -t)));
    double phi = std::fmod(t - M_PI / 2 + 4 * M_PI, 2 * M_PI);
    return smooth * std::exp(cd(0, 0.25 * (phi - M_PI)));
  };
  for (long n = -3; n <= 3; ++n) {
    auto oracle = simpson_coeff(f, n, {M_PI / 2});
    EXPECT_LT(std::abs(to_std(fourier_coeff(a, n, acc())) - oracle), 1e-9) << n;
  }
}

TEST(Moment, ConstantWeightOne) {
  auto b = MomentSymbol::polynomial({QComplex(1)}, Weight::one);
  EXPECT_NEAR(moment(b, 1, acc()).real().to_double(), 2 / M_PI, 1e-15);
  EXPECT_LT(abs(moment(b, 2, acc())).to_double(), 1e-30);
  EXPECT_NEAR(moment(b, 3, acc()).real().to_double(), 8 / (3 * M_PI), 1e-15);
}

TEST(Moment, SqrtRatioFirstMomentIsOne) {
  auto b = MomentSymbol::polynomial({QComplex(1)}, Weight::sqrt_ratio);
  EXPECT_LT(gap(moment(b, 1, acc()), Complex(1)), 1e-30);
}

TEST(Moment, OddFactorWeightOne) {
  auto b = MomentSymbol::polynomial({QComplex(0), QComplex(1)}, Weight::one);
  EXPECT_LT(abs(moment(b, 1, acc())).to_double(), 1e-30);
}

TEST(Moment, ExpCosAgainstDoubleOracle) {
  auto b = MomentSymbol::exp_polynomial({QComplex(0), QComplex(Rational(3, 10))}, Weight::one);
  for (long n = 1; n <= 6; ++n) {
    auto oracle = simpson_half([n](double t) { return std::exp(0.3 * std::cos(t)) * std::sin(t) * std::pow(2 * std::cos(t), n - 1); });
    EXPECT_NEAR(moment(b, n, acc()).real().to_double(), oracle.real(), 1e-12) << n;
  }
}

TEST(Moment, NonIntegrableInputIsRejected) {
  // b(x) = 1/(1-x) has a non-integrable singularity at x = 1.
  auto g = [](const Real& t) { return Complex(Real(1) / (Real(1) - cos(t))); };
  auto b = MomentSymbol::from_angular(g, Weight::one, {}, Parity::none, "pole");
  EXPECT_THROW(moment(b, 1, acc()), IntegrabilityError);
}

TEST(Eval, Basics) {
  EXPECT_EQ(eval(one(), Real(0.7)), Complex(1));
  Complex up = eval(FourierSymbol::chi(), Real(0.5));
  Complex down = eval(FourierSymbol::chi(), Real(-0.5));
  EXPECT_LT(gap(up, Complex(Real(0), Real(1))), 1e-30);
  EXPECT_LT(gap(down, Complex(Real(0), Real(-1))), 1e-30);
  EXPECT_LT(gap(eval(FourierSymbol::jump(QComplex(Rational(1, 2))), pi()), Complex(1)), 1e-30);
}

TEST(Eval, JumpPointsRaise) {
  EXPECT_THROW(eval(FourierSymbol::chi(), Real(0)), JumpError);
  EXPECT_THROW(eval(FourierSymbol::chi(), pi()), JumpError);
  EXPECT_THROW(eval(FourierSymbol::jump(QComplex(Rational(1, 3))), Real(0)), JumpError);
  try {
    FHDescriptor d;
    d.jumps = {{Angle::pi_times(Rational(1, 2)), QComplex(Rational(1, 5))}};
    eval(FourierSymbol::fisher_hartwig(d), pi() / 2L);
    FAIL() << "expected a jump error";
  } catch (const JumpError& e) {
    EXPECT_NE(std::string(e.what()).find("jump"), std::string::npos);
  }
}

TEST(Eval, ChiFactorizesIntoHalfJumps) {
  auto f1 = FourierSymbol::product(
      {FourierSymbol::jump(QComplex(Rational(-1, 2))), FourierSymbol::jump(QComplex(Rational(1, 2)), Angle::pi_times(1))});
  auto f2 = FourierSymbol::product({FourierSymbol::constant(QComplex(-1)), FourierSymbol::jump(QComplex(Rational(1, 2))),
                                    FourierSymbol::jump(QComplex(Rational(-1, 2)), Angle::pi_times(1))});
  for (int k = 0; k < 32; ++k) {
    Real t = pi() * 2L * Real((2 * k + 1)) / Real(64) - pi();
    Complex c = eval(FourierSymbol::chi(), t);
    EXPECT_LT(gap(eval(f1, t), c), 1e-30) << k;
    EXPECT_LT(gap(eval(f2, t), c), 1e-30) << k;
  }
}

TEST(Symbols, DeclaredSymmetryIsChecked) {
  EXPECT_THROW(FourierSymbol::coeffs({{1, QComplex(1)}, {-1, QComplex(2)}}, Symmetry::even), SymmetryError);
  EXPECT_THROW(FourierSymbol::coeffs({{0, QComplex(1)}}, Symmetry::odd), SymmetryError);
  EXPECT_TRUE(is_even(exp03cos()));
  EXPECT_TRUE(is_odd(multiply_by_chi(exp03cos())));
}

TEST(Symbols, DescriptorValidation) {
  FHDescriptor d;
  d.jumps = {{Angle::pi_times(1), QComplex(Rational(1, 2))}};
  EXPECT_THROW(FourierSymbol::fisher_hartwig(d), Error);
  d.jumps = {{Angle::pi_times(1), QComplex(Rational(1, 5))}, {Angle::pi_times(1), QComplex(Rational(1, 7))}};
  EXPECT_THROW(FourierSymbol::fisher_hartwig(d), Error);
  d.jumps = {{Angle::pi_times(0), QComplex(Rational(1, 5))}};
  EXPECT_THROW(FourierSymbol::fisher_hartwig(d), Error);
}

TEST(HalveArgument, IndexHalving) {
  auto a = FourierSymbol::coeffs({{-2, QComplex(1)}, {0, QComplex(2)}, {2, QComplex(1)}}, Symmetry::even);
  auto d = exact_coefficients(halve_argument(a));
  EXPECT_EQ(d[-1], Rational(1));
  EXPECT_EQ(d[0], Rational(2));
  EXPECT_EQ(d[1], Rational(1));
  EXPECT_EQ(exact_coefficients(halve_argument(one()))[0], Rational(1));
}

TEST(HalveArgument, DoubledFisherHartwigUnwraps) {
  auto d0 = exp03cos();
  auto d = halve_argument(FourierSymbol::doubled(d0));
  for (long n = -3; n <= 3; ++n) {
    EXPECT_LT(gap(fourier_coeff(d, n, acc()), fourier_coeff(d0, n, acc())), 1e-30);
  }
}

TEST(HalveArgument, RejectsOddIndices) {
  auto a = FourierSymbol::coeffs({{-1, QComplex(1)}, {0, QComplex(2)}, {1, QComplex(1)}}, Symmetry::even);
  EXPECT_THROW(halve_argument(a), SymmetryError);
}

TEST(MultiplyByChi, Properties) {
  auto c = multiply_by_chi(one());
  EXPECT_LT(abs(fourier_coeff(c, 2, acc())).to_double(), 1e-30);
  auto a = exp03cos();
  auto ca = multiply_by_chi(a);
  Complex want = detail::i_times(eval(a, Real(1)));
  EXPECT_LT(gap(eval(ca, Real(1)), want), 1e-30);
  auto q = fourier_coeffs(ca, -8, 8, acc());
  for (long n = 1; n <= 8; ++n) {
    EXPECT_LT(gap(q[static_cast<std::size_t>(8 + n)], -q[static_cast<std::size_t>(8 - n)]), 1e-30) << n;
  }
}

TEST(ThToMoment, ConstantGivesSqrtRatio) {
  auto b = th_to_moment_symbol(one());
  EXPECT_EQ(b.weight(), Weight::sqrt_ratio);
  EXPECT_LT(gap(moment(b, 1, acc()), Complex(1)), 1e-30);
}

TEST(ThToMoment, OnePlusCosSmoothFactor) {
  auto a = FourierSymbol::coeffs({{-1, QComplex(Rational(1, 2))}, {0, QComplex(1)}, {1, QComplex(Rational(1, 2))}},
                                 Symmetry::even);
  auto b = th_to_moment_symbol(a);
  for (double x : {-0.9, -0.3, 0.0, 0.4, 0.8}) {
    Real th = acos(Real(x));
    EXPECT_NEAR(b.smooth_at_angle(th).real().to_double(), 1 + x, 1e-15);
  }
}

TEST(ThToMoment, MomentsEqualTransformOfCoefficients) {
  testing_support::Gen gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto m = gen.even_seq(4);
    auto a = FourierSymbol::coeffs(testing_support::as_qcomplex(m), Symmetry::even);
    auto b = th_to_moment_symbol(a);
    auto want = a_to_b(testing_support::as_seq(SeqKind::even, m), 8);
    auto got = moments(b, 8, acc());
    for (long n = 1; n <= 8; ++n) {
      EXPECT_LT(gap(got[static_cast<std::size_t>(n - 1)], Complex(Real(want[n]))), 1e-30) << n;
    }
  }
  EXPECT_THROW(th_to_moment_symbol(FourierSymbol::chi()), SymmetryError);
}

TEST(MomentToSkew, ConstantGivesChi) {
  auto b = MomentSymbol::polynomial({QComplex(1)}, Weight::one);
  auto c = moment_to_skew_symbol(b);
  EXPECT_LT(gap(fourier_coeff(c, 1, acc()), Complex(Real(2) / pi())), 1e-30);
  EXPECT_LT(abs(fourier_coeff(c, 0, acc())).to_double(), 1e-30);
  auto q = fourier_coeffs(c, -8, 8, acc());
  for (long n = 1; n <= 8; ++n) {
    EXPECT_LT(gap(q[static_cast<std::size_t>(8 + n)], -q[static_cast<std::size_t>(8 - n)]), 1e-30);
  }
}

TEST(MomentToSkew, SineIntegralOracle) {
  auto b = MomentSymbol::exp_polynomial({QComplex(0), QComplex(Rational(3, 10))}, Weight::one);
  auto c = moment_to_skew_symbol(b);
  for (long n = 1; n <= 4; ++n) {
    // c_n = (1/pi) int_0^pi b(cos t) sin(n t) dt, carried as i * sign on the circle
    auto oracle = simpson_half([n](double t) { return std::exp(0.3 * std::cos(t)) * std::sin(n * t); });
    Complex got = fourier_coeff(c, n, acc());
    EXPECT_NEAR(got.real().to_double(), oracle.real(), 1e-12) << n;
  }
}

TEST(MomentToSkew, RejectsNonIntegrable) {
  auto b = MomentSymbol::polynomial({QComplex(1)}, Weight::sqrt_ratio);
  EXPECT_THROW(moment_to_skew_symbol(b), IntegrabilityError);
}

TEST(MomentToHalfangle, Examples) {
  auto d1 = moment_to_halfangle(MomentSymbol::polynomial({QComplex(1)}, Weight::sqrt_ratio));
  EXPECT_LT(gap(fourier_coeff(d1, 0, acc()), Complex(1)), 1e-30);
  auto d = moment_to_halfangle(MomentSymbol::polynomial({QComplex(0), QComplex(0), QComplex(1)}, Weight::sqrt_ratio));
  EXPECT_LT(gap(fourier_coeff(d, -1, acc()), Complex(Real(1) / Real(4))), 1e-30);
  EXPECT_LT(gap(fourier_coeff(d, 0, acc()), Complex(Real(1) / Real(2))), 1e-30);
  EXPECT_LT(gap(fourier_coeff(d, 1, acc()), Complex(Real(1) / Real(4))), 1e-30);
  EXPECT_TRUE(is_even(d));
  EXPECT_THROW(moment_to_halfangle(MomentSymbol::polynomial({QComplex(0), QComplex(1)}, Weight::sqrt_ratio)),
               SymmetryError);
}

TEST(Json, ParsesEverySchemaKind) {
  auto a = fourier_symbol_from_json(Json::parse(R"({"kind":"coeffs","symmetry":"even","entries":[[0,1,0]]})"));
  EXPECT_EQ(exact_coefficients(a)[0], Rational(1));
  auto c = fourier_symbol_from_json(Json::parse(R"({"kind":"chi"})"));
  EXPECT_TRUE(is_odd(c));
  auto t = fourier_symbol_from_json(Json::parse(R"({"kind":"jump_t","beta":["1/2",0]})"));
  EXPECT_LT(gap(fourier_coeff(t, 0, acc()), Complex(Real(2) / pi())), 1e-30);
  auto fh = fourier_symbol_from_json(
      Json::parse(R"({"kind":"fh","log_smooth":[[1,0.15,0],[-1,0.15,0]],"jumps":[{"theta":"pi","beta":[0.2,0]}]})"));
  EXPECT_EQ(jump_points(fh).size(), 1u);
  auto p = fourier_symbol_from_json(Json::parse(R"({"kind":"product","factors":[{"kind":"chi"},{"kind":"coeffs","entries":[[0,2,0]]}]})"));
  EXPECT_LT(gap(fourier_coeff(p, 1, acc()), Complex(Real(4) / pi())), 1e-30);
  auto m = moment_symbol_from_json(Json::parse(R"({"kind":"coeffs","symmetry":"even","entries":[[0,1,0]],"weight":"sqrt_ratio"})"));
  EXPECT_LT(gap(moment(m, 1, acc()), Complex(1)), 1e-30);
}

TEST(Json, ErrorsCarryThePath) {
  try {
    fourier_symbol_from_json(Json::parse(R"({"kind":"fh","jumps":[{"theta":1,"beta":[0.1,0]},{"theta":2,"beta":[0.9,0]}]})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "/jumps/1");
  }
  try {
    fourier_symbol_from_json(Json::parse(R"({"kind":"product","factors":[{"kind":"chi"},{"kind":"nope"}]})"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "/factors/1/kind");
  }
  EXPECT_THROW(fourier_symbol_from_json(Json::parse(R"({"entries":[]})")), ConfigError);
}
