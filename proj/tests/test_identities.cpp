#include <gtest/gtest.h>

#include "sdet/identities.hpp"
#include "support.hpp"

using namespace sdet;
using testing_support::Gen;

namespace {

FourierSymbol delta() { return FourierSymbol::constant(QComplex(1)); }

FourierSymbol geometric(long radius) {
  std::map<long, QComplex> m;
  for (long n = -radius; n <= radius; ++n) m[n] = QComplex(Rational(1, 1L << std::labs(n)));
  return FourierSymbol::coeffs(m, Symmetry::even);
}

FourierSymbol exp03cos() {
  FHDescriptor d;
  d.log_smooth = {{1, QComplex(Rational(3, 20))}, {-1, QComplex(Rational(3, 20))}};
  return FourierSymbol::fisher_hartwig(d);
}

const IdentityReport& find(const std::vector<IdentityReport>& reps, IdentityKind k) {
  for (const auto& r : reps)
    if (r.kind == k) return r;
  throw std::runtime_error("kind missing from verify_all");
}

// det of a small rational matrix given by an entry rule, by Leibniz expansion
Rational brute_det(long n, const std::function<Rational(long, long)>& f) {
  std::vector<Rational> e;
  for (long j = 0; j < n; ++j)
    for (long k = 0; k < n; ++k) e.push_back(f(j, k));
  return testing_support::leibniz_det(StructuredMatrix<Rational>(n, e));
}

}  // namespace

TEST(Kinds, NamesRoundTrip) {
  for (auto k : all_identity_kinds()) {
    auto back = identity_kind_from_string(to_string(k));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, k);
  }
  EXPECT_FALSE(identity_kind_from_string("NoSuchIdentity").has_value());
  EXPECT_EQ(all_identity_kinds().size(), 9u);
}

TEST(Verify, SkewSquareGeometricExample) {
  auto rep = verify(IdentityKind::skew_square, geometric(12), 1, Mode::exact_mode());
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.records[0].lhs, "9/4");
  EXPECT_EQ(rep.records[0].rhs, "9/4");
  EXPECT_EQ(rep.records[0].abs_resid, "0");
  EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(Verify, HankelCongruenceDelta) {
  auto rep = verify(IdentityKind::hankel_congruence, delta(), 6, Mode::exact_mode());
  ASSERT_EQ(rep.records.size(), 6u);
  for (const auto& r : rep.records) {
    EXPECT_EQ(r.abs_resid, "0") << r.N;
    EXPECT_EQ(r.mode, "exact");
    EXPECT_TRUE(r.pass);
  }
  // b = (1, 1, 2, ...): det [[1,1],[1,2]] = 1
  EXPECT_EQ(rep.records[1].rhs, "1");
}

TEST(Verify, QuarterWaveExample) {
  auto a = FourierSymbol::coeffs({{-2, QComplex(1)}, {0, QComplex(2)}, {2, QComplex(1)}}, Symmetry::even);
  auto rep = verify(IdentityKind::quarter_wave, a, std::vector<long>{3}, Mode::exact_mode());
  ASSERT_EQ(rep.records.size(), 1u);
  std::map<long, Rational> am{{-2, 1}, {0, 2}, {2, 1}}, dm{{-1, 1}, {0, 2}, {1, 1}};
  auto at = [](const std::map<long, Rational>& m, long n) { return m.count(n) ? m.at(n) : Rational(0); };
  Rational lhs = brute_det(3, [&](long j, long k) -> Rational { return at(am, j - k) + at(am, j + k + 1); });
  Rational rhs = brute_det(3, [&](long j, long k) { return at(dm, j - k); });
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(rep.records[0].lhs, lhs.get_str());
  EXPECT_EQ(rep.records[0].rhs, rhs.get_str());
  EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(VerifyAll, DeltaAllApplicablePass) {
  auto reps = verify_all(delta(), 6, Mode::exact_mode());
  EXPECT_EQ(reps.size(), all_identity_kinds().size());
  int applicable = 0;
  for (const auto& r : reps) {
    EXPECT_NE(r.verdict, Verdict::fail) << to_string(r.kind);
    if (r.verdict == Verdict::pass) {
      ++applicable;
      for (const auto& rec : r.records) {
        if (rec.mode == "exact") {
          EXPECT_EQ(rec.abs_resid, "0") << to_string(r.kind) << " N=" << rec.N;
        }
      }
    }
  }
  EXPECT_GE(applicable, 7);
}

TEST(VerifyAll, RandomEvenSequences) {
  Gen gen(31);
  for (int trial = 0; trial < 6; ++trial) {
    auto a = FourierSymbol::coeffs(testing_support::as_qcomplex(gen.even_seq(gen.integer(0, 6))), Symmetry::even);
    auto reps = verify_all(a, 5, Mode::exact_mode());
    for (auto k : {IdentityKind::hankel_congruence, IdentityKind::skew_square, IdentityKind::cseq_square}) {
      const auto& rep = find(reps, k);
      EXPECT_EQ(rep.verdict, Verdict::pass) << to_string(k) << " trial " << trial;
      for (const auto& r : rep.records) EXPECT_EQ(r.abs_resid, "0");
    }
  }
}

TEST(VerifyAll, RandomQuarterWaveAndParity) {
  Gen gen(32);
  for (int trial = 0; trial < 6; ++trial) {
    std::map<long, QComplex> m;
    for (const auto& [k, v] : gen.even_seq(gen.integer(0, 3))) m[2 * k] = QComplex(v);
    auto a = FourierSymbol::coeffs(m, Symmetry::even);
    for (auto k : {IdentityKind::quarter_wave, IdentityKind::parity_split_even}) {
      auto rep = verify(k, a, 5, Mode::exact_mode());
      EXPECT_EQ(rep.verdict, Verdict::pass) << to_string(k);
    }
  }
}

TEST(VerifyAll, OddInputOnlySequenceSquare) {
  Gen gen(33);
  auto c = FourierSymbol::coeffs(testing_support::as_qcomplex(gen.odd_seq(5)), Symmetry::odd);
  auto reps = verify_all(c, 4, Mode::exact_mode());
  for (const auto& r : reps) {
    if (r.kind == IdentityKind::cseq_square) {
      EXPECT_EQ(r.verdict, Verdict::pass);
    } else {
      EXPECT_EQ(r.verdict, Verdict::not_applicable) << to_string(r.kind);
      EXPECT_FALSE(r.notes.empty());
    }
  }
}

TEST(VerifyAll, OddSequenceSquareAgainstBruteForce) {
  Gen gen(34);
  for (int trial = 0; trial < 5; ++trial) {
    auto cm = gen.odd_seq(6);
    auto c = FourierSymbol::coeffs(testing_support::as_qcomplex(cm), Symmetry::odd);
    auto rep = verify(IdentityKind::cseq_square, c, std::vector<long>{2}, Mode::exact_mode());
    ASSERT_EQ(rep.records.size(), 1u);
    auto at = [&](long n) { return cm.count(n) ? cm.at(n) : Rational(0); };
    Rational lhs = brute_det(4, [&](long j, long k) { return at(j - k); });
    EXPECT_EQ(rep.records[0].lhs, lhs.get_str());
  }
}

TEST(Verify, ExplicitMomentsUseSequenceForm) {
  std::vector<QComplex> h;
  for (long n = 1; n <= 16; ++n) h.emplace_back(Rational(1, n));
  auto b = MomentSymbol::explicit_moments(h);
  auto rep = verify(IdentityKind::cseq_square, b, 4, Mode::exact_mode());
  EXPECT_EQ(rep.verdict, Verdict::pass);
  for (const auto& r : rep.records) EXPECT_EQ(r.abs_resid, "0");
}

TEST(Verify, SpeciesMismatchRaises) {
  EXPECT_THROW(verify(IdentityKind::quarter_wave, geometric(6), 3, Mode::exact_mode()), SpeciesError);
  EXPECT_THROW(verify(IdentityKind::hankel_congruence, FourierSymbol::chi(), 3, Mode::hp(128)), SpeciesError);
  auto reps = verify_all(geometric(6), 3, Mode::exact_mode());
  // verify_all feeds a(t^2) to the kinds that need a(-t) = a(t)
  const auto& qw = find(reps, IdentityKind::quarter_wave);
  EXPECT_EQ(qw.verdict, Verdict::pass);
  ASSERT_FALSE(qw.notes.empty());
  EXPECT_NE(qw.notes[0].find("a(t^2)"), std::string::npos);
  EXPECT_EQ(find(reps, IdentityKind::hankel_congruence).verdict, Verdict::pass);
}

TEST(HighPrecision, SmoothEvenSymbolAt256Bits) {
  for (auto k : {IdentityKind::th_vs_moment, IdentityKind::moment_to_toeplitz, IdentityKind::hankel_congruence,
                 IdentityKind::skew_square}) {
    auto rep = verify(k, exp03cos(), 6, Mode::hp(256));
    EXPECT_EQ(rep.verdict, Verdict::pass) << to_string(k);
    for (const auto& r : rep.records) {
      EXPECT_EQ(r.mode, "hp");
      EXPECT_EQ(r.bits, 256u);
      EXPECT_LT(r.rel, 1e-20) << to_string(k) << " N=" << r.N;
    }
  }
}

TEST(HighPrecision, PfaffianLinkOnMomentSkewSquare) {
  auto b = MomentSymbol::exp_polynomial({QComplex(0), QComplex(Rational(3, 10))}, Weight::one);
  auto rep = verify(IdentityKind::moment_skew_square, b, 5, Mode::hp(256));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  for (const auto& r : rep.records) {
    ASSERT_TRUE(r.pfaffian_rel.has_value());
    EXPECT_LT(*r.pfaffian_rel, 1e-20);
    EXPECT_LT(r.rel, 1e-20);
  }
}

TEST(HighPrecision, ParitySplitChi) {
  auto a = FourierSymbol::doubled(exp03cos());
  auto rep = verify(IdentityKind::parity_split_chi, a, 4, Mode::hp(256));
  EXPECT_EQ(rep.verdict, Verdict::pass);
  for (const auto& r : rep.records) EXPECT_LT(r.rel, 1e-20);
}

TEST(Report, JsonCarriesRecords) {
  auto rep = verify(IdentityKind::hankel_congruence, delta(), 2, Mode::exact_mode());
  auto j = to_json(rep);
  EXPECT_EQ(j["kind"], "HankelCongruence");
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["records"].size(), 2u);
}
