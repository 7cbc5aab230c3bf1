#pragma once
/**
 * @file asymptotics.hpp
 * @brief Fisher-Hartwig predictions (Barnes constants, Wiener-Hopf factors, exponents),
 *        least-squares fits of finite-N determinant data, and numerical studies of the
 *        half-jump ratio, the chi-ratio and the Hankel asymptotics.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sdet/determinant.hpp"
#include "sdet/error.hpp"
#include "sdet/identities.hpp"
#include "sdet/matrix.hpp"
#include "sdet/real.hpp"
#include "sdet/scalar.hpp"
#include "sdet/symbol.hpp"

namespace sdet {

// ---------------------------------------------------------------------------
// Barnes G at 1/2 and 3/2

struct BarnesConstants {
  Real G_half;
  Real G_three_half;
  Real pair_product;     // G(1/2) G(3/2)
  Real pair_product_sq;  // G(1/2)^2 G(3/2)^2
};

/// Glaisher-Kinkelin constant to 60 digits, used only as a cross-check.
inline constexpr const char* kGlaisherReference = "1.28242712910062263687534256886979172776768892732500119206374";

namespace barnes_detail {

/// zeta'(2) = -sum_{n>=2} log n / n^2 by Euler-Maclaurin from M on.
inline Real zeta_prime_2() {
  const Bits bits = working_precision();
  PrecisionScope ps(bits + 32);
  const long M = static_cast<long>(bits / 4 + 10);
  Real sum;
  for (long n = 2; n < M; ++n) {
    Real x(n);
    sum += log(x) / (x * x);
  }
  Real m(M), lm = log(m);
  sum += (lm + 1L) / m;                // tail integral
  sum += lm / (m * m) / 2L;            // f(M)/2
  Real two_pi = pi() * 2L;
  Real eps = epsilon_bits(static_cast<long>(bits) + 16);
  Real harmonic = Real(1);             // H_1
  Real prev_mag;
  for (long k = 1;; ++k) {
    // H_{2k}
    harmonic += Real(1) / Real(2 * k);
    if (k > 1) harmonic += Real(1) / Real(2 * k - 1);
    // B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2pi)^{2k}
    Real fact(1);
    for (long j = 2; j <= 2 * k; ++j) fact *= j;
    Real b2k = fact * zeta(static_cast<unsigned long>(2 * k)) * 2L / pow(two_pi, Real(2 * k));
    if (k % 2 == 0) b2k = -b2k;
    // B_{2k}/(2k)! f^{(2k-1)}(M) = -B_{2k} M^{-2k-1} (log M - H_{2k} + 1)
    Real term = -b2k * pow(m, Real(-2 * k - 1)) * (lm - harmonic + 1L);
    Real mag = abs(term);
    if (k > 2 && mag > prev_mag) throw Error("zeta'(2): Euler-Maclaurin tail diverged before converging");
    sum -= term;
    if (mag < eps) break;
    prev_mag = mag;
  }
  return -sum;
}

inline Real log_glaisher() {
  PrecisionScope ps(working_precision() + 16);
  Real p = pi();
  return (euler_gamma() + log(p * 2L)) / 12L - zeta_prime_2() / (p * p * 2L);
}

/// log G(1/2) from the closed form 2^{1/24} e^{1/8} pi^{-1/4} A^{-3/2}.
inline Real log_G_half_closed() {
  PrecisionScope ps(working_precision() + 16);
  return log(Real(2)) / 24L + Real(1) / Real(8) - log(pi()) / 4L - log_glaisher() * 3L / 2L;
}

/// log G(1+z) = (z/2) log 2pi - (z + (1+gamma) z^2)/2 + sum_{k>=2} (-1)^k zeta(k) z^{k+1}/(k+1), for z = +-1/2.
inline Real log_G_series(int sign) {
  const Bits bits = working_precision();
  PrecisionScope ps(bits + 16);
  Real z = Real(sign) / Real(2);
  Real out = z / 2L * log(pi() * 2L) - (z + (euler_gamma() + 1L) * z * z) / 2L;
  // (-1)^k z^{k+1} = (-1)^k sign^{k+1} 2^{-k-1}
  for (long k = 2; k <= static_cast<long>(bits) + 24; ++k) {
    Real term = zeta(static_cast<unsigned long>(k)) / (ldexp(Real(1), k + 1) * (k + 1));
    int s = (k % 2 ? -1 : 1) * (sign < 0 && k % 2 == 0 ? -1 : 1);
    if (s < 0) out -= term; else out += term;
  }
  return out;
}

inline BarnesConstants from_log_half(const Real& lg) {
  BarnesConstants c;
  c.G_half = exp(lg);
  c.G_three_half = sqrt(pi()) * c.G_half;
  c.pair_product = c.G_half * c.G_three_half;
  c.pair_product_sq = c.pair_product * c.pair_product;
  return c;
}

}  // namespace barnes_detail

/// G(1/2), G(3/2) through the Glaisher closed form, cached per precision.
inline BarnesConstants barnes_constants(Bits bits = 0) {
  if (bits == 0) bits = working_precision();
  if (bits < 64) throw Error("barnes_constants: precision must be at least 64 bits");
  static std::mutex mu;
  static std::map<Bits, BarnesConstants> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(bits);
    if (it != cache.end()) return it->second;
  }
  PrecisionScope ps(bits);
  Real lg;
  {
    PrecisionScope wide(bits + 16);
    lg = barnes_detail::log_G_half_closed();
  }
  BarnesConstants c = barnes_detail::from_log_half(lg);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(bits, c).first->second;
}

/// Same constants through the log-G Taylor series, independent of the Glaisher constant.
/// G(3/2) is summed separately at z = 1/2 rather than derived from G(1/2).
inline BarnesConstants barnes_constants_series(Bits bits = 0) {
  if (bits == 0) bits = working_precision();
  if (bits < 64) throw Error("barnes_constants: precision must be at least 64 bits");
  PrecisionScope ps(bits);
  Real lo, hi;
  {
    PrecisionScope wide(bits + 16);
    lo = barnes_detail::log_G_series(-1);
    hi = barnes_detail::log_G_series(1);
  }
  BarnesConstants c;
  c.G_half = exp(lo);
  c.G_three_half = exp(hi);
  c.pair_product = c.G_half * c.G_three_half;
  c.pair_product_sq = c.pair_product * c.pair_product;
  return c;
}

inline Real glaisher_constant(Bits bits = 0) {
  PrecisionScope ps(bits ? bits : working_precision());
  Real l;
  {
    PrecisionScope wide(working_precision() + 16);
    l = barnes_detail::log_glaisher();
  }
  return exp(l);
}

// ---------------------------------------------------------------------------
// Wiener-Hopf factors

struct WHFactors {
  Complex d0_plus;
  Complex d0_minus;
  Complex d_plus;
  Complex d_minus;
};

namespace asym_detail {

inline Complex qmul(const QComplex& q, const Complex& z) { return q.to_complex() * z; }

inline QComplex qsquare(const QComplex& b) { return {b.re * b.re - b.im * b.im, 2 * b.re * b.im}; }

/// Logarithms of the four factors at theta, on continuous branches.
struct WHLogs {
  Complex d0_plus, d0_minus, d_plus, d_minus;
};

inline WHLogs wh_logs(const FHDescriptor& desc, const Real& theta) {
  WHLogs out;
  for (const auto& [k, L] : desc.log_smooth) {
    if (k > 0) out.d0_plus += qmul(L, expi(theta * k));
    if (k < 0) out.d0_minus += qmul(L, expi(theta * k));
  }
  out.d_plus = out.d0_plus;
  out.d_minus = out.d0_minus;
  Real guard = epsilon_bits(static_cast<long>(working_precision()) - 8);
  for (std::size_t r = 0; r < desc.jumps.size(); ++r) {
    Real phi = theta - desc.jumps[r].theta.value();
    Real w = wrap_signed(phi);
    if (abs(w) <= guard) {
      throw JumpError("wh_factors: theta coincides with jump " + std::to_string(r));
    }
    // 1 - e^{+-i phi} has nonnegative real part, so the principal log is continuous here.
    Complex one(1);
    out.d_plus += qmul(desc.jumps[r].beta, log(one - expi(phi)));
    out.d_minus -= qmul(desc.jumps[r].beta, log(one - expi(-phi)));
  }
  return out;
}

}  // namespace asym_detail

/**
 * d_{0,+-}(e^{i theta}) = exp(sum_{k>=1} L_{+-k} e^{+-ik theta}),
 * d_+ = d_{0,+} prod (1 - e^{i(theta - theta_r)})^{beta_r},
 * d_- = d_{0,-} prod (1 - e^{-i(theta - theta_r)})^{-beta_r}.
 */
inline WHFactors wh_factors(const FHDescriptor& desc, const Real& theta) {
  desc.validate();
  auto l = asym_detail::wh_logs(desc, theta);
  return {exp(l.d0_plus), exp(l.d0_minus), exp(l.d_plus), exp(l.d_minus)};
}

// ---------------------------------------------------------------------------
// Predictions

struct FHPrediction {
  Complex F{1};                     // exp(L_0); real positive for real L_0
  QComplex omega_exact{0};          // -sum beta_r^2
  Complex omega;
  Complex ratio_coefficient;        // constant in front of the N-power, when known
  Real exponent_of_N;
  std::optional<Complex> E_estimated;
  std::string formula;
};

/// det T_N(d) ~ F^N N^Omega E, with E left unknown.
inline FHPrediction predict_szego_fh(const FHDescriptor& desc) {
  desc.validate();
  FHPrediction p;
  QComplex om{0};
  for (const auto& j : desc.jumps) {
    QComplex s = asym_detail::qsquare(j.beta);
    om.re -= s.re;
    om.im -= s.im;
  }
  p.omega_exact = om;
  p.omega = om.to_complex();
  auto it = desc.log_smooth.find(0);
  p.F = it == desc.log_smooth.end() ? Complex(1) : exp(it->second.to_complex());
  p.exponent_of_N = p.omega.real();
  p.formula = "F^N N^Omega E";
  return p;
}

/// det T_N(t_s d)/det T_N(d) ~ N^{-1/4} G(1/2)G(3/2) d_+(1)^s d_-(1)^{-s}, s = +-1/2.
inline FHPrediction predict_half_jump_ratio(const FHDescriptor& desc, const Rational& sign) {
  if (sign != Rational(1, 2) && sign != Rational(-1, 2)) {
    throw Error("predict_half_jump_ratio: sign must be -1/2 or 1/2");
  }
  desc.validate();
  for (std::size_t r = 0; r < desc.jumps.size(); ++r) {
    if (abs(wrap_signed(desc.jumps[r].theta.value())) <= epsilon_bits(static_cast<long>(working_precision()) - 8)) {
      throw JumpError("predict_half_jump_ratio: jump " + std::to_string(r) + " already sits at theta = 0");
    }
  }
  FHPrediction p = predict_szego_fh(desc);
  auto l = asym_detail::wh_logs(desc, Real(0));
  Complex expo = (l.d_plus - l.d_minus) * Real(sign);
  p.ratio_coefficient = exp(expo) * barnes_constants().pair_product;
  p.exponent_of_N = Real(-1) / Real(4);
  p.formula = sign < 0 ? "N^{-1/4} G(1/2)G(3/2) d_+(1)^{-1/2} d_-(1)^{1/2}"
                       : "N^{-1/4} G(1/2)G(3/2) d_+(1)^{1/2} d_-(1)^{-1/2}";
  return p;
}

/// det T_{2N}(chi a)/det T_{2N}(a) ~ N^{-1/2} G(1/2)^2 G(3/2)^2, N the block size.
inline FHPrediction predict_cor53() {
  FHPrediction p;
  p.ratio_coefficient = barnes_constants().pair_product_sq;
  p.exponent_of_N = Real(-1) / Real(2);
  p.formula = "N^{-1/2} G(1/2)^2 G(3/2)^2";
  return p;
}

/// E_1 = E_2 = 2^{-1/2} for a(1/t) = a(t).
inline std::pair<Real, Real> predict_conjecture_constants() {
  Real e = sqrt(Real(1) / Real(2));
  return {e, e};
}

// ---------------------------------------------------------------------------
// Fitting

struct FitParams {
  Real F;
  Real omega;
  Real E;
  std::vector<long> Ns;
  std::vector<double> residuals;  // log|value| - model, per point
};

struct AsymptoteFit {
  FitParams whole;
  FitParams tail;  // largest half of the N values (at least three)
};

struct RichardsonResult {
  Complex limit;
  double order = 0;      // p in s(N) = L + C N^{-p}
  bool estimated = false;
  std::string note;
};

namespace asym_detail {

inline FitParams fit_points(const std::vector<long>& Ns, const std::vector<Real>& logs) {
  // Normal equations for log|v| = N x0 + log N x1 + x2.
  const std::size_t n = Ns.size();
  Real A[3][3], rhs[3];
  for (std::size_t i = 0; i < n; ++i) {
    Real row[3] = {Real(Ns[i]), log(Real(Ns[i])), Real(1)};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) A[r][c] += row[r] * row[c];
      rhs[r] += row[r] * logs[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (abs(A[r][col]) > abs(A[piv][col])) piv = r;
    }
    if (A[piv][col].is_zero()) throw Error("fit_asymptote: singular normal equations");
    for (int c = 0; c < 3; ++c) std::swap(A[col][c], A[piv][c]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = col + 1; r < 3; ++r) {
      Real f = A[r][col] / A[col][col];
      for (int c = col; c < 3; ++c) A[r][c] -= f * A[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  Real x[3];
  for (int r = 2; r >= 0; --r) {
    Real acc = rhs[r];
    for (int c = r + 1; c < 3; ++c) acc -= A[r][c] * x[c];
    x[r] = acc / A[r][r];
  }
  FitParams p;
  p.F = exp(x[0]);
  p.omega = x[1];
  p.E = exp(x[2]);
  p.Ns = Ns;
  for (std::size_t i = 0; i < n; ++i) {
    Real model = x[0] * Ns[i] + x[1] * log(Real(Ns[i])) + x[2];
    p.residuals.push_back((logs[i] - model).to_double());
  }
  return p;
}

inline std::size_t distinct_count(std::vector<long> Ns) {
  std::sort(Ns.begin(), Ns.end());
  return static_cast<std::size_t>(std::unique(Ns.begin(), Ns.end()) - Ns.begin());
}

}  // namespace asym_detail

/// Least squares of log|v_N| against N log F + Omega log N + log E, over all points and over the tail.
inline AsymptoteFit fit_asymptote(const std::vector<long>& Ns, const std::vector<Complex>& values) {
  if (Ns.size() != values.size()) throw Error("fit_asymptote: N list and values differ in length");
  if (Ns.size() < 4) throw Error("fit_asymptote: need at least 4 data points");
  if (asym_detail::distinct_count(Ns) < 3) throw Error("fit_asymptote: need at least 3 distinct N");
  std::vector<std::pair<long, Real>> pts;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1) throw Error("fit_asymptote: N must be positive");
    if (values[i].is_zero()) throw Error("fit_asymptote: zero determinant at N = " + std::to_string(Ns[i]));
    pts.emplace_back(Ns[i], log(abs(values[i])));
  }
  std::stable_sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  auto split = [&](std::size_t from) {
    std::vector<long> n;
    std::vector<Real> l;
    for (std::size_t i = from; i < pts.size(); ++i) {
      n.push_back(pts[i].first);
      l.push_back(pts[i].second);
    }
    return std::make_pair(n, l);
  };
  AsymptoteFit fit;
  auto [wn, wl] = split(0);
  fit.whole = asym_detail::fit_points(wn, wl);
  std::size_t keep = std::max<std::size_t>(3, (pts.size() + 1) / 2);
  std::size_t from = pts.size() - keep;
  while (from > 0 && asym_detail::distinct_count(split(from).first) < 3) --from;
  auto [tn, tl] = split(from);
  fit.tail = asym_detail::fit_points(tn, tl);
  return fit;
}

/// Three-point Richardson on s(N) = L + C N^{-p} using the three largest N.
inline RichardsonResult richardson(const std::vector<long>& Ns, const std::vector<Complex>& values) {
  if (Ns.size() != values.size() || Ns.empty()) throw Error("richardson: need matching, non-empty data");
  std::vector<std::size_t> idx(Ns.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return Ns[a] < Ns[b]; });
  RichardsonResult r;
  r.limit = values[idx.back()];
  if (idx.size() < 3) {
    r.note = "fewer than three points; limit is the last value";
    return r;
  }
  std::size_t i1 = idx[idx.size() - 3], i2 = idx[idx.size() - 2], i3 = idx.back();
  if (Ns[i1] == Ns[i2] || Ns[i2] == Ns[i3]) {
    r.note = "repeated N; limit is the last value";
    return r;
  }
  Complex d12 = values[i1] - values[i2], d23 = values[i2] - values[i3];
  if (d23.is_zero() || abs(d23) <= abs(values[i3]) * epsilon_bits(static_cast<long>(working_precision()) - 8)) {
    r.note = "sequence already converged";
    return r;
  }
  double q = (abs(d12) / abs(d23)).to_double();
  double n1 = static_cast<double>(Ns[i1]), n2 = static_cast<double>(Ns[i2]), n3 = static_cast<double>(Ns[i3]);
  auto g = [&](double p) {
    return (std::pow(n1, -p) - std::pow(n2, -p)) / (std::pow(n2, -p) - std::pow(n3, -p)) - q;
  };
  double lo = 0.05, hi = 12.0;
  if (!(g(lo) < 0 && g(hi) > 0)) {
    r.order = 1.0;
    r.note = "convergence order not identifiable from the last three points; assumed 1";
  } else {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (g(mid) < 0 ? lo : hi) = mid;
    }
    r.order = 0.5 * (lo + hi);
    r.estimated = true;
  }
  Real p(r.order);
  Real w2 = pow(Real(Ns[i2]), -p), w3 = pow(Real(Ns[i3]), -p);
  r.limit = values[i3] - d23 * (w3 / (w2 - w3));
  return r;
}

// ---------------------------------------------------------------------------
// Studies

enum class StudyKind { prop52_ratio, cor53, cor54, cor56, conjecture_sym };

inline const char* to_string(StudyKind k) {
  switch (k) {
    case StudyKind::prop52_ratio: return "prop52_ratio";
    case StudyKind::cor53: return "cor53";
    case StudyKind::cor54: return "cor54";
    case StudyKind::cor56: return "cor56";
    case StudyKind::conjecture_sym: return "conjecture_sym";
  }
  return "?";
}

inline StudyKind study_kind_from_string(const std::string& s) {
  for (auto k : {StudyKind::prop52_ratio, StudyKind::cor53, StudyKind::cor54, StudyKind::cor56,
                 StudyKind::conjecture_sym}) {
    if (s == to_string(k)) return k;
  }
  throw Error("unknown study kind '" + s + "'");
}

struct StudyOptions {
  Bits bits = 0;                     // 0: automatic
  Rational sign{-1, 2};              // prop52_ratio only
  double extrapolated_tolerance = 0.01;
  double raw_tolerance = 0.10;
  double exponent_tolerance = 0.05;  // cor54/cor56 N-exponent check
  double successive_tolerance = 0.05;
};

struct StudyCheck {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
};

struct AsymptoticsReport {
  StudyKind kind = StudyKind::cor53;
  std::vector<long> Ns;
  std::vector<Complex> det_values;    // numerator determinants
  std::vector<Complex> denominators;  // ratio studies with a nontrivial denominator
  std::vector<Complex> values;        // studied quantity: ratio or determinant
  std::vector<Complex> compensated;   // values divided by the predicted N-dependence
  std::string compensation;
  FHPrediction prediction;
  std::optional<AsymptoteFit> fitted;
  RichardsonResult extrapolation;
  std::vector<StudyCheck> checks;
  std::string verdict;                // pass, fail or informational
  bool conjecture = false;
  double guaranteed_digits = 0;
  Bits bits = 0;
  std::vector<std::string> notes;

  bool passed() const { return verdict == "pass"; }
};

namespace asym_detail {

/// Fisher-Hartwig descriptor behind a symbol: an "fh" node, or the constant 1.
inline FHDescriptor descriptor_of(const FourierSymbol& s, const char* who) {
  if (const auto* fh = std::get_if<symbol_node::FH>(&s.node())) return fh->desc;
  if (const auto* c = std::get_if<symbol_node::Coeffs>(&s.node())) {
    if (c->entries.size() == 1 && c->entries.count(0) && c->entries.at(0) == QComplex(1)) return {};
  }
  throw SpeciesError(std::string(who) + ": input must be a Fisher-Hartwig descriptor (kind \"fh\")");
}

inline FourierSymbol symbol_of(const FHDescriptor& d) {
  if (d.log_smooth.empty() && d.jumps.empty()) return FourierSymbol::constant(QComplex(1));
  return FourierSymbol::fisher_hartwig(d);
}

inline bool trivial(const FHDescriptor& d) { return d.log_smooth.empty() && d.jumps.empty(); }

/// Ratios of same-parity determinants of real symmetric matrices are real; keep only the real part.
inline Complex drop_imag(const Complex& z, const std::string& what) {
  if (abs(z.imag()) > abs(z) * Real(1e-10)) {
    throw AccuracyError(what + ": imaginary part " + to_string(z.imag(), 6) + " is not negligible",
                        abs(z.imag()).to_double());
  }
  return Complex(z.real());
}

inline Complex det_value(const StructuredMatrix<Complex>& M, Bits bits, double& digits) {
  auto r = det_lu(M, bits);
  digits = std::min(digits, r.agreed_digits);
  return r.value;
}

inline Real npow(long N, const Real& e) { return pow(Real(N), e); }

inline Complex npow(long N, const Complex& e) {
  return exp(e * log(Real(N)));
}

inline Complex cpow_n(const Complex& F, long N) {
  return exp(log(F) * Real(N));
}

inline double rel_gap(const Complex& x, const Complex& ref) {
  return (abs(x - ref) / abs(ref)).to_double();
}

/// Local exponent of |c(N)| between the last two N values.
inline double local_exponent(const std::vector<long>& Ns, const std::vector<Complex>& c) {
  std::size_t n = Ns.size();
  Real num = log(abs(c[n - 1])) - log(abs(c[n - 2]));
  Real den = log(Real(Ns[n - 1])) - log(Real(Ns[n - 2]));
  return (num / den).to_double();
}

inline void add_check(AsymptoticsReport& r, std::string name, double value, double threshold) {
  r.checks.push_back({std::move(name), value, threshold, value <= threshold});
}

}  // namespace asym_detail

/**
 * Finite-N study of one asymptotic law.
 *
 * prop52_ratio, cor53, cor54, cor56 take a Fisher-Hartwig descriptor (an "fh" symbol, or
 * the constant 1); conjecture_sym takes any even symbol. N values must be distinct and
 * positive; they are processed in increasing order.
 */
inline AsymptoticsReport study(StudyKind kind, const FourierSymbol& input, std::vector<long> Ns,
                               const StudyOptions& opt = {}) {
  using namespace asym_detail;
  if (Ns.empty()) throw Error("study: empty N list");
  std::sort(Ns.begin(), Ns.end());
  if (Ns.front() < 1) throw Error("study: N must be positive");
  if (std::adjacent_find(Ns.begin(), Ns.end()) != Ns.end()) throw Error("study: repeated N");
  const long n_max = Ns.back();
  const bool hankel_kind = kind == StudyKind::cor54 || kind == StudyKind::cor56;
  Bits bits = opt.bits;
  if (bits == 0) bits = hankel_kind ? auto_bits(n_max) : std::max<Bits>(default_bits(), 4 * n_max);
  if (bits < 64) throw Error("study: precision must be at least 64 bits");
  PrecisionScope ps(bits);

  AsymptoticsReport rep;
  rep.kind = kind;
  rep.Ns = Ns;
  rep.bits = bits;
  rep.guaranteed_digits = bits_to_digits(bits);
  double& digits = rep.guaranteed_digits;

  switch (kind) {
    case StudyKind::prop52_ratio: {
      FHDescriptor d = descriptor_of(input, "prop52_ratio");
      rep.prediction = predict_half_jump_ratio(d, opt.sign);
      FourierSymbol ds = symbol_of(d);
      FourierSymbol num = trivial(d) ? FourierSymbol::jump(opt.sign)
                                     : FourierSymbol::product({FourierSymbol::jump(opt.sign), ds});
      auto cn = symbol_coefficients<Complex>(num, n_max - 1);
      std::optional<ScalarSeq<Complex>> cd;
      if (!trivial(d)) cd = symbol_coefficients<Complex>(ds, n_max - 1);
      for (long N : Ns) {
        Complex top = det_value(toeplitz(cn, N), bits, digits);
        Complex ratio = top;
        if (cd) {
          Complex bottom = det_value(toeplitz(*cd, N), bits, digits);
          rep.denominators.push_back(bottom);
          ratio = top / bottom;
        }
        rep.det_values.push_back(top);
        rep.values.push_back(ratio);
        rep.compensated.push_back(ratio * npow(N, Real(1) / Real(4)));
      }
      rep.compensation = "N^{1/4} det T_N(t_s d)/det T_N(d)";
      break;
    }
    case StudyKind::cor53:
    case StudyKind::conjecture_sym: {
      FourierSymbol a = input;
      if (kind == StudyKind::cor53) {
        a = FourierSymbol::doubled(symbol_of(descriptor_of(input, "cor53")));
      } else {
        if (!is_even(a)) throw SpeciesError("conjecture_sym: symbol must satisfy a(1/t) = a(t)");
        rep.conjecture = true;
      }
      rep.prediction = predict_cor53();
      auto ca = symbol_coefficients<Complex>(a, 2 * n_max - 1);
      auto cx = symbol_coefficients<Complex>(multiply_by_chi(a), 2 * n_max - 1);
      for (long N : Ns) {
        Complex top = det_value(toeplitz(cx, 2 * N), bits, digits);
        Complex bottom = det_value(toeplitz(ca, 2 * N), bits, digits);
        Complex ratio = drop_imag(top / bottom, "chi ratio at N = " + std::to_string(N));
        rep.det_values.push_back(top);
        rep.denominators.push_back(bottom);
        rep.values.push_back(ratio);
        rep.compensated.push_back(ratio * npow(N, Real(1) / Real(2)));
      }
      rep.compensation = "N^{1/2} det T_{2N}(chi a)/det T_{2N}(a)";
      if (kind == StudyKind::conjecture_sym) {
        auto [e1, e2] = predict_conjecture_constants();
        rep.notes.push_back("CONJECTURE: (2N)^{-1/2} G(1/2)^2 G(3/2)^2 (E_1 + E_2) with E_1 = E_2 = " +
                            to_string(e1, 12) + "; unproved, informational only");
        (void)e2;
      }
      break;
    }
    case StudyKind::cor54:
    case StudyKind::cor56: {
      const bool c54 = kind == StudyKind::cor54;
      FHDescriptor d = descriptor_of(input, to_string(kind));
      FourierSymbol ds = symbol_of(d);
      if (!is_even(ds)) {
        throw SpeciesError(std::string(to_string(kind)) + ": d must be even so that b (resp. b_0) is even");
      }
      rep.prediction = predict_szego_fh(d);
      if (c54) {
        rep.prediction.ratio_coefficient = barnes_constants().pair_product;
        rep.prediction.exponent_of_N = rep.prediction.omega.real() - Real(1) / Real(4);
        rep.prediction.formula = "F^N N^{Omega - 1/4} G(1/2)G(3/2) E";
      } else {
        rep.prediction.ratio_coefficient = Complex(1);
        rep.prediction.formula = "F^N N^Omega E";
      }
      MomentSymbol b = MomentSymbol::from_fourier(FourierSymbol::doubled(ds), c54 ? Weight::one : Weight::sqrt_ratio);
      auto mom = moment_sequence<Complex>(b, 2 * n_max - 1);
      Complex expo = c54 ? rep.prediction.omega - Complex(Real(1) / Real(4)) : rep.prediction.omega;
      for (long N : Ns) {
        Complex det = det_value(hankel_moment(mom, N), bits, digits);
        if (abs(det.imag()) <= abs(det) * Real(1e-10)) det = Complex(det.real());
        rep.det_values.push_back(det);
        rep.values.push_back(det);
        Complex scale = cpow_n(rep.prediction.F, N) * npow(N, expo) * rep.prediction.ratio_coefficient;
        rep.compensated.push_back(det / scale);
      }
      rep.compensation = c54 ? "det H_N[b] / (F^N N^{Omega-1/4} G(1/2)G(3/2))" : "det H_N[b] / (F^N N^Omega)";
      break;
    }
  }

  try {
    rep.fitted = fit_asymptote(rep.Ns, rep.values);
  } catch (const Error& e) {
    rep.notes.push_back(std::string("no fit: ") + e.what());
  }
  rep.extrapolation = richardson(rep.Ns, rep.compensated);
  if (!rep.extrapolation.note.empty()) rep.notes.push_back("extrapolation: " + rep.extrapolation.note);

  switch (kind) {
    case StudyKind::prop52_ratio:
    case StudyKind::cor53:
    case StudyKind::conjecture_sym: {
      const Complex& want = rep.prediction.ratio_coefficient;
      add_check(rep, "extrapolated_rel_gap", rel_gap(rep.extrapolation.limit, want), opt.extrapolated_tolerance);
      add_check(rep, "raw_rel_gap", rel_gap(rep.compensated.back(), want), opt.raw_tolerance);
      break;
    }
    case StudyKind::cor54:
    case StudyKind::cor56: {
      rep.prediction.E_estimated = rep.extrapolation.limit;
      if (rep.Ns.size() >= 2) {
        double lead = (kind == StudyKind::cor54 ? rep.prediction.exponent_of_N : rep.prediction.omega.real()).to_double();
        // exponent of det / F^N between the two largest N
        std::vector<Complex> stripped;
        for (std::size_t i = 0; i < rep.Ns.size(); ++i) {
          stripped.push_back(rep.values[i] / cpow_n(rep.prediction.F, rep.Ns[i]));
        }
        add_check(rep, "exponent_gap", std::fabs(local_exponent(rep.Ns, stripped) - lead), opt.exponent_tolerance);
        std::size_t n = rep.compensated.size();
        add_check(rep, "successive_ratio_gap", rel_gap(rep.compensated[n - 1], rep.compensated[n - 2]),
                  opt.successive_tolerance);
      } else {
        rep.notes.push_back("exponent checks need at least two N values");
      }
      if (kind == StudyKind::cor56 && trivial(descriptor_of(input, "cor56"))) {
        double worst = 0;
        for (const auto& v : rep.values) worst = std::max(worst, abs(v - Complex(1)).to_double());
        add_check(rep, "unit_determinant_gap", worst, 1e-20);
      }
      break;
    }
  }
  bool ok = !rep.checks.empty();
  for (const auto& c : rep.checks) ok = ok && c.pass;
  rep.verdict = rep.conjecture ? "informational" : (ok ? "pass" : "fail");
  return rep;
}

// ---------------------------------------------------------------------------
// Output

namespace asym_detail {

inline int out_digits(const AsymptoticsReport& r) {
  return std::clamp(static_cast<int>(r.guaranteed_digits), 6, 30);
}

inline nlohmann::ordered_json complex_json(const Complex& z, int digits) {
  Real cut = abs(z) * pow(Real(10), Real(-digits));
  if (abs(z.imag()) <= cut) return to_string(z.real(), digits);
  return nlohmann::ordered_json::array({to_string(z.real(), digits), to_string(z.imag(), digits)});
}

inline std::string complex_csv(const Complex& z, int digits) {
  Real cut = abs(z) * pow(Real(10), Real(-digits));
  if (abs(z.imag()) <= cut) return to_string(z.real(), digits);
  return to_string(z.real(), digits) + (z.imag().sign() < 0 ? "" : "+") + to_string(z.imag(), digits) + "i";
}

inline nlohmann::ordered_json fit_json(const FitParams& p) {
  nlohmann::ordered_json j;
  j["N"] = p.Ns;
  j["F"] = to_string(p.F, 12);
  j["Omega"] = to_string(p.omega, 12);
  j["E"] = to_string(p.E, 12);
  auto res = nlohmann::ordered_json::array();
  for (double r : p.residuals) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << r;
    res.push_back(os.str());
  }
  j["residuals"] = res;
  return j;
}

inline std::string qcomplex_string(const QComplex& q) {
  std::string s = q.re.get_str();
  if (q.im != 0) s += (q.im < 0 ? "" : "+") + q.im.get_str() + "i";
  return s;
}

}  // namespace asym_detail

inline nlohmann::ordered_json to_json(const AsymptoticsReport& r) {
  using namespace asym_detail;
  const int dg = out_digits(r);
  nlohmann::ordered_json j;
  j["kind"] = to_string(r.kind);
  if (r.conjecture) j["label"] = "CONJECTURE";
  j["N_list"] = r.Ns;
  j["bits"] = r.bits;
  j["guaranteed_digits"] = dg;
  auto arr = [&](const std::vector<Complex>& v) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& z : v) a.push_back(complex_json(z, dg));
    return a;
  };
  j["det_values"] = arr(r.det_values);
  if (!r.denominators.empty()) j["denominators"] = arr(r.denominators);
  j["values"] = arr(r.values);
  j["compensation"] = r.compensation;
  j["compensated_values"] = arr(r.compensated);
  nlohmann::ordered_json p;
  p["formula"] = r.prediction.formula;
  p["F"] = complex_json(r.prediction.F, dg);
  p["Omega"] = qcomplex_string(r.prediction.omega_exact);
  p["exponent_of_N"] = to_string(r.prediction.exponent_of_N, 12);
  p["ratio_coefficient"] = complex_json(r.prediction.ratio_coefficient, dg);
  if (r.prediction.E_estimated) p["E_estimated"] = complex_json(*r.prediction.E_estimated, 12);
  j["prediction"] = p;
  if (r.fitted) {
    j["fitted"] = {{"whole", fit_json(r.fitted->whole)}, {"tail", fit_json(r.fitted->tail)}};
  } else {
    j["fitted"] = nullptr;
  }
  j["extrapolated_limit"] = complex_json(r.extrapolation.limit, 12);
  if (r.extrapolation.estimated) {
    std::ostringstream os;
    os.precision(4);
    os << r.extrapolation.order;
    j["extrapolation_order"] = os.str();
  }
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    std::ostringstream v, t;
    v.precision(4);
    t.precision(4);
    v << std::scientific << c.value;
    t << std::scientific << c.threshold;
    checks.push_back({{"name", c.name}, {"value", v.str()}, {"threshold", t.str()}, {"pass", c.pass}});
  }
  j["checks"] = checks;
  j["notes"] = r.notes;
  j["verdict"] = r.verdict;
  return j;
}

inline std::string to_csv(const AsymptoticsReport& r) {
  using namespace asym_detail;
  const int dg = out_digits(r);
  std::ostringstream os;
  os << "N,det,value,compensated\n";
  for (std::size_t i = 0; i < r.Ns.size(); ++i) {
    os << r.Ns[i] << ',' << complex_csv(r.det_values[i], dg) << ',' << complex_csv(r.values[i], dg) << ','
       << complex_csv(r.compensated[i], dg) << '\n';
  }
  return os.str();
}

}  // namespace sdet
