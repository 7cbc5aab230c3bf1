#pragma once
/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre rules at arbitrary precision and the adaptive refinement loop
 *        shared by Fourier-coefficient and moment computations.
 *
 * Integrals are computed for a whole batch of functionals at once: the caller supplies
 * an estimator that turns a node set into a vector of estimates plus an L1-type scale
 * for each entry. Node sets are refined (more nodes per panel, then more subpanels)
 * until two successive estimates agree to `tol * scale` for every entry.
 */

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "sdet/error.hpp"
#include "sdet/real.hpp"

namespace sdet {

struct GaussRule {
  std::vector<Real> nodes;    // on [-1, 1], ascending
  std::vector<Real> weights;
};

namespace detail {

// P_m(x) and P_{m-1}(x) by the three-term recurrence.
inline void legendre_pair(int m, const Real& x, Real& pm, Real& pm1) {
  Real p0(1), p1 = x, t;
  for (int k = 1; k < m; ++k) {
    // p2 = ((2k+1) x p1 - k p0) / (k+1)
    mpfr_mul(t.raw(), x.raw(), p1.raw(), MPFR_RNDN);
    mpfr_mul_si(t.raw(), t.raw(), 2 * k + 1, MPFR_RNDN);
    mpfr_mul_si(p0.raw(), p0.raw(), k, MPFR_RNDN);
    mpfr_sub(t.raw(), t.raw(), p0.raw(), MPFR_RNDN);
    mpfr_div_si(t.raw(), t.raw(), k + 1, MPFR_RNDN);
    std::swap(p0, p1);
    std::swap(p1, t);
  }
  pm = p1;
  pm1 = p0;
}

inline GaussRule compute_gauss_rule(int m, Bits bits) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x0 = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    // Newton in double, then refine with doubling precision.
    for (int it = 0; it < 6; ++it) {
      double p0 = 1, p1 = x0;
      for (int k = 1; k < m; ++k) {
        double p2 = ((2 * k + 1) * x0 * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      double dp = m * (x0 * p1 - p0) / (x0 * x0 - 1);
      x0 -= p1 / dp;
    }
    Real x;
    {
      PrecisionScope ps(bits);
      x = Real(x0);
    }
    Bits p = 48;
    while (true) {
      p = std::min<Bits>(2 * p, bits);
      PrecisionScope ps(p);
      Real xp = Real::at_working_precision(x);
      Real pm, pm1;
      legendre_pair(m, xp, pm, pm1);
      Real dp = Real(m) * (xp * pm - pm1) / (xp * xp - 1);
      xp -= pm / dp;
      x = xp;
      if (p == bits) {
        // One extra step at full precision.
        legendre_pair(m, x, pm, pm1);
        dp = Real(m) * (x * pm - pm1) / (x * x - 1);
        x -= pm / dp;
        legendre_pair(m, x, pm, pm1);
        dp = Real(m) * (x * pm - pm1) / (x * x - 1);
        Real w = Real(2) / ((1 - x * x) * dp * dp);
        // x0 came from the descending cos ordering: store ascending.
        rule.nodes[m - 1 - i] = x;
        rule.weights[m - 1 - i] = w;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        break;
      }
    }
  }
  if (m % 2 == 1) {
    PrecisionScope ps(bits);
    rule.nodes[m / 2] = Real(0);
  }
  return rule;
}

}  // namespace detail

/// Gauss-Legendre rule with `m` nodes at the working precision; cached and thread-safe.
inline std::shared_ptr<const GaussRule> gauss_legendre(int m) {
  static std::mutex mutex;
  static std::map<std::pair<int, Bits>, std::shared_ptr<const GaussRule>> cache;
  Bits bits = working_precision();
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({m, bits});
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const GaussRule>(detail::compute_gauss_rule(m, bits));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(std::make_pair(m, bits), rule).first->second;
}

/// An integration node: abscissa and weight.
struct Node {
  Real x;
  Real w;
};

/// A closed interval [lo, hi].
struct Panel {
  Real lo;
  Real hi;
};

/// Composite Gauss-Legendre nodes: each panel is split into `sub` equal pieces with `m` nodes.
inline std::vector<Node> composite_nodes(const std::vector<Panel>& panels, int sub, int m) {
  auto rule = gauss_legendre(m);
  std::vector<Node> out;
  out.reserve(panels.size() * static_cast<std::size_t>(sub * m));
  for (const auto& panel : panels) {
    Real width = (panel.hi - panel.lo) / static_cast<long>(sub);
    Real half = width / 2L;
    for (int s = 0; s < sub; ++s) {
      Real mid = panel.lo + width * static_cast<long>(s) + half;
      for (int j = 0; j < m; ++j) out.push_back({mid + half * rule->nodes[j], half * rule->weights[j]});
    }
  }
  return out;
}

/// Equispaced periodic trapezoid nodes on [lo, lo + period).
inline std::vector<Node> trapezoid_nodes(const Real& lo, const Real& period, int count) {
  std::vector<Node> out;
  out.reserve(count);
  Real h = period / static_cast<long>(count);
  for (int j = 0; j < count; ++j) out.push_back({lo + h * static_cast<long>(j), h});
  return out;
}

/// Estimates for a batch of integrals plus a nonnegative scale per entry.
template <class V>
struct BatchEstimate {
  std::vector<V> values;
  std::vector<Real> scales;
};

template <class V>
using BatchEstimator = std::function<BatchEstimate<V>(const std::vector<Node>&)>;

namespace detail {
template <class V>
Real diff_magnitude(const V& a, const V& b) {
  return abs(a - b);
}
}  // namespace detail

struct RefinementPolicy {
  int initial_nodes = 32;
  int max_nodes = 512;     // per (sub)panel before subdividing
  int max_subpanels = 64;
  int initial_trapezoid = 64;
  int max_trapezoid = 1 << 15;
};

/// Refines the node set until successive estimates agree; throws AccuracyError otherwise.
/// `periodic` selects the trapezoid rule over one period starting at panels[0].lo.
template <class V>
std::vector<V> adaptive_batch(const std::vector<Panel>& panels, bool periodic, const BatchEstimator<V>& estimate,
                              const Real& tol, const RefinementPolicy& policy = {}) {
  auto converged = [&](const BatchEstimate<V>& prev, const BatchEstimate<V>& cur, Real& worst) {
    bool ok = true;
    worst = Real(0);
    for (std::size_t k = 0; k < cur.values.size(); ++k) {
      Real d = detail::diff_magnitude(cur.values[k], prev.values[k]);
      Real scale = cur.scales[k];
      if (scale.is_zero()) {
        if (!d.is_zero()) ok = false;
        continue;
      }
      Real rel = d / scale;
      if (rel > worst) worst = rel;
      if (rel > tol) ok = false;
    }
    return ok;
  };

  Real worst;
  if (periodic) {
    Real period = panels.front().hi - panels.front().lo;
    int count = policy.initial_trapezoid;
    auto prev = estimate(trapezoid_nodes(panels.front().lo, period, count));
    while (count < policy.max_trapezoid) {
      count *= 2;
      auto cur = estimate(trapezoid_nodes(panels.front().lo, period, count));
      if (!cur.values.empty() && !cur.scales[0].is_finite()) break;
      if (converged(prev, cur, worst)) return cur.values;
      prev = std::move(cur);
    }
    throw AccuracyError("periodic trapezoid rule did not converge", worst.to_double());
  }

  int m = policy.initial_nodes;
  int sub = 1;
  auto prev = estimate(composite_nodes(panels, sub, m));
  while (true) {
    if (m < policy.max_nodes) {
      m *= 2;
    } else if (sub < policy.max_subpanels) {
      sub *= 2;
    } else {
      break;
    }
    auto cur = estimate(composite_nodes(panels, sub, m));
    bool finite = true;
    for (const auto& s : cur.scales) finite = finite && s.is_finite();
    if (!finite) break;
    if (converged(prev, cur, worst)) return cur.values;
    prev = std::move(cur);
  }
  throw AccuracyError("jump-split Gauss-Legendre quadrature did not converge", worst.to_double());
}

}  // namespace sdet
