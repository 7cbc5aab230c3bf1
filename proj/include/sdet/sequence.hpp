#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "sdet/error.hpp"
#include "sdet/scalar.hpp"

namespace sdet {

/// even: s_{-n} = s_n.  odd: s_{-n} = -s_n, s_0 = 0.  one_sided: indices >= 1 only.
enum class SeqKind { even, odd, one_sided, general };

inline const char* to_string(SeqKind k) {
  switch (k) {
    case SeqKind::even: return "even";
    case SeqKind::odd: return "odd";
    case SeqKind::one_sided: return "one_sided";
    case SeqKind::general: return "none";
  }
  return "?";
}

namespace detail {
template <class T>
bool nearly_equal(const T& a, const T& b) {
  if constexpr (FieldTraits<T>::exact) {
    return a == b;
  } else {
    Real d = abs(a - b);
    if (d.is_zero()) return true;
    Real scale = max(abs(a), abs(b));
    return d <= ldexp(scale, -static_cast<long>(working_precision() / 2));
  }
}
}  // namespace detail

/**
 * Integer-indexed scalar sequence.
 *
 * Finite-support sequences (no bound) read as zero outside their stored entries.
 * Truncated sequences (bound set, e.g. quadrature output) only know |n| <= bound and
 * raise SupportError beyond it. Even/odd sequences store n >= 0 and mirror.
 */
template <class T>
class ScalarSeq {
 public:
  ScalarSeq() = default;

  ScalarSeq(SeqKind kind, const std::map<long, T>& entries, std::optional<long> bound = std::nullopt)
      : kind_(kind), bound_(bound) {
    for (const auto& [n, v] : entries) {
      if (kind_ == SeqKind::one_sided && n < 1) {
        throw Error("one-sided sequence entry at index " + std::to_string(n) + " (indices start at 1)");
      }
      if ((kind_ == SeqKind::even || kind_ == SeqKind::odd) && n < 0) continue;
      if (kind_ == SeqKind::odd && n == 0 && !FieldTraits<T>::is_zero(v)) {
        throw SymmetryError("odd sequence with nonzero entry at index 0");
      }
      entries_.emplace(n, v);
    }
    if (kind_ == SeqKind::even || kind_ == SeqKind::odd) {
      for (const auto& [n, v] : entries) {
        if (n >= 0) continue;
        T mirrored = value_at(-n);
        T expected = kind_ == SeqKind::even ? mirrored : T(-mirrored);
        if (!detail::nearly_equal(v, expected)) {
          throw SymmetryError(std::string("sequence declared ") + to_string(kind_) + " violates symmetry at index " +
                              std::to_string(n));
        }
      }
    }
  }

  SeqKind kind() const { return kind_; }
  std::optional<long> bound() const { return bound_; }
  const std::map<long, T>& stored() const { return entries_; }

  /// Largest |n| with a stored entry (0 for an empty sequence).
  long support_radius() const {
    long r = 0;
    for (const auto& [n, v] : entries_) {
      if (!FieldTraits<T>::is_zero(v)) r = std::max(r, n < 0 ? -n : n);
    }
    return r;
  }

  T operator[](long n) const {
    if (bound_ && (n > *bound_ || n < -*bound_)) {
      throw SupportError("sequence index " + std::to_string(n) + " outside computed range |n| <= " +
                         std::to_string(*bound_));
    }
    switch (kind_) {
      case SeqKind::one_sided:
        if (n < 1) throw SupportError("one-sided sequence read at index " + std::to_string(n));
        return value_at(n);
      case SeqKind::even:
        return value_at(n < 0 ? -n : n);
      case SeqKind::odd:
        if (n < 0) return T(-value_at(-n));
        return value_at(n);
      case SeqKind::general:
        return value_at(n);
    }
    return zero();
  }

  /// Applies `f` entrywise (linear maps only: symmetry is kept).
  template <class U, class F>
  ScalarSeq<U> map(F f) const {
    std::map<long, U> out;
    for (const auto& [n, v] : entries_) out.emplace(n, f(v));
    ScalarSeq<U> r;
    r.kind_ = kind_;
    r.bound_ = bound_;
    r.entries_ = std::move(out);
    return r;
  }

 private:
  template <class>
  friend class ScalarSeq;

  static T zero() {
    if constexpr (FieldTraits<T>::exact) {
      return T(0);
    } else {
      return T();
    }
  }
  T value_at(long n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? zero() : it->second;
  }

  SeqKind kind_ = SeqKind::general;
  std::optional<long> bound_;
  std::map<long, T> entries_;
};

}  // namespace sdet
