#pragma once
/**
 * @file symbol_json.hpp
 * @brief JSON configs for Fourier and moment symbols.
 *
 * Fourier symbols:
 *   {"kind":"coeffs","symmetry":"even","entries":[[n,re,im],...]}
 *   {"kind":"chi"}
 *   {"kind":"jump_t","beta":[re,im]}              optional "theta" rotates the jump
 *   {"kind":"fh","log_smooth":[[n,re,im],...],"jumps":[{"theta":t,"beta":[re,im]},...]}
 *   {"kind":"product","factors":[...]}
 *   {"kind":"doubled","inner":{...}}              a(e^{i theta}) = inner(e^{2 i theta})
 *
 * Moment symbols are a Fourier object plus "weight" ("one" | "sqrt_ratio"), or one of
 *   {"kind":"poly","weight":w,"coeffs":[c0,c1,...]}       smooth factor sum c_k x^k
 *   {"kind":"exp_poly","weight":w,"coeffs":[c0,c1,...]}   smooth factor exp(sum c_k x^k)
 *   {"kind":"moments","values":[b1,b2,...]}
 *
 * Scalars are JSON numbers (read exactly from their decimal text) or strings such
 * as "1/3" or "-2.5e-1"; complex values are [re, im] or a bare real. Angles are
 * radians or strings with pi: "pi", "-pi/2", "3pi/4", "2*pi/3".
 */

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sdet/error.hpp"
#include "sdet/scalar.hpp"
#include "sdet/symbol.hpp"

namespace sdet {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace json_detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(child(path, key), "missing required field");
  return *it;
}

inline Rational rational(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer() || j.is_number_unsigned()) return parse_rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path, "expected a number or a numeric string");
}

inline long integer(const Json& j, const std::string& path) {
  if (j.is_number_integer() || j.is_number_unsigned()) return j.get<long>();
  if (j.is_string()) {
    Rational q = rational(j, path);
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  }
  throw ConfigError(path, "expected an integer");
}

inline QComplex complex_value(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() == 1) return QComplex(rational(j[0], child(path, 0)));
    if (j.size() != 2) throw ConfigError(path, "complex value must be [re, im]");
    return QComplex(rational(j[0], child(path, 0)), rational(j[1], child(path, 1)));
  }
  return QComplex(rational(j, path));
}

inline Angle angle(const Json& j, const std::string& path) {
  if (!j.is_string()) return Angle::radians(rational(j, path));
  std::string s;
  for (char ch : j.get<std::string>()) {
    if (ch != ' ' && ch != '*') s.push_back(ch);
  }
  auto pos = s.find("pi");
  if (pos == std::string::npos) return Angle::radians(rational(j, path));
  std::string head = s.substr(0, pos);
  std::string tail = s.substr(pos + 2);
  try {
    Rational coef = head.empty() || head == "+" ? Rational(1) : head == "-" ? Rational(-1) : parse_rational(head);
    if (!tail.empty()) {
      if (tail[0] != '/') throw Error("unexpected text after 'pi'");
      coef /= parse_rational(tail.substr(1));
    }
    return Angle::pi_times(coef);
  } catch (const std::exception& e) {
    throw ConfigError(path, std::string("malformed angle '") + j.get<std::string>() + "': " + e.what());
  }
}

inline std::map<long, QComplex> indexed_entries(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of [n, re, im]");
  std::map<long, QComplex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    std::string p = child(path, i);
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ConfigError(p, "expected [n, re] or [n, re, im]");
    long n = integer(e[0], child(p, 0));
    QComplex v(rational(e[1], child(p, 1)), e.size() == 3 ? rational(e[2], child(p, 2)) : Rational(0));
    if (!out.emplace(n, v).second) throw ConfigError(p, "duplicate index " + std::to_string(n));
  }
  return out;
}

inline Symmetry symmetry(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected \"even\", \"odd\" or \"none\"");
  auto s = j.get<std::string>();
  if (s == "even") return Symmetry::even;
  if (s == "odd") return Symmetry::odd;
  if (s == "none") return Symmetry::none;
  throw ConfigError(path, "unknown symmetry '" + s + "'");
}

inline std::vector<QComplex> complex_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<QComplex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], child(path, i)));
  return out;
}

}  // namespace json_detail

/// Parses a Fourier symbol; errors carry the JSON pointer of the offending node.
inline FourierSymbol fourier_symbol_from_json(const Json& j, const std::string& path = "") {
  using namespace json_detail;
  const std::string kind_path = child(path, "kind");
  const Json& kind_j = require(j, "kind", path);
  if (!kind_j.is_string()) throw ConfigError(kind_path, "expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "coeffs") {
      Symmetry sym = j.contains("symmetry") ? symmetry(j["symmetry"], child(path, "symmetry")) : Symmetry::none;
      auto entries = indexed_entries(require(j, "entries", path), child(path, "entries"));
      try {
        return FourierSymbol::coeffs(std::move(entries), sym);
      } catch (const SymmetryError& e) {
        throw ConfigError(child(path, "entries"), e.what());
      }
    }
    if (kind == "chi") return FourierSymbol::chi();
    if (kind == "jump_t") {
      QComplex beta = complex_value(require(j, "beta", path), child(path, "beta"));
      Angle at = j.contains("theta") ? angle(j["theta"], child(path, "theta")) : Angle{};
      return FourierSymbol::jump(std::move(beta), std::move(at));
    }
    if (kind == "fh") {
      FHDescriptor desc;
      if (j.contains("log_smooth")) desc.log_smooth = indexed_entries(j["log_smooth"], child(path, "log_smooth"));
      if (j.contains("jumps")) {
        const Json& js = j["jumps"];
        std::string jp = child(path, "jumps");
        if (!js.is_array()) throw ConfigError(jp, "expected an array");
        for (std::size_t i = 0; i < js.size(); ++i) {
          std::string p = child(jp, i);
          desc.jumps.push_back({angle(require(js[i], "theta", p), child(p, "theta")),
                                complex_value(require(js[i], "beta", p), child(p, "beta"))});
        }
      }
      try {
        return FourierSymbol::fisher_hartwig(std::move(desc));
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        std::string msg = e.what();
        std::string p = child(path, "jumps");
        // "jump r: ..." names the offending entry
        if (msg.rfind("jump ", 0) == 0) p = child(p, msg.substr(5, msg.find(':') - 5));
        throw ConfigError(p, msg);
      }
    }
    if (kind == "product") {
      const Json& fs = require(j, "factors", path);
      std::string fp = child(path, "factors");
      if (!fs.is_array()) throw ConfigError(fp, "expected an array");
      std::vector<FourierSymbol> factors;
      for (std::size_t i = 0; i < fs.size(); ++i) factors.push_back(fourier_symbol_from_json(fs[i], child(fp, i)));
      return FourierSymbol::product(std::move(factors));
    }
    if (kind == "doubled") {
      return FourierSymbol::doubled(fourier_symbol_from_json(require(j, "inner", path), child(path, "inner")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path.empty() ? "/" : path, e.what());
  }
  throw ConfigError(kind_path, "unknown symbol kind '" + kind + "'");
}

inline Weight weight_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected \"one\" or \"sqrt_ratio\"");
  auto s = j.get<std::string>();
  if (s == "one") return Weight::one;
  if (s == "sqrt_ratio") return Weight::sqrt_ratio;
  throw ConfigError(path, "unknown weight '" + s + "'");
}

inline MomentSymbol moment_symbol_from_json(const Json& j, const std::string& path = "") {
  using namespace json_detail;
  const Json& kind_j = require(j, "kind", path);
  if (!kind_j.is_string()) throw ConfigError(child(path, "kind"), "expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "moments") {
    return MomentSymbol::explicit_moments(complex_list(require(j, "values", path), child(path, "values")));
  }
  Weight w = j.contains("weight") ? weight_from_json(j["weight"], child(path, "weight")) : Weight::one;
  MomentSymbol m = [&] {
    if (kind == "poly") {
      return MomentSymbol::polynomial(complex_list(require(j, "coeffs", path), child(path, "coeffs")), w);
    }
    if (kind == "exp_poly") {
      return MomentSymbol::exp_polynomial(complex_list(require(j, "coeffs", path), child(path, "coeffs")), w);
    }
    return MomentSymbol::from_fourier(fourier_symbol_from_json(j, path), w);
  }();
  if (j.contains("parity")) {
    const Json& pj = j["parity"];
    std::string pp = child(path, "parity");
    if (!pj.is_string() || (pj != "even" && pj != "none")) throw ConfigError(pp, "expected \"even\" or \"none\"");
    if (pj == "even" && !m.is_even()) throw ConfigError(pp, "smooth factor is not even at sampled points");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization

namespace json_detail {

inline OrderedJson scalar_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

inline OrderedJson angle_json(const Angle& a) {
  if (a.rad_part == 0) {
    if (a.pi_part == 0) return 0;
    if (a.pi_part == 1) return "pi";
    Rational p = a.pi_part;
    std::string num = p.get_num() == 1 ? "" : p.get_num() == -1 ? "-" : p.get_num().get_str();
    return num + "pi" + (p.get_den() == 1 ? "" : "/" + p.get_den().get_str());
  }
  if (a.pi_part == 0) return scalar_json(a.rad_part);
  return OrderedJson{{"pi", scalar_json(a.pi_part)}, {"rad", scalar_json(a.rad_part)}};
}

inline OrderedJson entries_json(const std::map<long, QComplex>& m) {
  auto arr = OrderedJson::array();
  for (const auto& [n, v] : m) arr.push_back(OrderedJson::array({n, scalar_json(v.re), scalar_json(v.im)}));
  return arr;
}

}  // namespace json_detail

inline OrderedJson to_json(const FourierSymbol& a) {
  using namespace json_detail;
  return std::visit(
      [](const auto& n) -> OrderedJson {
        using N = std::decay_t<decltype(n)>;
        OrderedJson j;
        if constexpr (std::is_same_v<N, symbol_node::Coeffs>) {
          j["kind"] = "coeffs";
          j["symmetry"] = to_string(n.symmetry);
          j["entries"] = entries_json(n.entries);
        } else if constexpr (std::is_same_v<N, symbol_node::Chi>) {
          j["kind"] = "chi";
        } else if constexpr (std::is_same_v<N, symbol_node::Jump>) {
          j["kind"] = "jump_t";
          j["beta"] = OrderedJson::array({scalar_json(n.beta.re), scalar_json(n.beta.im)});
          if (!(n.at == Angle{})) j["theta"] = angle_json(n.at);
        } else if constexpr (std::is_same_v<N, symbol_node::FH>) {
          j["kind"] = "fh";
          j["log_smooth"] = entries_json(n.desc.log_smooth);
          auto js = OrderedJson::array();
          for (const auto& r : n.desc.jumps) {
            js.push_back({{"theta", angle_json(r.theta)},
                          {"beta", OrderedJson::array({scalar_json(r.beta.re), scalar_json(r.beta.im)})}});
          }
          j["jumps"] = std::move(js);
        } else if constexpr (std::is_same_v<N, symbol_node::Product>) {
          j["kind"] = "product";
          auto fs = OrderedJson::array();
          for (const auto& f : n.factors) fs.push_back(to_json(f));
          j["factors"] = std::move(fs);
        } else if constexpr (std::is_same_v<N, symbol_node::Doubled>) {
          j["kind"] = "doubled";
          j["inner"] = to_json(*n.inner);
        } else {
          j["kind"] = "closed_form";
          j["label"] = n.label;
          j["symmetry"] = to_string(n.symmetry);
        }
        return j;
      },
      a.node());
}

/// Finite sequence in the coefficient schema.
template <class T>
OrderedJson sequence_to_json(const ScalarSeq<T>& s, int digits = 30) {
  OrderedJson j;
  j["kind"] = "coeffs";
  j["symmetry"] = to_string(s.kind());
  auto arr = OrderedJson::array();
  for (const auto& [n, v] : s.stored()) {
    if constexpr (FieldTraits<T>::exact) {
      arr.push_back(OrderedJson::array({n, json_detail::scalar_json(v), 0}));
    } else if constexpr (std::is_same_v<T, Complex>) {
      arr.push_back(OrderedJson::array({n, to_string(v.real(), digits), to_string(v.imag(), digits)}));
    } else {
      arr.push_back(OrderedJson::array({n, to_string(v, digits), "0"}));
    }
  }
  j["entries"] = std::move(arr);
  return j;
}

}  // namespace sdet
