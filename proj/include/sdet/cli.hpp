#pragma once
/**
 * @file cli.hpp
 * @brief Batch front end: verify identities, run asymptotic studies, apply sequence
 *        transforms and dump matrices. Exit codes: 0 pass, 1 failure, 2 usage or
 *        config error, 3 precision failure.
 */

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdet/asymptotics.hpp"
#include "sdet/identities.hpp"
#include "sdet/matrix.hpp"
#include "sdet/symbol_json.hpp"
#include "sdet/transforms.hpp"

namespace sdet::cli {

enum ExitCode : int { kPass = 0, kFailure = 1, kUsage = 2, kPrecision = 3 };

/// Usage problems detected after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Config error tagged with the file (or "inline") it came from.
class SourcedConfigError : public Error {
 public:
  SourcedConfigError(const std::string& source, const ConfigError& e)
      : Error("config error in " + source + " at " + (e.path().empty() ? std::string("/") : e.path()) + ": " +
              strip_path(e)) {}

 private:
  static std::string strip_path(const ConfigError& e) {
    std::string w = e.what();
    std::string prefix = e.path() + ": ";
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
  }
};

namespace detail {

inline bool looks_inline(const std::string& arg) {
  auto p = arg.find_first_not_of(" \t\n");
  return p != std::string::npos && (arg[p] == '{' || arg[p] == '[');
}

inline std::string source_name(const std::string& arg) { return looks_inline(arg) ? "inline JSON" : arg; }

/// A JSON document given inline or as a file path.
inline Json load_json(const std::string& arg) {
  std::string text;
  if (looks_inline(arg)) {
    text = arg;
  } else {
    std::ifstream f(arg);
    if (!f) throw SourcedConfigError(arg, ConfigError("", "cannot open file"));
    std::ostringstream os;
    os << f.rdbuf();
    text = os.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SourcedConfigError(source_name(arg), ConfigError("", std::string("malformed JSON: ") + e.what()));
  }
}

template <class F>
auto with_source(const std::string& arg, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw SourcedConfigError(source_name(arg), e);
  }
}

inline FourierSymbol load_fourier(const std::string& arg) {
  Json j = load_json(arg);
  return with_source(arg, [&] { return fourier_symbol_from_json(j); });
}

inline MomentSymbol load_moment(const std::string& arg) {
  Json j = load_json(arg);
  return with_source(arg, [&] { return moment_symbol_from_json(j); });
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << content;
  if (!content.empty() && content.back() != '\n') f << '\n';
}

inline std::string sci(double x, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << std::scientific << x;
  return os.str();
}

inline std::string n_range(const std::vector<long>& Ns) {
  if (Ns.empty()) return "-";
  bool contiguous = true;
  for (std::size_t i = 1; i < Ns.size(); ++i) contiguous = contiguous && Ns[i] == Ns[i - 1] + 1;
  if (contiguous && Ns.size() > 1) return std::to_string(Ns.front()) + ".." + std::to_string(Ns.back());
  std::string s;
  for (std::size_t i = 0; i < Ns.size(); ++i) s += (i ? "," : "") + std::to_string(Ns[i]);
  return s;
}

inline void check_bits(const std::string& mode, Bits bits) {
  if (mode == "hp" && bits != 0 && bits < 64) throw UsageError("--bits must be at least 64 in hp mode");
}

inline std::vector<long> n_list(long n_max, const std::vector<long>& Ns) {
  if (!Ns.empty()) {
    for (long n : Ns) {
      if (n < 1) throw UsageError("N values must be >= 1");
    }
    return Ns;
  }
  if (n_max < 1) throw UsageError("give --nmax >= 1 or --N");
  return range_1_to(n_max);
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string identity = "all";
  std::string symbol, moment;
  long n_max = 0;
  std::vector<long> Ns;
  std::string mode = "exact";
  Bits bits = 0;
  std::string out, format = "json";
};

inline int run_verify(const VerifyArgs& a, std::ostream& out) {
  detail::check_bits(a.mode, a.bits);
  if (a.symbol.empty() == a.moment.empty()) throw UsageError("give exactly one of --symbol, --moment");
  IdentityInput input = a.symbol.empty() ? IdentityInput(detail::load_moment(a.moment))
                                         : IdentityInput(detail::load_fourier(a.symbol));
  Mode mode = a.mode == "exact" ? Mode::exact_mode() : Mode::hp(a.bits);
  auto Ns = detail::n_list(a.n_max, a.Ns);
  std::vector<IdentityReport> reps;
  if (a.identity == "all") {
    long top = *std::max_element(Ns.begin(), Ns.end());
    if (a.Ns.empty()) {
      reps = verify_all(input, top, mode);
    } else {
      // verify_all works on 1..n_max; keep the requested N values only
      reps = verify_all(input, top, mode);
      for (auto& r : reps) {
        std::vector<IdentityRecord> kept;
        for (auto& rec : r.records) {
          if (std::find(Ns.begin(), Ns.end(), rec.N) != Ns.end()) kept.push_back(rec);
        }
        r.records = std::move(kept);
      }
    }
  } else {
    auto kind = identity_kind_from_string(a.identity);
    if (!kind) throw UsageError("unknown identity '" + a.identity + "'");
    reps.push_back(verify(*kind, input, Ns, mode));
  }
  bool failed = false, precision = false;
  for (const auto& r : reps) {
    double worst = 0;
    std::vector<long> shown;
    for (const auto& rec : r.records) {
      worst = std::max(worst, rec.rel);
      shown.push_back(rec.N);
    }
    const char* tag = r.verdict == Verdict::pass ? "PASS" : r.verdict == Verdict::fail ? "FAIL" : "N/A ";
    out << tag << "  " << to_string(r.kind) << "  N=" << detail::n_range(shown);
    if (!r.records.empty()) out << "  max_rel=" << (worst == 0 ? std::string("0") : detail::sci(worst));
    out << '\n';
    if (r.verdict == Verdict::fail) failed = true;
    for (const auto& n : r.notes) {
      if (n.rfind("precision failure", 0) == 0) precision = true;
    }
  }
  if (!a.out.empty()) {
    std::string body = a.format == "csv" ? to_csv(reps) : to_json(reps).dump(2);
    detail::write_output(a.out, body, out);
  }
  if (precision) return kPrecision;
  return failed ? kFailure : kPass;
}

struct StudyArgs {
  std::string kind;
  std::string symbol;
  std::vector<long> Ns{8, 16, 32, 64};
  Bits bits = 0;
  std::string sign = "-1/2";
  std::string out, format = "json";
};

inline int run_study(const StudyArgs& a, std::ostream& out) {
  if (a.bits != 0 && a.bits < 64) throw UsageError("--bits must be at least 64");
  if (a.symbol.empty()) throw UsageError("give --desc (or --symbol)");
  StudyKind kind;
  try {
    kind = study_kind_from_string(a.kind);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  for (long n : a.Ns) {
    if (n < 1) throw UsageError("N values must be >= 1");
  }
  FourierSymbol input = detail::load_fourier(a.symbol);
  StudyOptions opt;
  opt.bits = a.bits;
  opt.sign = parse_rational(a.sign);
  AsymptoticsReport rep;
  try {
    rep = study(kind, input, a.Ns, opt);
  } catch (const SpeciesError& e) {
    throw UsageError(e.what());
  }
  for (const auto& c : rep.checks) {
    out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  " << detail::sci(c.value) << " (limit "
        << detail::sci(c.threshold, 1) << ")\n";
  }
  out << "extrapolated_limit " << asym_detail::complex_csv(rep.extrapolation.limit, 12) << "  prediction "
      << asym_detail::complex_csv(rep.prediction.ratio_coefficient, 12) << '\n';
  out << "VERDICT " << rep.verdict << (rep.conjecture ? "  (CONJECTURE)" : "") << '\n';
  if (!a.out.empty()) {
    std::string body = a.format == "csv" ? to_csv(rep) : to_json(rep).dump(2);
    detail::write_output(a.out, body, out);
  }
  return rep.verdict == "fail" ? kFailure : kPass;
}

struct TransformArgs {
  std::string op;
  std::string seq;
  long n_max = 0;
  std::string mode = "exact";
  Bits bits = 0;
  std::string out, format = "text";
};

namespace detail {

inline SeqKind input_kind(const std::string& op) {
  if (op == "a_to_b" || op == "a_to_c") return SeqKind::even;
  if (op == "c_to_b" || op == "c_to_a") return SeqKind::odd;
  if (op == "b_to_c") return SeqKind::one_sided;
  throw UsageError("unknown transform '" + op + "' (a_to_b, a_to_c, c_to_b, b_to_c, c_to_a)");
}

template <class T>
ScalarSeq<T> read_seq(const Json& j, SeqKind kind) {
  std::map<long, QComplex> entries = json_detail::indexed_entries(json_detail::require(j, "entries", ""), "/entries");
  if (j.contains("symmetry")) {
    std::string s = j.at("symmetry").get<std::string>();
    bool ok = (kind == SeqKind::even && s == "even") || (kind == SeqKind::odd && s == "odd") ||
              (kind == SeqKind::one_sided && (s == "none" || s == "one_sided"));
    if (!ok) throw ConfigError("/symmetry", "operation needs a " + std::string(to_string(kind)) + " sequence, got '" + s + "'");
  }
  std::map<long, T> m;
  for (const auto& [n, q] : entries) {
    if constexpr (FieldTraits<T>::exact) {
      if (!q.is_real()) throw ConfigError("/entries", "exact mode needs real entries; use --mode hp");
      m.emplace(n, q.re);
    } else {
      m.emplace(n, q.to_complex());
    }
  }
  try {
    return ScalarSeq<T>(kind, m);
  } catch (const Error& e) {
    throw ConfigError("/entries", e.what());
  }
}

template <class T>
int transform_in(const TransformArgs& a, const Json& j, std::ostream& out) {
  SeqKind kind = input_kind(a.op);
  auto in = with_source(a.seq, [&] { return read_seq<T>(j, kind); });
  ScalarSeq<T> res;
  long first = 1;
  if (a.op == "a_to_b") res = a_to_b(in, a.n_max);
  if (a.op == "a_to_c") res = a_to_c(in, a.n_max);
  if (a.op == "c_to_b") res = c_to_b(in, a.n_max);
  if (a.op == "b_to_c") res = b_to_c(in, a.n_max);
  if (a.op == "c_to_a") {
    res = recover_a_from_c(in, a.n_max);
    first = 0;
  }
  std::string body;
  if (a.format == "json") {
    body = sequence_to_json(res).dump(2);
  } else {
    for (long n = first; n <= a.n_max; ++n) {
      if (n > first) body += ',';
      body += FieldTraits<T>::format(res[n], 30);
    }
  }
  write_output(a.out, body, out);
  return kPass;
}

}  // namespace detail

inline int run_transform(const TransformArgs& a, std::ostream& out) {
  detail::check_bits(a.mode, a.bits);
  if (a.n_max < 1) throw UsageError("--nmax must be >= 1");
  detail::input_kind(a.op);
  Json j = detail::load_json(a.seq);
  if (a.mode == "exact") return detail::transform_in<Rational>(a, j, out);
  PrecisionScope ps(a.bits ? a.bits : default_bits());
  return detail::transform_in<Complex>(a, j, out);
}

struct DumpArgs {
  std::string symbol, moment;
  std::string matrix = "toeplitz";
  long N = 4;
  std::string mode = "exact";
  Bits bits = 0;
  int digits = 30;
  std::string out;
};

namespace detail {

template <class T>
StructuredMatrix<T> build_matrix(const DumpArgs& a) {
  if (!a.moment.empty()) {
    if (a.matrix != "hankel_moment") throw UsageError("--moment input only builds hankel_moment");
    return hankel_moment<T>(load_moment(a.moment), a.N);
  }
  FourierSymbol s = load_fourier(a.symbol);
  if (a.matrix == "toeplitz") return toeplitz<T>(s, a.N);
  if (a.matrix == "hankel") return hankel<T>(s, a.N);
  if (a.matrix == "toeplitz_plus_hankel") return toeplitz_plus_hankel<T>(s, a.N);
  throw UsageError("unknown matrix '" + a.matrix + "' (toeplitz, hankel, toeplitz_plus_hankel, hankel_moment)");
}

}  // namespace detail

inline int run_dump(const DumpArgs& a, std::ostream& out) {
  detail::check_bits(a.mode, a.bits);
  if (a.N < 1) throw UsageError("--N must be >= 1");
  if (a.symbol.empty() == a.moment.empty()) throw UsageError("give exactly one of --symbol, --moment");
  std::string body;
  if (a.mode == "exact") {
    body = to_json(detail::build_matrix<Rational>(a)).dump(2);
  } else {
    PrecisionScope ps(a.bits ? a.bits : auto_bits(a.N));
    body = to_json(detail::build_matrix<Complex>(a), a.digits).dump(2);
  }
  detail::write_output(a.out, body, out);
  return kPass;
}

// ---------------------------------------------------------------------------

/// Parses argv and runs one command.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Structured determinant identities and asymptotics", "sdet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sdet 1.0");

  VerifyArgs va;
  auto* v = app.add_subcommand("verify", "check determinant identities for one symbol");
  v->add_option("--identity", va.identity, "identity kind or 'all'");
  v->add_option("--symbol", va.symbol, "Fourier symbol JSON (file or inline)");
  v->add_option("--moment", va.moment, "moment symbol JSON (file or inline)");
  v->add_option("--nmax", va.n_max, "check N = 1..nmax");
  v->add_option("--N", va.Ns, "explicit N list")->delimiter(',');
  v->add_option("--mode", va.mode)->check(CLI::IsMember({"exact", "hp"}));
  v->add_option("--bits", va.bits, "hp precision (default max(128, 12N))");
  v->add_option("--out", va.out, "report path ('-' for stdout)");
  v->add_option("--format", va.format)->check(CLI::IsMember({"json", "csv"}));

  StudyArgs sa;
  auto* s = app.add_subcommand("study", "finite-N study of an asymptotic law");
  s->add_option("--kind", sa.kind, "prop52_ratio, cor53, cor54, cor56, conjecture_sym")->required();
  s->add_option("--desc,--symbol", sa.symbol, "Fisher-Hartwig descriptor or symbol JSON (file or inline)");
  s->add_option("--N", sa.Ns, "N list")->delimiter(',');
  s->add_option("--bits", sa.bits, "working precision");
  s->add_option("--sign", sa.sign, "half-jump sign for prop52_ratio (-1/2 or 1/2)");
  s->add_option("--out", sa.out, "report path ('-' for stdout)");
  s->add_option("--format", sa.format)->check(CLI::IsMember({"json", "csv"}));

  TransformArgs ta;
  auto* t = app.add_subcommand("transform", "map between a-, b- and c-sequences");
  t->add_option("--op", ta.op, "a_to_b, a_to_c, c_to_b, b_to_c, c_to_a")->required();
  t->add_option("--seq", ta.seq, "sequence JSON in the coeffs schema (file or inline)")->required();
  t->add_option("--nmax", ta.n_max)->required();
  t->add_option("--mode", ta.mode)->check(CLI::IsMember({"exact", "hp"}));
  t->add_option("--bits", ta.bits);
  t->add_option("--out", ta.out);
  t->add_option("--format", ta.format)->check(CLI::IsMember({"text", "json"}));

  DumpArgs da;
  auto* d = app.add_subcommand("dump", "print a structured matrix as JSON");
  d->add_option("--symbol", da.symbol);
  d->add_option("--moment", da.moment);
  d->add_option("--matrix", da.matrix, "toeplitz, hankel, toeplitz_plus_hankel, hankel_moment");
  d->add_option("--N", da.N);
  d->add_option("--mode", da.mode)->check(CLI::IsMember({"exact", "hp"}));
  d->add_option("--bits", da.bits);
  d->add_option("--digits", da.digits);
  d->add_option("--out", da.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*v) return run_verify(va, out);
    if (*s) return run_study(sa, out);
    if (*t) return run_transform(ta, out);
    if (*d) return run_dump(da, out);
  } catch (const SourcedConfigError& e) {
    err << "sdet: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "sdet: config error at " << e.path() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "sdet: " << e.what() << '\n';
    return kUsage;
  } catch (const SpeciesError& e) {
    err << "sdet: " << e.what() << '\n';
    return kUsage;
  } catch (const PrecisionError& e) {
    err << "sdet: precision failure: " << e.what() << '\n';
    return kPrecision;
  } catch (const AccuracyError& e) {
    err << "sdet: precision failure: " << e.what() << '\n';
    return kPrecision;
  } catch (const Error& e) {
    err << "sdet: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace sdet::cli
