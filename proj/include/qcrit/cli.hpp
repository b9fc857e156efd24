#pragma once

// Command-line front end. `run` parses argv, dispatches one subcommand and
// returns the process exit code:
//   0  success, or every requested check passed
//   1  a verification check failed (counterexamples are printed)
//   2  usage error (unknown subcommand, malformed or out-of-range input)
// In JSON mode exactly one JSON document is written.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "qcrit/digits.hpp"
#include "qcrit/field.hpp"
#include "qcrit/generators.hpp"
#include "qcrit/io.hpp"
#include "qcrit/series.hpp"
#include "qcrit/theorems.hpp"

namespace qcrit::cli {

using boost::multiprecision::cpp_int;

struct CliConfig {
  SuiteConfig suite;
  std::uint64_t bound = 0;  // 0: not given
  bool base = false;
  std::string format = "text";
  std::string output;
  bool no_timing = false;
  std::string input, input2, at;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline cpp_int parse_natural(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("expected a non-negative integer, got '" + s + "'");
  return cpp_int(s);
}

inline std::uint64_t parse_u64(const std::string& s) {
  const cpp_int v = parse_natural(s);
  if (v > std::numeric_limits<std::uint64_t>::max()) throw UsageError("integer out of 64-bit range: " + s);
  return static_cast<std::uint64_t>(v);
}

inline cpp_int parse_positive(const std::string& s) {
  cpp_int v = parse_natural(s);
  if (v == 0) throw UsageError("expected a positive integer, got 0");
  return v;
}

inline json read_json(const std::string& path) {
  if (path.empty()) throw UsageError("missing --input");
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return json::parse(in);
}

inline std::string series_text(const TruncSeries& s) {
  std::ostringstream os;
  bool any = false;
  for (int i = 0; i <= s.prec(); ++i) {
    if (s[i].is_zero()) continue;
    os << (any ? " + " : "") << s[i].to_string();
    if (i == 1) os << "*X";
    if (i > 1) os << "*X^" << i;
    any = true;
  }
  os << (any ? " + " : "") << "O(X^" << s.prec() + 1 << ")";
  return os.str();
}

inline std::string additive_text(const AdditiveSeries& a) {
  std::ostringstream os;
  bool any = false;
  for (const auto& [i, c] : a.terms()) {
    os << (any ? " + " : "") << c.to_string() << "*X^" << ipow(a.prime_power().q, i);
    any = true;
  }
  if (!any) os << "0";
  os << " + O(X^" << a.prec() + 1 << ")";
  return os.str();
}

inline std::string join(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  if (const char* env = std::getenv("QCRIT_FORMAT"); env && (std::string(env) == "json" || std::string(env) == "text"))
    cfg.format = env;
  SuiteConfig& s = cfg.suite;
  std::string modulus_text;

  CLI::App app{"q-critical integers, psi_q and D over finite fields: queries, verification, exploration", "qcrit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--p", s.p, "characteristic p (prime)")->capture_default_str();
  app.add_option("--lambda", s.lambda, "q = p^lambda")->capture_default_str();
  app.add_option("--n", s.n, "degree of K = F_{p^n}")->capture_default_str();
  app.add_option("--modulus", modulus_text, "modulus of K as JSON, constant term first, e.g. [1,1,1]");
  app.add_option("--prec", s.prec, "truncation precision N")->capture_default_str();
  app.add_option("--seed", s.seed, "random seed")->capture_default_str();
  app.add_option("--trials", s.trials, "random trials per check")->capture_default_str();
  app.add_option("--bound", cfg.bound, "upper bound for listings; necklace range for verify");
  app.add_option("--m-bound", s.m_bound, "admissible quadruples: m <= m-bound")->capture_default_str();
  app.add_option("--ell-bound", s.ell_bound, "admissible quadruples: ell <= ell-bound")->capture_default_str();
  app.add_option("--c-bound", s.c_bound, "mu_q checked for c <= c-bound")->capture_default_str();
  app.add_option("--oracle-bound", s.oracle_bound, "set identities checked on [1, oracle-bound]")->capture_default_str();
  app.add_option("--k-bound", s.nuff_k_bound, "k <= k-bound for nuff and explore")->capture_default_str();
  app.add_option("--nuff-ell-bound", s.nuff_ell_bound, "ell <= bound in the nuff grid")->capture_default_str();
  app.add_option("--nuff-coefficients", s.nuff_coefficients, "alpha, beta range over this many units of K")
      ->capture_default_str();
  app.add_option("--coleman-m", s.coleman_ext, "coleman check works over F_{q^m}")->capture_default_str();
  app.add_option("--format", cfg.format, "text or json (default from QCRIT_FORMAT)")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", cfg.output, "write to this file instead of standard output");
  app.add_flag("--no-timing", cfg.no_timing, "report elapsed_ms as 0 for byte-identical output");

  std::vector<std::string> args;
  std::string statement;
  std::string series_op;

  auto* criticals = app.add_subcommand("criticals", "list C_q^0 (--base) or C_q up to --bound");
  criticals->add_flag("--base", cfg.base, "list C_q^0");
  auto* is_crit = app.add_subcommand("is-critical", "decide k in C_q, with the rotation table");
  is_crit->add_option("k", args)->required()->expected(1);
  auto* mu = app.add_subcommand("mu", "mu_q(c)");
  mu->add_option("c", args)->required()->expected(1);
  auto* core = app.add_subcommand("core", "p-core kappa_p(n)");
  core->add_option("n", args)->required()->expected(1);
  auto* defect = app.add_subcommand("defect", "p-defect delta_p(n)");
  defect->add_option("n", args)->required()->expected(1);
  auto* cmp = app.add_subcommand("cmp", "compare in the p-digital order");
  cmp->add_option("a_b", args, "two positive integers")->required()->expected(2);
  auto* lucas = app.add_subcommand("lucas", "binomial(m, k) mod p by Lucas' theorem");
  lucas->add_option("m_k", args, "two non-negative integers")->required()->expected(2);
  auto* admissible = app.add_subcommand("admissible", "test j k ell m, or list quadruples up to --m-bound");
  admissible->add_option("quad", args, "j k ell m")->expected(0, 4);
  auto* witness = app.add_subcommand("witness", "digit-games witness (e, f, g, r) for j k ell m");
  witness->add_option("quad", args, "j k ell m")->required()->expected(4);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("statement", statement, "one of: all main factoid homogeneity digitmadness digitgames "
                                              "digitmadness2 necklace nuff coleman")
      ->required();
  auto* explore = app.add_subcommand("explore", "p-digital leading exponents of D[E_p(alpha X^k)]");
  auto* series = app.add_subcommand("series", "series operations on JSON input");
  series->add_option("op", series_op, "eval | compose | invert | logderiv | psi")
      ->required()
      ->check(CLI::IsMember({"eval", "compose", "invert", "logderiv", "psi"}));
  series->add_option("--input", cfg.input, "JSON file, '-' for standard input");
  series->add_option("--input2", cfg.input2, "second JSON file (compose)");
  series->add_option("--at", cfg.at, "field element as JSON coordinates (eval)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const bool as_json = cfg.format == "json";
  std::ostringstream buf;
  json doc;
  int code = 0;

  try {
    if (!modulus_text.empty()) {
      try {
        s.modulus = json::parse(modulus_text).get<std::vector<std::uint32_t>>();
      } catch (const json::exception&) {
        throw UsageError("--modulus must be a JSON array of integers");
      }
    }
    if (!is_prime(s.p)) throw UsageError("--p must be prime");
    if (s.lambda == 0) throw UsageError("--lambda must be >= 1");
    if (s.prec < 1) throw UsageError("--prec must be >= 1");
    const PrimePower pq = PrimePower::make(s.p, s.lambda);

    if (criticals->parsed()) {
      std::vector<std::uint64_t> set;
      if (cfg.base || cfg.bound == 0) {
        set = critical_base_set(pq);
      } else {
        for (std::uint64_t k = 1; k <= cfg.bound; ++k)
          if (is_critical(k, pq)) set.push_back(k);
      }
      doc = {{"p", pq.p}, {"q", pq.q}, {"set", set}};
      buf << detail::join(set) << "\n";
    } else if (is_crit->parsed()) {
      const std::uint64_t k = detail::parse_u64(args[0]);
      if (k == 0) throw UsageError("k must be positive");
      const bool crit = is_critical(k, pq);
      const auto dec = critical_decompose(k, pq);
      const std::uint64_t m = k % pq.p == 0 ? 0 : mu_q(k, pq);
      // table of <k>_q, or of the base c when k = q^i (c+1) - 1
      const std::uint64_t c = dec ? dec->first : k;
      const auto table = critical_rotation_table(c, pq);
      json rows = json::array();
      for (const auto& r : table) {
        rows.push_back({{"shift", r.shift},
                        {"digits", r.digits.to_string()},
                        {"ignored", r.ignored},
                        {"struck", r.ignored ? json(nullptr) : json(r.struck.to_string())},
                        {"value", r.ignored ? json(nullptr) : json(r.value)}});
      }
      doc = {{"p", pq.p}, {"q", pq.q}, {"k", k}, {"critical", crit}, {"rotation_table", rows}};
      doc["mu"] = m ? json(m) : json(nullptr);
      doc["decomposition"] = dec ? json{{"c", dec->first}, {"i", dec->second}} : json(nullptr);
      buf << (crit ? "true" : "false") << "\n";
      if (dec) buf << "k = q^" << dec->second << " * (" << dec->first << " + 1) - 1\n";
      if (m) buf << "mu_q = " << m << "\n";
      for (const auto& r : table) {
        buf << r.shift << "  " << r.digits.to_string();
        if (r.ignored)
          buf << "  (ends in 0)\n";
        else
          buf << "  " << r.struck.to_string() << " = " << r.value << "\n";
      }
    } else if (mu->parsed()) {
      const std::uint64_t c = detail::parse_u64(args[0]);
      if (c == 0) throw UsageError("c must be positive");
      const std::uint64_t v = mu_q(c, pq);
      doc = {{"p", pq.p}, {"q", pq.q}, {"c", c}, {"mu", v}};
      buf << v << "\n";
    } else if (core->parsed() || defect->parsed()) {
      const cpp_int n = detail::parse_positive(args[0]);
      const std::string key = core->parsed() ? "kappa" : "delta";
      std::string v = core->parsed() ? p_core<cpp_int>(n, s.p).str() : std::to_string(p_defect<cpp_int>(n, s.p));
      doc = {{"p", s.p}, {"n", n.str()}, {key, core->parsed() ? json(v) : json(std::stoull(v))}};
      buf << v << "\n";
    } else if (cmp->parsed()) {
      const cpp_int a = detail::parse_positive(args[0]);
      const cpp_int b = detail::parse_positive(args[1]);
      const auto o = digital_cmp<cpp_int>(a, b, s.p);
      const char* rel = o < 0 ? "<" : o > 0 ? ">" : "=";
      doc = {{"p", s.p}, {"a", a.str()}, {"b", b.str()}, {"order", o < 0 ? "less" : o > 0 ? "greater" : "equal"}};
      buf << a.str() << " " << rel << "_" << s.p << " " << b.str() << "\n";
    } else if (lucas->parsed()) {
      const cpp_int m = detail::parse_natural(args[0]);
      const cpp_int k = detail::parse_natural(args[1]);
      const std::uint32_t v = lucas_binom<cpp_int>(m, k, s.p);
      doc = {{"p", s.p}, {"m", m.str()}, {"k", k.str()}, {"binomial_mod_p", v}};
      buf << v << "\n";
    } else if (admissible->parsed()) {
      if (args.size() == 4) {
        std::vector<std::uint64_t> v;
        for (const auto& a : args) v.push_back(detail::parse_u64(a));
        const bool ok = is_admissible(v[0], v[1], v[2], v[3], s.p);
        doc = {{"p", s.p}, {"quad", v}, {"admissible", ok}};
        buf << (ok ? "true" : "false") << "\n";
      } else if (args.empty()) {
        json quads = json::array();
        std::uint64_t count = 0;
        for_each_admissible(s.p, s.m_bound, s.ell_bound, [&](const AdmissibleQuadruple& a) {
          ++count;
          quads.push_back({a.j, a.k, a.ell, a.m});
          buf << a.j << " " << a.k << " " << a.ell << " " << a.m << "\n";
        });
        doc = {{"p", s.p}, {"m_bound", s.m_bound}, {"ell_bound", s.ell_bound}, {"count", count}, {"quads", quads}};
      } else {
        throw UsageError("admissible takes either no arguments or j k ell m");
      }
    } else if (witness->parsed()) {
      std::vector<std::uint64_t> v;
      for (const auto& a : args) v.push_back(detail::parse_u64(a));
      const AdmissibleQuadruple quad{v[0], v[1], v[2], v[3]};
      if (!is_admissible(quad.j, quad.k, quad.ell, quad.m, s.p)) throw UsageError("quadruple is not p-admissible");
      try {
        const DigitGamesWitness w = digit_games_witness(quad, s.p);
        doc = witness_to_json(quad, w);
        buf << "e=" << w.e << " f=" << w.f << " g=" << w.g << " r=" << w.r << "\n";
      } catch (const LemmaViolation& e) {
        doc = {{"quad", v}, {"witness", nullptr}, {"error", e.what()}};
        buf << "no witness: " << e.what() << "\n";
        code = 1;
      }
    } else if (verify->parsed()) {
      if (statement != "all" &&
          std::find(statement_names().begin(), statement_names().end(), statement) == statement_names().end())
        throw UsageError("unknown statement '" + statement + "'");
      if (cfg.bound) s.necklace_bound = cfg.bound;
      const auto reports = run_statement(statement, s);
      bool all_pass = true;
      json arr = json::array();
      for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        arr.push_back(report_to_json(r, !cfg.no_timing));
        buf << r.statement << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.stats.dump();
        if (!cfg.no_timing) buf << "  " << std::lround(r.elapsed_ms) << " ms";
        buf << "\n";
        if (!r.pass) {
          buf << "  failures: " << r.failures << "\n";
          for (const auto& c : r.counterexamples) buf << "  " << c.dump() << "\n";
        }
      }
      doc = statement == "all" ? json{{"pass", all_pass}, {"reports", arr}} : arr[0];
      if (!all_pass) code = 1;
    } else if (explore->parsed()) {
      const FieldSpec& K = field_make(s.p, s.n, s.modulus);
      std::vector<FieldElement> alphas;
      for (std::uint32_t a = 1; a < s.p; ++a) alphas.push_back(K.from_int(a));
      const auto rows = explore_generators(pq, K, s.nuff_k_bound, s.prec, alphas);
      doc = explore_to_json(pq, K, s.prec, rows);
      for (const auto& r : rows) {
        buf << "k=" << r.k << " alpha=" << r.alpha.to_string();
        if (r.leading)
          buf << " leading=" << *r.leading << " kappa=" << r.core << " delta=" << r.defect
              << (r.critical ? " critical" : "") << "\n";
        else
          buf << " leading=none\n";
      }
    } else if (series->parsed()) {
      const json in = detail::read_json(cfg.input);
      if (series_op == "eval") {
        const TruncSeries f = series_from_json(in);
        if (cfg.at.empty()) throw UsageError("series eval needs --at");
        const FieldElement a = element_from_json(f.field(), json::parse(cfg.at));
        FieldElement v = f.field().zero();
        for (int i = f.prec(); i >= 0; --i) v = v * a + f[i];
        doc = element_to_json(v);
        buf << v.to_string() << "\n";
      } else if (series_op == "compose") {
        const TruncSeries r = ps_compose(series_from_json(in), series_from_json(detail::read_json(cfg.input2)));
        doc = series_to_json(r);
        buf << detail::series_text(r) << "\n";
      } else if (series_op == "invert") {
        if (in.contains("terms")) {
          const GammaSeries g(additive_from_json(in));
          const GammaSeries h = gamma_inverse(g);
          doc = additive_to_json(h);
          buf << detail::additive_text(h) << "\n";
        } else {
          const TruncSeries f = series_from_json(in);
          const TruncSeries r = f[0].is_zero() ? ps_reverse(f) : ps_inv_mult(UnitSeries(f)).series();
          doc = series_to_json(r);
          buf << detail::series_text(r) << "\n";
        }
      } else if (series_op == "logderiv") {
        const TruncSeries r = log_deriv(UnitSeries(series_from_json(in)));
        doc = series_to_json(r);
        buf << detail::series_text(r) << "\n";
      } else {
        const TruncSeries r = psi_q(series_from_json(in), pq);
        doc = series_to_json(r);
        buf << detail::series_text(r) << "\n";
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return 2;
  } catch (const LemmaViolation& e) {
    err << "lemma violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = as_json ? doc.dump(2) + "\n" : buf.str();
  if (!cfg.output.empty()) {
    std::ofstream f(cfg.output);
    if (!f) {
      err << "error: cannot write " << cfg.output << "\n";
      return 2;
    }
    f << text;
  } else {
    out << text;
  }
  return code;
}

}  // namespace qcrit::cli
