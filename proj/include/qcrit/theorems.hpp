#pragma once

// Bounded mechanical checks of the statements about D, psi_q, q-critical
// integers and p-admissible quadruples. Every check produces a VerifyReport;
// a falsified instance becomes a counterexample payload carrying everything
// needed to reproduce it (parameters, seeds, offending values). Nothing here
// throws on a failed check.

#include <chrono>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "qcrit/digits.hpp"
#include "qcrit/field.hpp"
#include "qcrit/generators.hpp"
#include "qcrit/io.hpp"
#include "qcrit/oracles.hpp"
#include "qcrit/series.hpp"

namespace qcrit {

struct VerifyReport {
  static constexpr std::size_t kMaxCounterexamples = 20;

  std::string statement;
  json params = json::object();
  std::string range;
  bool pass = true;
  std::vector<json> counterexamples;
  std::uint64_t failures = 0;
  json stats = json::object();
  double elapsed_ms = 0;

  void fail(json payload) {
    pass = false;
    ++failures;
    if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(std::move(payload));
  }
};

inline json report_to_json(const VerifyReport& r, bool with_timing = true) {
  return json{{"statement", r.statement},
              {"params", r.params},
              {"range", r.range},
              {"pass", r.pass},
              {"failures", r.failures},
              {"counterexamples", r.counterexamples},
              {"stats", r.stats},
              {"elapsed_ms", with_timing ? std::round(r.elapsed_ms * 1000.0) / 1000.0 : 0.0}};
}

namespace detail {

class Stopwatch {
 public:
  explicit Stopwatch(VerifyReport& r) : r_(r), t0_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    r_.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  VerifyReport& r_;
  std::chrono::steady_clock::time_point t0_;
};

/// Per-trial seed derivation (splitmix64 of seed + trial).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline json field_params(const PrimePower& pq, const FieldSpec& K) {
  return json{{"p", pq.p}, {"lambda", pq.lambda}, {"q", pq.q}, {"field", field_to_json(K)}};
}

inline json mismatch(const TruncSeries& lhs, const TruncSeries& rhs) {
  const auto d = first_difference(lhs, rhs);
  if (!d) return json::object();
  return json{{"degree", *d}, {"lhs", element_to_json(lhs[*d])}, {"rhs", element_to_json(rhs[*d])}};
}

inline TruncSeries psi_of_d(const UnitSeries& f, const PrimePower& pq) { return psi_q(log_deriv(f), pq); }

}  // namespace detail

// ---------------------------------------------------------------------------
// psi_q[D[F o gamma]] = gamma^{-1} o psi_q[D[F]]

inline VerifyReport verify_main(const PrimePower& pq, const FieldSpec& K, int n, int trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.statement = "main";
  {
    detail::Stopwatch sw(rep);
    rep.params = detail::field_params(pq, K);
    rep.params["prec"] = n;
    rep.params["trials"] = trials;
    rep.params["seed"] = seed;
    rep.range = "random units F and gamma = products of 1..4 generators X + beta X^{q^ell}, plus gamma = X";

    std::uint64_t checks = 0;
    auto check = [&](const UnitSeries& f, const GammaSeries& g, json ctx) {
      const TruncSeries lhs = detail::psi_of_d(UnitSeries(ps_compose(f, g.to_dense())), pq);
      const TruncSeries rhs = apply_additive(gamma_inverse(g), detail::psi_of_d(f, pq));
      ++checks;
      if (!agree(lhs, rhs)) {
        ctx["mismatch"] = detail::mismatch(lhs, rhs);
        ctx["gamma"] = additive_to_json(g);
        rep.fail(std::move(ctx));
      }
    };

    check(random_unit(K, n, seed), GammaSeries::identity(K, pq, n), json{{"case", "identity"}, {"seed", seed}});

    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = detail::trial_seed(seed, static_cast<std::uint64_t>(t));
      const UnitSeries f = random_unit(K, n, s);
      const int factors = 1 + t % 4;
      const GammaSeries g = random_gamma(pq, K, n, s ^ 0x5bd1e995ULL, factors);
      check(f, g, json{{"case", "random"}, {"trial", t}, {"seed", s}, {"factors", factors}});

      if (t % 2 == 0) {
        // right-action law: composing with g1 o g2 acts by g2^{-1} o g1^{-1}
        const GammaSeries g1 = random_gamma(pq, K, n, s + 1, 1 + (t / 2) % 2);
        const GammaSeries g2 = random_gamma(pq, K, n, s + 2, 1);
        const TruncSeries via_pair = ps_compose(ps_compose(f, g1.to_dense()), g2.to_dense());
        const TruncSeries via_product = ps_compose(f, gamma_compose(g1, g2).to_dense());
        const TruncSeries lhs = detail::psi_of_d(UnitSeries(via_pair), pq);
        const TruncSeries rhs =
            apply_additive(gamma_inverse(g2), apply_additive(gamma_inverse(g1), detail::psi_of_d(f, pq)));
        ++checks;
        if (!agree(via_pair, via_product) || !agree(lhs, rhs)) {
          rep.fail(json{{"case", "right-action"},
                        {"trial", t},
                        {"seed", s},
                        {"composition_agrees", agree(via_pair, via_product)},
                        {"mismatch", detail::mismatch(lhs, rhs)}});
        }
      }
    }
    rep.stats["checks"] = checks;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// exactness of 1 -> K[[X^p]]^x -> K[[X]]^x -> {a_{pi} = a_i^p} -> 0

inline VerifyReport verify_factoid(const PrimePower& pq, const FieldSpec& K, int n, int trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.statement = "factoid";
  {
    detail::Stopwatch sw(rep);
    rep.params = detail::field_params(pq, K);
    rep.params["prec"] = n;
    rep.params["trials"] = trials;
    rep.params["seed"] = seed;
    rep.range = "kernel, image and surjectivity of D on random units and random admissible targets";
    const std::uint32_t p = K.p();
    auto only_p_multiples = [&](const TruncSeries& s) {
      for (int i = 0; i <= s.prec(); ++i)
        if (i % static_cast<int>(p) != 0 && !s[i].is_zero()) return false;
      return true;
    };

    std::uint64_t kernel_hits = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = detail::trial_seed(seed, static_cast<std::uint64_t>(t));
      std::mt19937_64 rng(s);

      // kernel containment: F in K[[X^p]]^x
      TruncSeries fp = random_unit(K, n, s).series();
      for (int i = 1; i <= n; ++i)
        if (i % static_cast<int>(p) != 0) fp.set(i, K.zero());
      if (!log_deriv(UnitSeries(fp)).is_zero())
        rep.fail(json{{"case", "kernel-containment"}, {"trial", t}, {"seed", s}});

      // kernel equality: D[G] = 0 iff G in K[[X^p]]; alternate plain random units
      // with K[[X^p]] units perturbed at one exponent prime to p
      TruncSeries g = random_unit(K, n, s + 1).series();
      if (t % 2 == 1) {
        g = fp;
        int e = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (e % static_cast<int>(p) == 0) e = e > 1 ? e - 1 : 1;
        if (t % 4 != 1) g.set(e, random_unit_element(K, rng));
      }
      const TruncSeries dg = log_deriv(UnitSeries(g));
      if (dg.is_zero()) ++kernel_hits;
      if (dg.is_zero() != only_p_multiples(g))
        rep.fail(json{{"case", "kernel-equality"}, {"trial", t}, {"seed", s}, {"series", series_to_json(g)}});

      // image: a_{pi} = a_i^p
      if (!in_log_deriv_image(dg))
        rep.fail(json{{"case", "image"}, {"trial", t}, {"seed", s}, {"series", series_to_json(g)}});

      // surjectivity on a random admissible target
      TruncSeries target(K, n);
      for (int i = 1; i <= n; ++i) {
        if (i % static_cast<int>(p) != 0)
          target.set(i, random_element(K, rng));
        else
          target.set(i, target[i / static_cast<int>(p)].frobenius(1));
      }
      const UnitSeries sol = solve_log_deriv(target);
      const TruncSeries back = log_deriv(sol);
      if (!agree(back, target))
        rep.fail(json{{"case", "surjectivity"}, {"trial", t}, {"seed", s}, {"mismatch", detail::mismatch(back, target)}});

      // solutions are unique up to K[[X^p]]^x
      const UnitSeries again = solve_log_deriv(dg);
      const TruncSeries quotient = ps_mul(g, ps_inv_mult(again).series());
      if (!only_p_multiples(quotient))
        rep.fail(json{{"case", "quotient"}, {"trial", t}, {"seed", s}, {"series", series_to_json(g)}});
    }
    rep.stats["kernel_hits"] = kernel_hits;
  }
  return rep;
}

// D[F(alpha X)] = D[F](alpha X)
inline VerifyReport verify_homogeneity(const FieldSpec& K, int n, int trials, std::uint64_t seed) {
  VerifyReport rep;
  rep.statement = "homogeneity";
  {
    detail::Stopwatch sw(rep);
    rep.params = json{{"field", field_to_json(K)}, {"prec", n}, {"trials", trials}, {"seed", seed}};
    rep.range = "random units F and random alpha in K^x";
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = detail::trial_seed(seed, static_cast<std::uint64_t>(t));
      std::mt19937_64 rng(s ^ 0xa5a5a5a5ULL);
      const FieldElement alpha = random_unit_element(K, rng);
      const UnitSeries f = random_unit(K, n, s);
      const TruncSeries lhs = log_deriv(UnitSeries(scale_arg(f, alpha)));
      const TruncSeries rhs = scale_arg(log_deriv(f), alpha);
      if (!agree(lhs, rhs))
        rep.fail(json{{"trial", t}, {"seed", s}, {"alpha", element_to_json(alpha)}, {"mismatch", detail::mismatch(lhs, rhs)}});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// digit statements

// For every p-admissible (j,k,ell,m): k <_p m, and kappa_p(k) = kappa_p(m)
// forces j = (p^{ord_p k} - 1)/(p^ell - 1).
inline VerifyReport verify_digitmadness(std::uint32_t p, std::uint64_t m_bound, std::uint64_t ell_bound) {
  VerifyReport rep;
  rep.statement = "digitmadness";
  {
    detail::Stopwatch sw(rep);
    rep.params = json{{"p", p}, {"m_bound", m_bound}, {"ell_bound", ell_bound}};
    rep.range = "all p-admissible quadruples with m <= m_bound, ell <= ell_bound";
    std::uint64_t count = 0, equal_cores = 0;
    for_each_admissible(p, m_bound, ell_bound, [&](const AdmissibleQuadruple& a) {
      ++count;
      const json quad = {a.j, a.k, a.ell, a.m};
      if (digital_cmp(a.k, a.m, p) >= 0) rep.fail(json{{"part", "i"}, {"quad", quad}});
      if (p_core(a.k, p) == p_core(a.m, p)) {
        ++equal_cores;
        const std::uint64_t f = ord_p(a.k, p);
        const std::uint64_t num = ipow(p, f) - 1;
        const std::uint64_t den = ipow(p, a.ell) - 1;
        if (f == 0 || f % a.ell != 0 || num % den != 0 || num / den != a.j)
          rep.fail(json{{"part", "ii"}, {"quad", quad}, {"ord_p_k", f}});
      }
    });
    rep.stats["quadruples"] = count;
    rep.stats["equal_core_quadruples"] = equal_cores;
  }
  return rep;
}

inline VerifyReport verify_digitgames(std::uint32_t p, std::uint64_t m_bound, std::uint64_t ell_bound) {
  VerifyReport rep;
  rep.statement = "digitgames";
  {
    detail::Stopwatch sw(rep);
    rep.params = json{{"p", p}, {"m_bound", m_bound}, {"ell_bound", ell_bound}};
    rep.range = "all p-admissible quadruples with m <= m_bound, ell <= ell_bound";
    std::uint64_t count = 0, trivial = 0;
    for_each_admissible(p, m_bound, ell_bound, [&](const AdmissibleQuadruple& a) {
      ++count;
      try {
        const DigitGamesWitness w = digit_games_witness(a, p);
        if (w.e == 0) ++trivial;
      } catch (const LemmaViolation& e) {
        rep.fail(json{{"quad", {a.j, a.k, a.ell, a.m}}, {"error", e.what()}});
      }
    });
    rep.stats["quadruples"] = count;
    rep.stats["e_zero_quadruples"] = trivial;
  }
  return rep;
}

// mu_q(c) < q; the two descriptions of {(mu_q(c)+1) q^i - 1} agree; and
// C_q^0 = {mu_q(c)}, C_q = {c : (c,p)=1, kappa_p(c) = kappa_p(mu_q(c))}.
inline VerifyReport verify_digitmadness2(const PrimePower& pq, std::uint64_t c_bound, std::uint64_t oracle_bound) {
  VerifyReport rep;
  rep.statement = "digitmadness2";
  {
    detail::Stopwatch sw(rep);
    const oracle::ClassTable table(pq, oracle::ClassTable::default_bound(pq));
    rep.params = json{{"p", pq.p},
                      {"lambda", pq.lambda},
                      {"q", pq.q},
                      {"c_bound", c_bound},
                      {"oracle_bound", oracle_bound},
                      {"scan_bound", table.bound()}};
    rep.range = "c <= c_bound for mu_q; set identities restricted to [1, oracle_bound]";

    std::set<std::uint64_t> mu_values;
    const std::uint64_t c_top = std::max<std::uint64_t>(c_bound, pq.q - 1);
    for (std::uint64_t c = 1; c <= c_top; ++c) {
      const std::uint64_t mu = mu_q(c, pq);
      mu_values.insert(mu);
      if (c > c_bound) continue;
      if (mu >= pq.q) rep.fail(json{{"part", "mu<q"}, {"c", c}, {"mu", mu}});
      if (!in_o_q(mu, c, pq)) rep.fail(json{{"part", "mu in O_q(c)"}, {"c", c}, {"mu", mu}});
      if (const std::uint64_t brute = table.mu(c); brute != mu)
        rep.fail(json{{"part", "mu fast path vs scan"},
                      {"c", c},
                      {"mu", mu},
                      {"scan", brute},
                      {"note", "scan is exact when mu_q(c) < scan_bound; scan_bound > q"}});
    }

    // both sides of the set identity on [1, oracle_bound]
    std::set<std::uint64_t> lhs;
    for (auto mu : mu_values)
      for (std::uint64_t x = mu + 1; x - 1 <= oracle_bound; x *= pq.q) lhs.insert(x - 1);
    std::set<std::uint64_t> rhs, ter, by_digits;
    for (std::uint64_t c = 1; c <= oracle_bound; ++c) {
      if (c % pq.p == 0) continue;
      if (p_core(c, pq.p) == table.min_core(c)) rhs.insert(c);
      if (p_core(c, pq.p) == p_core(mu_q(c, pq), pq.p)) ter.insert(c);
      if (is_critical_by_digits(c, pq)) by_digits.insert(c);
    }
    auto diff = [](const std::set<std::uint64_t>& a, const std::set<std::uint64_t>& b) {
      std::vector<std::uint64_t> d;
      std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
      if (d.size() > 10) d.resize(10);
      return d;
    };
    if (lhs != rhs) rep.fail(json{{"part", "orbit description of C_q"}, {"symmetric_difference", diff(lhs, rhs)}});

    const auto base = critical_base_set(pq);
    const std::set<std::uint64_t> base_set(base.begin(), base.end());
    if (base_set != mu_values)
      rep.fail(json{{"part", "C_q^0 = {mu_q(c)}"}, {"symmetric_difference", diff(base_set, mu_values)}});

    std::set<std::uint64_t> from_base;
    for (auto c : base)
      for (std::uint64_t x = c + 1; x - 1 <= oracle_bound; x *= pq.q) from_base.insert(x - 1);
    if (ter != from_base)
      rep.fail(json{{"part", "C_q = {kappa_p(c) = kappa_p(mu_q(c))}"}, {"symmetric_difference", diff(ter, from_base)}});
    if (by_digits != from_base)
      rep.fail(json{{"part", "digital description of C_q"}, {"symmetric_difference", diff(by_digits, from_base)}});

    // the sets q^i(c+1)-1 for distinct c in C_q^0 lie in distinct classes mod q-1
    std::set<std::uint64_t> classes;
    for (auto c : base) classes.insert(c % (pq.q - 1));
    if (classes.size() != base.size()) rep.fail(json{{"part", "disjoint union"}});

    if (pq.lambda == 1) {
      std::vector<std::uint64_t> expect;
      for (std::uint64_t c = 1; c < pq.p; ++c) expect.push_back(c);
      if (base != expect) rep.fail(json{{"part", "C_p^0 = {1..p-1}"}, {"got", base}});
    }
    rep.stats["critical_base_size"] = base.size();
    rep.stats["critical_below_oracle_bound"] = from_base.size();
  }
  return rep;
}

// The three rotation lemmas plus tau_p(<n+1>_q) >= 1 + kappa_p(<n>_q).
inline VerifyReport verify_necklace(const PrimePower& pq, std::uint64_t bound) {
  VerifyReport rep;
  rep.statement = "necklace";
  {
    detail::Stopwatch sw(rep);
    const oracle::ClassTable table(pq, oracle::ClassTable::default_bound(pq));
    rep.params = json{{"p", pq.p}, {"lambda", pq.lambda}, {"q", pq.q}, {"bound", bound}, {"scan_bound", table.bound()}};
    rep.range = "c, n <= bound; 0 < i < lambda";
    const std::uint32_t p = pq.p;
    const std::uint64_t mod = pq.q - 1;
    // <p^i c + a>_q through residues, so nothing overflows
    auto br = [&](std::uint64_t c, std::uint32_t i, std::uint64_t add) {
      std::uint64_t x = c % mod;
      for (std::uint32_t t = 0; t < i; ++t) x = x * p % mod;
      return bracket_q(x + add + mod, pq);
    };
    std::uint64_t n2_premises = 0;
    for (std::uint64_t c = 1; c <= bound; ++c) {
      for (std::uint32_t i = 1; i < pq.lambda; ++i) {
        const std::uint64_t rot = br(c, i, 0);
        if (rot <= ipow(p, i) - 1) {
          ++n2_premises;
          if (tau_p(bracket_q(c, pq), p) > rot) rep.fail(json{{"lemma", "necklace2"}, {"c", c}, {"i", i}});
        }
      }

      std::uint64_t min_tau = std::numeric_limits<std::uint64_t>::max();
      std::uint64_t min_core = std::numeric_limits<std::uint64_t>::max();
      for (std::uint32_t i = 0; i < pq.lambda; ++i) {
        min_tau = std::min(min_tau, tau_p(br(c, i, 1), p));
        min_core = std::min(min_core, p_core(br(c, i, 0), p));
      }
      const std::uint64_t mu = table.mu(c);
      if (mu == 0 || min_tau != 1 + min_core || min_core != p_core(mu, p))
        rep.fail(json{{"lemma", "necklace3"}, {"c", c}, {"min_tau", min_tau}, {"min_core", min_core}, {"mu", mu}});

      for (std::uint32_t i = 1; i < pq.lambda; ++i) {
        const std::uint64_t cand = ipow(p, i) * (mu + 1) - 1;
        if (in_o_q(cand, c, pq)) rep.fail(json{{"lemma", "necklace4"}, {"c", c}, {"i", i}, {"mu", mu}});
      }
    }
    for (std::uint64_t n = 1; n <= bound; ++n) {
      if (tau_p(bracket_q(n + 1, pq), p) < 1 + p_core(bracket_q(n, pq), p))
        rep.fail(json{{"lemma", "rotation inequality"}, {"n", n}});
    }
    rep.stats["necklace2_premises"] = n2_premises;
    rep.stats["vacuous_rotations"] = pq.lambda == 1;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// psi_q on the series M_{k,alpha,ell,beta}

struct NuffGrid {
  std::uint64_t k_bound = 31;
  std::uint32_t ell_bound = 3;
  std::vector<FieldElement> alphas;
  std::vector<FieldElement> betas;
};

/// Up to `limit` units of K in enumeration order.
inline std::vector<FieldElement> sample_units(const FieldSpec& K, std::size_t limit) {
  auto u = K.units();
  if (u.size() > limit) u.resize(limit);
  return u;
}

inline VerifyReport verify_nuff(const PrimePower& pq, const FieldSpec& K, int n, const NuffGrid& grid) {
  VerifyReport rep;
  rep.statement = "nuff";
  {
    detail::Stopwatch sw(rep);
    rep.params = detail::field_params(pq, K);
    rep.params["prec"] = n;
    rep.params["k_bound"] = grid.k_bound;
    rep.params["ell_bound"] = grid.ell_bound;
    json al = json::array(), be = json::array();
    for (const auto& a : grid.alphas) al.push_back(element_to_json(a));
    for (const auto& b : grid.betas) be.push_back(element_to_json(b));
    rep.params["alphas"] = al;
    rep.params["betas"] = be;
    rep.range = "(k, p) = 1, k <= k_bound, 1 <= ell <= ell_bound, alpha and beta over the given sets";

    std::uint64_t points = 0, critical_points = 0;
    for (std::uint64_t k = 1; k <= grid.k_bound; ++k) {
      if (k % pq.p == 0) continue;
      const bool crit = is_critical(k, pq);
      for (std::uint32_t ell = 1; ell <= grid.ell_bound; ++ell) {
        for (const auto& alpha : grid.alphas) {
          for (const auto& beta : grid.betas) {
            ++points;
            if (crit) ++critical_points;
            const json where = {{"k", k}, {"ell", ell}, {"alpha", element_to_json(alpha)}, {"beta", element_to_json(beta)}};
            const TruncSeries m = m_series(k, alpha, ell, beta, pq, n);

            const TruncSeries psi = psi_q(m, pq);
            const TruncSeries expect = nuff_closed_form(k, alpha, ell, beta, pq, n);
            if (!agree(psi, expect)) {
              json c = where;
              c["check"] = "psi_q[M] closed form";
              c["mismatch"] = detail::mismatch(psi, expect);
              rep.fail(std::move(c));
            }

            const TruncSeries defn = m_series_by_definition(k, alpha, ell, beta, pq, n);
            if (!agree(m, defn)) {
              json c = where;
              c["check"] = "expansion vs definition";
              c["mismatch"] = detail::mismatch(m, defn);
              rep.fail(std::move(c));
            }

            // modulo X^p K[[X^p]], M = alpha X^k + terms X^e with e in O_q(k), e >_p k
            if (k <= static_cast<std::uint64_t>(n) && !(m[static_cast<int>(k)] == alpha)) {
              json c = where;
              c["check"] = "leading coefficient";
              rep.fail(std::move(c));
            }
            for (int e = 1; e <= n; ++e) {
              if (static_cast<std::uint64_t>(e) == k || e % static_cast<int>(pq.p) == 0 || m[e].is_zero()) continue;
              const auto eu = static_cast<std::uint64_t>(e);
              if (!in_o_q(eu, k, pq) || digital_cmp(eu, k, pq.p) <= 0) {
                json c = where;
                c["check"] = "digital shape";
                c["exponent"] = e;
                rep.fail(std::move(c));
              }
            }
          }
        }
      }
    }
    rep.stats["grid_points"] = points;
    rep.stats["critical_points"] = critical_points;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// equivariance mod pi of Psi = psi_q o D for the Lubin-Tate action

/// Random element X + sum alpha_i X^{q^i} of Gamma_{q,F_q}, coefficients drawn
/// from the given subfield elements (zero allowed).
inline GammaSeries random_subfield_gamma(const PrimePower& pq, const FieldSpec& K, int n,
                                         const std::vector<FieldElement>& sub, std::mt19937_64& rng) {
  AdditiveSeries a = AdditiveSeries::identity(K, pq, n);
  for (std::uint32_t i = 1; i <= a.max_index(); ++i) a.set(i, sub[rng() % sub.size()]);
  return GammaSeries(std::move(a));
}

inline VerifyReport verify_coleman_equivariance(const PrimePower& pq, int ext_degree, int n, int trials,
                                                std::uint64_t seed) {
  VerifyReport rep;
  rep.statement = "coleman";
  {
    detail::Stopwatch sw(rep);
    const FieldSpec& K = field_make(pq.p, static_cast<int>(pq.lambda) * ext_degree);
    const auto fq = subfield_elements(K, static_cast<int>(pq.lambda));
    std::vector<FieldElement> fq_units(fq.begin(), fq.end());
    std::erase_if(fq_units, [](const FieldElement& x) { return x.is_zero(); });

    rep.params = detail::field_params(pq, K);
    rep.params["ext_degree"] = ext_degree;
    rep.params["prec"] = n;
    rep.params["trials"] = trials;
    rep.params["seed"] = seed;
    rep.range = "random units h over F_{q^m}, all omega in F_q^x, random theta(u) in Gamma_{q,F_q}";

    auto psi_d = [&](const TruncSeries& h) { return detail::psi_of_d(UnitSeries(h), pq); };
    std::uint64_t checks = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = detail::trial_seed(seed, static_cast<std::uint64_t>(t));
      std::mt19937_64 rng(s ^ 0x27d4eb2dULL);
      const UnitSeries h = random_unit(K, n, s);
      const GammaSeries theta_u =
          t == 0 ? GammaSeries::identity(K, pq, n) : random_subfield_gamma(pq, K, n, fq, rng);
      const GammaSeries theta_u_inv = gamma_inverse(theta_u);
      const TruncSeries psi_h = psi_d(h);
      for (const auto& omega : fq_units) {
        ++checks;
        const json where = {{"trial", t}, {"seed", s}, {"omega", element_to_json(omega)}, {"theta_u", additive_to_json(theta_u)}};
        const FieldElement omega_inv = omega.inv();
        AdditiveSeries theta_omega_inv(K, pq, n + 1);
        theta_omega_inv.set(0, omega_inv);

        // Psi[h o [omega] o theta(u)] vs theta(u)^{-1} o theta(omega)^{-1} o Psi[h] o [omega]
        const TruncSeries lhs = psi_d(ps_compose(scale_arg(h, omega), theta_u.to_dense()));
        const TruncSeries conj = apply_additive(theta_omega_inv, scale_arg(psi_h, omega));
        const TruncSeries rhs = apply_additive(theta_u_inv, conj);
        if (!agree(lhs, rhs)) {
          json c = where;
          c["check"] = "equivariance";
          c["mismatch"] = detail::mismatch(lhs, rhs);
          rep.fail(std::move(c));
        }
        // the omega-only case is the homogeneity conjugation
        const TruncSeries lhs_w = psi_d(scale_arg(h, omega));
        if (!agree(lhs_w, omega_inv * scale_arg(psi_h, omega))) {
          json c = where;
          c["check"] = "omega conjugation";
          rep.fail(std::move(c));
        }
      }
    }

    // each basis monomial X^{c+1}, c in C_q^0, is hit: Psi[solve_log_deriv(W_{c,1})] = X^{c+1}
    std::uint64_t hit = 0;
    for (auto c : critical_base_set(pq)) {
      if (c + 1 > static_cast<std::uint64_t>(n)) break;
      const UnitSeries h = solve_log_deriv(w_series(c, K.one(), n));
      const TruncSeries got = psi_d(h);
      const TruncSeries want = TruncSeries::monomial(K, n + 1, static_cast<int>(c + 1), K.one());
      if (agree(got, want))
        ++hit;
      else
        rep.fail(json{{"check", "surjectivity"}, {"c", c}, {"mismatch", detail::mismatch(got, want)}});
    }
    rep.stats["checks"] = checks;
    rep.stats["basis_monomials_hit"] = hit;
    rep.stats["omega_count"] = fq_units.size();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// exploration: p-digital leading terms of D[E_p(alpha X^k)]

struct ExploreRow {
  std::uint64_t k = 0;
  FieldElement alpha;
  std::optional<std::uint64_t> leading;  // <=_p-least exponent prime to p with nonzero coefficient
  std::uint64_t core = 0;
  std::size_t defect = 0;
  bool critical = false;
};

inline std::vector<ExploreRow> explore_generators(const PrimePower& pq, const FieldSpec& K, std::uint64_t k_bound,
                                                  int n, const std::vector<FieldElement>& alphas) {
  std::vector<ExploreRow> rows;
  const UnitSeries e = artin_hasse(K.p(), n, K);
  for (std::uint64_t k = 1; k <= k_bound; ++k) {
    if (k % pq.p == 0) continue;
    for (const auto& alpha : alphas) {
      ExploreRow row;
      row.k = k;
      row.alpha = alpha;
      const TruncSeries inner = TruncSeries::monomial(K, n, static_cast<int>(std::min<std::uint64_t>(k, n + 1)), alpha);
      const TruncSeries d = log_deriv(UnitSeries(ps_compose(e, inner)));
      for (int m = 1; m <= n; ++m) {
        const auto mu = static_cast<std::uint64_t>(m);
        if (mu % pq.p == 0 || d[m].is_zero()) continue;
        if (!row.leading || digital_cmp(mu, *row.leading, pq.p) < 0) row.leading = mu;
      }
      if (row.leading) {
        row.core = p_core(*row.leading, pq.p);
        row.defect = p_defect(*row.leading, pq.p);
        row.critical = is_critical(*row.leading, pq);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline json explore_to_json(const PrimePower& pq, const FieldSpec& K, int n, const std::vector<ExploreRow>& rows) {
  json out = {{"p", pq.p}, {"q", pq.q}, {"field", field_to_json(K)}, {"prec", n}};
  json arr = json::array();
  for (const auto& r : rows) {
    json row = {{"k", r.k}, {"alpha", element_to_json(r.alpha)}};
    if (r.leading) {
      row["leading_exponent"] = *r.leading;
      row["kappa"] = r.core;
      row["delta"] = r.defect;
      row["critical"] = r.critical;
    } else {
      row["leading_exponent"] = nullptr;
    }
    arr.push_back(std::move(row));
  }
  out["rows"] = std::move(arr);
  return out;
}

// ---------------------------------------------------------------------------

struct SuiteConfig {
  std::uint32_t p = 2;
  std::uint32_t lambda = 2;
  int n = 2;
  std::optional<std::vector<std::uint32_t>> modulus;
  int prec = 128;
  std::uint64_t seed = 1;
  int trials = 50;
  std::uint64_t m_bound = 4096;
  std::uint64_t ell_bound = 12;
  std::uint64_t c_bound = 1000;
  std::uint64_t oracle_bound = 10000;
  std::uint64_t necklace_bound = 10000;
  std::uint64_t nuff_k_bound = 31;
  std::uint32_t nuff_ell_bound = 3;
  std::size_t nuff_coefficients = 4;
  int coleman_ext = 2;
};

inline const std::vector<std::string>& statement_names() {
  static const std::vector<std::string> names = {"main",          "factoid",  "homogeneity", "digitmadness", "digitgames",
                                                 "digitmadness2", "necklace", "nuff",        "coleman"};
  return names;
}

/// Runs one named statement (or all of them) with the given configuration.
inline std::vector<VerifyReport> run_statement(const std::string& name, const SuiteConfig& cfg) {
  const PrimePower pq = PrimePower::make(cfg.p, cfg.lambda);
  auto field = [&]() -> const FieldSpec& { return field_make(cfg.p, cfg.n, cfg.modulus); };
  std::vector<VerifyReport> out;
  auto want = [&](const char* s) { return name == "all" || name == s; };
  if (want("main")) out.push_back(verify_main(pq, field(), cfg.prec, cfg.trials, cfg.seed));
  if (want("factoid")) out.push_back(verify_factoid(pq, field(), cfg.prec, cfg.trials, cfg.seed));
  if (want("homogeneity")) out.push_back(verify_homogeneity(field(), cfg.prec, cfg.trials, cfg.seed));
  if (want("digitmadness")) out.push_back(verify_digitmadness(cfg.p, cfg.m_bound, cfg.ell_bound));
  if (want("digitgames")) out.push_back(verify_digitgames(cfg.p, cfg.m_bound, cfg.ell_bound));
  if (want("digitmadness2")) out.push_back(verify_digitmadness2(pq, cfg.c_bound, cfg.oracle_bound));
  if (want("necklace")) out.push_back(verify_necklace(pq, cfg.necklace_bound));
  if (want("nuff")) {
    const auto units = sample_units(field(), cfg.nuff_coefficients);
    out.push_back(verify_nuff(pq, field(), cfg.prec, NuffGrid{cfg.nuff_k_bound, cfg.nuff_ell_bound, units, units}));
  }
  if (want("coleman")) out.push_back(verify_coleman_equivariance(pq, cfg.coleman_ext, cfg.prec, cfg.trials, cfg.seed));
  if (out.empty()) throw std::invalid_argument("unknown statement '" + name + "'");
  return out;
}

}  // namespace qcrit
