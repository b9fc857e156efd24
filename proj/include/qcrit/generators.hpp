#pragma once

// Distinguished series: the Artin-Hasse exponential reduced mod p, the
// generators W_{k,alpha} of D[K[[X]]^x], the series
// M_{k,alpha,ell,beta} = k^{-1} D[E_p(alpha (X + beta X^{q^ell})^k)] with its
// closed-form expansion, the predicted value of psi_q on M, and seeded
// random units and Gamma-elements.

#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcrit/digits.hpp"
#include "qcrit/field.hpp"
#include "qcrit/series.hpp"

namespace qcrit {

namespace detail {

// Coefficients of exp(sum_{p^i <= N} X^{p^i}/p^i) over Q, extended on demand.
// With E' = E * sum X^{p^i - 1} this is n e_n = sum_{p^i <= n} e_{n-p^i}.
inline const std::vector<boost::multiprecision::cpp_rational>& artin_hasse_rationals(std::uint32_t p, int n,
                                                                                     std::unique_lock<std::mutex>&) {
  using boost::multiprecision::cpp_rational;
  static std::map<std::uint32_t, std::vector<cpp_rational>> cache;
  auto& e = cache[p];
  if (e.empty()) e.push_back(cpp_rational(1));
  for (int m = static_cast<int>(e.size()); m <= n; ++m) {
    cpp_rational s(0);
    for (std::uint64_t pi = 1; pi <= static_cast<std::uint64_t>(m); pi *= p) s += e[m - pi];
    e.push_back(s / m);
  }
  return e;
}

inline std::mutex& artin_hasse_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace detail

/// Coefficients of E_p mod p as residues in [0, p), for degrees 0..n.
/// Every rational coefficient is checked to be p-integral.
inline std::vector<std::uint32_t> artin_hasse_residues(std::uint32_t p, int n) {
  using boost::multiprecision::cpp_int;
  std::unique_lock lock(detail::artin_hasse_mutex());
  const auto& e = detail::artin_hasse_rationals(p, n, lock);
  std::vector<std::uint32_t> out(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const cpp_int num = boost::multiprecision::numerator(e[i]);
    const cpp_int den = boost::multiprecision::denominator(e[i]);
    const auto den_mod = static_cast<std::uint32_t>(cpp_int(den % p));
    if (den_mod == 0)
      throw LemmaViolation("Artin-Hasse coefficient of X^" + std::to_string(i) + " is not p-integral");
    cpp_int num_mod = num % p;
    if (num_mod < 0) num_mod += p;
    out[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(num_mod) * detail::inv_mod_p(den_mod, p) % p);
  }
  return out;
}

/// E_p mod p, mapped into K through the prime field, at precision n.
inline UnitSeries artin_hasse(std::uint32_t p, int n, const FieldSpec& K) {
  if (K.p() != p) throw std::invalid_argument("artin_hasse: field characteristic differs from p");
  const auto r = artin_hasse_residues(p, n);
  TruncSeries s(K, n);
  for (int i = 0; i <= n; ++i) s.set(i, K.from_int(r[i]));
  return UnitSeries(std::move(s));
}

/// W_{k,alpha} = sum_i alpha^{p^i} X^{k p^i}.
inline TruncSeries w_series(std::uint64_t k, const FieldElement& alpha, int n) {
  const FieldSpec& K = alpha.field();
  if (k == 0 || k % K.p() == 0) throw std::invalid_argument("w_series: k must be coprime to p");
  if (alpha.is_zero()) throw std::invalid_argument("w_series: alpha must be nonzero");
  TruncSeries s(K, n);
  std::uint64_t e = k;
  for (std::uint64_t i = 0; e <= static_cast<std::uint64_t>(n); ++i, e *= K.p()) s.set(static_cast<int>(e), alpha.frobenius(i));
  return s;
}

/// k^{-1} D[E_p(alpha X^k)], straight from the definition.
inline TruncSeries w_series_by_definition(std::uint64_t k, const FieldElement& alpha, int n) {
  const FieldSpec& K = alpha.field();
  if (k == 0 || k % K.p() == 0) throw std::invalid_argument("w_series: k must be coprime to p");
  const UnitSeries e = artin_hasse(K.p(), n, K);
  const TruncSeries inner = TruncSeries::monomial(K, n, static_cast<int>(std::min<std::uint64_t>(k, n + 1)), alpha);
  const UnitSeries f(ps_compose(e, inner));
  return K.from_int(static_cast<std::int64_t>(k % K.p())).inv() * log_deriv(f);
}

/// Closed form of M_{k,alpha,ell,beta}:
/// W_{k,alpha} + sum_{i>=0} sum_{j>=1} C(p^i k - 1, j) alpha^{p^i} beta^j X^{p^i k + j(q^ell - 1)}.
inline TruncSeries m_series(std::uint64_t k, const FieldElement& alpha, std::uint32_t ell, const FieldElement& beta,
                            const PrimePower& pq, int n) {
  const FieldSpec& K = alpha.field();
  if (K.p() != pq.p) throw std::invalid_argument("m_series: characteristic mismatch");
  if (alpha.is_zero() || beta.is_zero()) throw std::invalid_argument("m_series: alpha and beta must be nonzero");
  TruncSeries s = w_series(k, alpha, n);
  const std::uint64_t big_q = ipow(pq.q, ell);
  const std::uint64_t step = big_q - 1;
  const auto limit = static_cast<std::uint64_t>(n);
  std::uint64_t pik = k;
  for (std::uint64_t i = 0; pik <= limit; ++i, pik *= pq.p) {
    const FieldElement a = alpha.frobenius(i);
    FieldElement bj = beta;
    for (std::uint64_t j = 1; pik + j * step <= limit; ++j, bj *= beta) {
      const std::uint32_t b = lucas_binom<std::uint64_t>(pik - 1, j, pq.p);
      if (b != 0) s.add_to(static_cast<int>(pik + j * step), K.from_int(b) * a * bj);
    }
  }
  return s;
}

/// k^{-1} D[E_p(alpha (X + beta X^{q^ell})^k)], straight from the definition.
inline TruncSeries m_series_by_definition(std::uint64_t k, const FieldElement& alpha, std::uint32_t ell,
                                          const FieldElement& beta, const PrimePower& pq, int n) {
  const FieldSpec& K = alpha.field();
  if (k == 0 || k % K.p() == 0) throw std::invalid_argument("m_series: k must be coprime to p");
  const std::uint64_t big_q = ipow(pq.q, ell);
  TruncSeries gen = TruncSeries::x(K, n);
  if (big_q <= static_cast<std::uint64_t>(n)) gen.set(static_cast<int>(big_q), beta);
  const TruncSeries inner = alpha * ps_pow(gen, k);
  const UnitSeries f(ps_compose(artin_hasse(K.p(), n, K), inner));
  return K.from_int(static_cast<std::int64_t>(k % K.p())).inv() * log_deriv(f);
}

/// The value psi_q takes on M_{k,alpha,ell,beta}:
/// alpha X^{k+1} + sum_{ell | f} (-1)^{f/ell} alpha^{q^f} beta^{(q^f-1)/(q^ell-1)} X^{q^f (k+1)}
/// when k is q-critical, else 0. Precision n.
inline TruncSeries nuff_closed_form(std::uint64_t k, const FieldElement& alpha, std::uint32_t ell,
                                    const FieldElement& beta, const PrimePower& pq, int n) {
  const FieldSpec& K = alpha.field();
  TruncSeries s(K, n);
  if (!is_critical(k, pq)) return s;
  const auto limit = static_cast<std::uint64_t>(n);
  if (k + 1 <= limit) s.set(static_cast<int>(k + 1), alpha);
  const std::uint64_t ql = ipow(pq.q, ell);
  std::uint64_t qf = ql;
  for (std::uint64_t blocks = 1; qf * (k + 1) <= limit; ++blocks, qf *= ql) {
    const std::uint64_t f = blocks * ell;
    const FieldElement sign = K.from_int(blocks % 2 == 0 ? 1 : -1);
    const FieldElement a = alpha.frobenius(static_cast<std::uint64_t>(pq.lambda) * f);
    const FieldElement b = beta.pow((qf - 1) / (ql - 1));
    s.add_to(static_cast<int>(qf * (k + 1)), sign * a * b);
  }
  return s;
}

// ---------------------------------------------------------------------------
// seeded random inputs
//
// Generator: std::mt19937_64 seeded with the given seed. Field coordinates
// are consumed in order, each as (next draw) mod p. Units redraw the
// constant term until it is nonzero.

inline UnitSeries random_unit(const FieldSpec& K, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TruncSeries s(K, n);
  s.set(0, random_unit_element(K, rng));
  for (int i = 1; i <= n; ++i) s.set(i, random_element(K, rng));
  return UnitSeries(std::move(s));
}

/// Composition of `factors` random generators X + beta X^{q^ell}, q^ell <= n.
inline GammaSeries random_gamma(const PrimePower& pq, const FieldSpec& K, int n, std::uint64_t seed, int factors) {
  std::mt19937_64 rng(seed);
  GammaSeries g = GammaSeries::identity(K, pq, n);
  const std::uint32_t top = AdditiveSeries(K, pq, n).max_index();
  if (top == 0) return g;
  for (int t = 0; t < factors; ++t) {
    const auto ell = static_cast<std::uint32_t>(1 + rng() % top);
    const FieldElement beta = random_unit_element(K, rng);
    g = gamma_compose(g, GammaSeries(AdditiveSeries::generator(K, pq, n, ell, beta)));
  }
  return g;
}

}  // namespace qcrit
