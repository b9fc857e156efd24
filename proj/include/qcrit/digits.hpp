#pragma once

// Base-p integer combinatorics: expansions, Lucas binomials, p-core and
// p-defect, the p-digital well-ordering, q-critical integers and
// p-admissible quadruples.
//
// Functions that only look at digits are templated on the integer type so
// they work for std::uint64_t and for boost::multiprecision::cpp_int alike.
// Everything involving q = p^lambda uses std::uint64_t.

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcrit/field.hpp"

namespace qcrit {

template <class Int>
concept DigitInteger = requires(Int a, Int b) {
  { a / b } -> std::convertible_to<Int>;
  { a % b } -> std::convertible_to<Int>;
  { a * b } -> std::convertible_to<Int>;
  { a + b } -> std::convertible_to<Int>;
  { a - b } -> std::convertible_to<Int>;
  { a < b } -> std::convertible_to<bool>;
  { a == b } -> std::convertible_to<bool>;
};

/// A base-p expansion read most significant digit first. May carry leading
/// zeros; the empty string denotes 0.
struct DigitString {
  std::uint32_t p = 2;
  std::vector<std::uint32_t> digits;

  bool is_minimal() const { return digits.empty() || digits.front() != 0; }
  std::string to_string() const {
    std::string s;
    for (auto d : digits) {
      if (p <= 10) {
        s += static_cast<char>('0' + d);
      } else {
        s += (s.empty() ? "" : ",") + std::to_string(d);
      }
    }
    return s;
  }
  friend bool operator==(const DigitString&, const DigitString&) = default;
};

/// q = p^lambda, always built from (p, lambda).
struct PrimePower {
  std::uint32_t p = 2;
  std::uint32_t lambda = 1;
  std::uint64_t q = 2;

  static PrimePower make(std::uint32_t p, std::uint32_t lambda) {
    if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
    if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < lambda; ++i) {
      if (q > std::numeric_limits<std::uint64_t>::max() / p)
        throw std::invalid_argument("q = p^lambda too large");
      q *= p;
    }
    return {p, lambda, q};
  }
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct AdmissibleQuadruple {
  std::uint64_t j = 0, k = 0, ell = 0, m = 0;
  friend bool operator==(const AdmissibleQuadruple&, const AdmissibleQuadruple&) = default;
};

struct DigitGamesWitness {
  std::uint64_t e = 0, f = 0, g = 0, r = 0;
  friend bool operator==(const DigitGamesWitness&, const DigitGamesWitness&) = default;
};

/// Raised when a bounded check finds an input violating a proven statement.
class LemmaViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<std::uint64_t>::max() / b) throw std::overflow_error("ipow overflow");
    r *= b;
  }
  return r;
}

// ---------------------------------------------------------------------------
// expansions

template <DigitInteger Int = std::uint64_t>
DigitString to_digits(Int n, std::uint32_t p, std::optional<std::size_t> width = std::nullopt) {
  DigitString d{p, {}};
  const Int base(p);
  while (Int(0) < n) {
    d.digits.push_back(static_cast<std::uint32_t>(Int(n % base)));
    n = n / base;
  }
  std::reverse(d.digits.begin(), d.digits.end());
  if (width) {
    if (*width < d.digits.size())
      throw std::invalid_argument("width " + std::to_string(*width) + " below minimal length " +
                                  std::to_string(d.digits.size()));
    d.digits.insert(d.digits.begin(), *width - d.digits.size(), 0);
  }
  return d;
}

template <DigitInteger Int = std::uint64_t>
Int from_digits(const DigitString& d) {
  Int n(0);
  for (auto v : d.digits) {
    if (v >= d.p) throw std::invalid_argument("digit out of range");
    n = n * Int(d.p) + Int(v);
  }
  return n;
}

// ---------------------------------------------------------------------------
// Lucas

namespace detail {
inline std::uint32_t small_binom_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  std::uint64_t num = 1, den = 1;
  for (std::uint32_t t = 0; t < b; ++t) {
    num = num * (a - t) % p;
    den = den * (t + 1) % p;
  }
  return static_cast<std::uint32_t>(num * inv_mod_p(static_cast<std::uint32_t>(den), p) % p);
}
}  // namespace detail

/// binomial(m, k) mod p, digit by digit; zero when k > m.
template <DigitInteger Int = std::uint64_t>
std::uint32_t lucas_binom(Int m, Int k, std::uint32_t p) {
  if (m < k) return 0;
  if constexpr (std::same_as<Int, std::uint64_t>) {
    if (p == 2) return (k & ~m) == 0 ? 1u : 0u;
  }
  const Int base(p);
  std::uint64_t r = 1;
  while (Int(0) < k) {
    const auto mi = static_cast<std::uint32_t>(Int(m % base));
    const auto ki = static_cast<std::uint32_t>(Int(k % base));
    if (ki > mi) return 0;
    r = r * detail::small_binom_mod(mi, ki, p) % p;
    m = m / base;
    k = k / base;
  }
  return static_cast<std::uint32_t>(r);
}

// ---------------------------------------------------------------------------
// orders, cores, defects

template <DigitInteger Int = std::uint64_t>
std::uint64_t ord_p(Int n, std::uint32_t p) {
  if (n == Int(0)) throw std::invalid_argument("ord_p(0) is undefined");
  const Int base(p);
  std::uint64_t k = 0;
  while (Int(n % base) == Int(0)) {
    n = n / base;
    ++k;
  }
  return k;
}

template <DigitInteger Int = std::uint64_t>
Int tau_p(Int n, std::uint32_t p) {
  if (n == Int(0)) throw std::invalid_argument("tau_p(0) is undefined");
  const Int base(p);
  while (Int(n % base) == Int(0)) n = n / base;
  return n;
}

/// kappa_p: drop trailing zeros, then trailing (p-1)'s.
template <DigitInteger Int = std::uint64_t>
Int p_core(const Int& n, std::uint32_t p) {
  if (n == Int(0)) throw std::invalid_argument("p-core of 0 is undefined");
  return Int(tau_p<Int>(Int(tau_p<Int>(n, p) + Int(1)), p) - Int(1));
}

/// delta_p: length of the minimal expansion of kappa_p(n).
template <DigitInteger Int = std::uint64_t>
std::size_t p_defect(const Int& n, std::uint32_t p) {
  return to_digits<Int>(p_core<Int>(n, p), p).digits.size();
}

/// The p-digital well-ordering: compare p-cores, then n / p^{ord_p n}, then n.
template <DigitInteger Int = std::uint64_t>
std::strong_ordering digital_cmp(const Int& m, const Int& n, std::uint32_t p) {
  if (m == Int(0) || n == Int(0)) throw std::invalid_argument("digital_cmp needs positive integers");
  auto three_way = [](const Int& a, const Int& b) {
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  };
  if (auto c = three_way(p_core<Int>(m, p), p_core<Int>(n, p)); c != 0) return c;
  if (auto c = three_way(tau_p<Int>(m, p), tau_p<Int>(n, p)); c != 0) return c;
  return three_way(m, n);
}

// ---------------------------------------------------------------------------
// congruence classes modulo q - 1

/// <c>_q: least positive integer congruent to c mod q-1; lies in (0, q).
inline std::uint64_t bracket_q(std::uint64_t c, const PrimePower& pq) {
  if (c == 0) throw std::invalid_argument("bracket_q needs c >= 1");
  const std::uint64_t r = c % (pq.q - 1);
  return r == 0 ? pq.q - 1 : r;
}

/// Residues p^i c mod q-1 for 0 <= i < lambda (the classes meeting O_q(c)).
inline std::vector<std::uint64_t> orbit_residues(std::uint64_t c, const PrimePower& pq) {
  const std::uint64_t mod = pq.q - 1;
  std::vector<std::uint64_t> r;
  std::uint64_t x = c % mod;
  for (std::uint32_t i = 0; i < pq.lambda; ++i) {
    if (std::find(r.begin(), r.end(), x) == r.end()) r.push_back(x);
    x = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * pq.p) % mod);
  }
  return r;
}

/// n in O_q(c): (n, p) = 1 and n = p^i c mod q-1 for some i >= 0.
inline bool in_o_q(std::uint64_t n, std::uint64_t c, const PrimePower& pq) {
  if (n == 0 || n % pq.p == 0) return false;
  const auto res = orbit_residues(c, pq);
  return std::find(res.begin(), res.end(), n % (pq.q - 1)) != res.end();
}

inline std::vector<std::uint64_t> o_q_members(std::uint64_t c, const PrimePower& pq, std::uint64_t bound) {
  const auto res = orbit_residues(c, pq);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= bound; ++n)
    if (n % pq.p != 0 && std::find(res.begin(), res.end(), n % (pq.q - 1)) != res.end()) out.push_back(n);
  return out;
}

/// mu_q(c), the <=_p-least element of O_q(c).
///
/// The least p-core over O_q(c) equals the least p-core among the rotations
/// <p^i c>_q, 0 <= i < lambda. Every n coprime to p with core k is
/// (k+1)p^g - 1, ordered by g, so the answer is the smallest g landing in
/// one of the orbit's residue classes. The class of (k+1)p^g - 1 depends on
/// g mod lambda, hence g <= lambda suffices.
inline std::uint64_t mu_q(std::uint64_t c, const PrimePower& pq) {
  if (c == 0) throw std::invalid_argument("mu_q needs c >= 1");
  std::uint64_t core = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t x = c;
  for (std::uint32_t i = 0; i < pq.lambda; ++i) {
    core = std::min(core, p_core(bracket_q(x, pq), pq.p));
    x = bracket_q(x, pq) * pq.p;
  }
  const auto res = orbit_residues(c, pq);
  std::uint64_t scale = 1;
  for (std::uint32_t g = 0; g <= pq.lambda; ++g, scale *= pq.p) {
    const std::uint64_t n = (core + 1) * scale - 1;
    if (n >= 1 && n % pq.p != 0 && std::find(res.begin(), res.end(), n % (pq.q - 1)) != res.end()) return n;
  }
  throw LemmaViolation("mu_q: no element of core " + std::to_string(core) + " in O_q(" + std::to_string(c) + ")");
}

/// Membership in C_q^0 straight from the definition: c in (0,q), (c,p)=1 and
/// (c+1)/p^{ord(c+1)} minimal over O_q(c) n (0,q) = {<p^i c>_q coprime to p}.
inline bool is_critical_base(std::uint64_t c, const PrimePower& pq) {
  if (c == 0 || c >= pq.q || c % pq.p == 0) return false;
  const std::uint64_t own = tau_p(c + 1, pq.p);
  std::uint64_t x = c;
  for (std::uint32_t i = 0; i < pq.lambda; ++i) {
    x = bracket_q(x, pq);
    if (x % pq.p != 0 && tau_p(x + 1, pq.p) < own) return false;
    x *= pq.p;
  }
  return true;
}

/// C_q^0 by direct scan of the definition.
inline std::vector<std::uint64_t> critical_base_set(const PrimePower& pq) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t c = 1; c < pq.q; ++c)
    if (is_critical_base(c, pq)) out.push_back(c);
  return out;
}

/// Membership in C_q via (k,p)=1 and kappa_p(k) = kappa_p(mu_q(k)).
inline bool is_critical(std::uint64_t k, const PrimePower& pq) {
  if (k == 0 || k % pq.p == 0) return false;
  return p_core(k, pq.p) == p_core(mu_q(k, pq), pq.p);
}

/// Writes k = q^i (c+1) - 1 with c in C_q^0, if possible.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> critical_decompose(std::uint64_t k,
                                                                                 const PrimePower& pq) {
  if (k == 0) return std::nullopt;
  std::uint64_t x = k + 1;
  std::uint64_t i = 0;
  while (x > pq.q && x % pq.q == 0) {
    x /= pq.q;
    ++i;
  }
  if (x > pq.q || !is_critical_base(x - 1, pq)) return std::nullopt;
  return std::make_pair(x - 1, i);
}

/// Digital description of C_q: the digits of some c in C_q^0 followed by a
/// multiple of lambda copies of p-1.
inline bool is_critical_by_digits(std::uint64_t k, const PrimePower& pq) {
  if (k == 0) return false;
  const DigitString d = to_digits(k, pq.p);
  std::size_t trailing = 0;
  while (trailing < d.digits.size() && d.digits[d.digits.size() - 1 - trailing] == pq.p - 1) ++trailing;
  for (std::size_t strip = 0; strip <= trailing; strip += pq.lambda) {
    DigitString head{pq.p, {d.digits.begin(), d.digits.end() - static_cast<std::ptrdiff_t>(strip)}};
    if (head.digits.size() > pq.lambda) continue;  // c < q has at most lambda digits
    const std::uint64_t c = from_digits(head);
    if (is_critical_base(c, pq)) return true;
  }
  return false;
}

/// One row of the cyclic-rotation table for <c>_q written with lambda digits.
struct RotationRow {
  std::uint32_t shift = 0;   // row i shows <p^i c>_q
  DigitString digits;        // width lambda
  bool ignored = false;      // terminates with a 0
  DigitString struck;        // trailing (p-1)'s and leading 0's removed
  std::uint64_t value = 0;   // kappa_p of the row
};

inline std::vector<RotationRow> critical_rotation_table(std::uint64_t c, const PrimePower& pq) {
  std::vector<RotationRow> rows;
  std::uint64_t x = bracket_q(c, pq);
  for (std::uint32_t i = 0; i < pq.lambda; ++i) {
    RotationRow r;
    r.shift = i;
    r.digits = to_digits(x, pq.p, pq.lambda);
    r.ignored = x % pq.p == 0;
    if (!r.ignored) {
      r.value = p_core(x, pq.p);
      r.struck = to_digits(r.value, pq.p);
    } else {
      r.struck.p = pq.p;
    }
    rows.push_back(std::move(r));
    x = bracket_q(x * pq.p, pq);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// p-admissibility

inline bool is_admissible(std::uint64_t j, std::uint64_t k, std::uint64_t ell, std::uint64_t m, std::uint32_t p) {
  if (j == 0 || k == 0 || ell == 0 || m == 0) return false;
  if (m % p == 0) return false;
  if (ell >= 64 || k > m) return false;
  const std::uint64_t step = ipow(p, ell) - 1;
  if ((m - k) % step != 0 || (m - k) / step != j) return false;
  return lucas_binom<std::uint64_t>(k - 1, j, p) != 0;
}

/// Visits every p-admissible quadruple with m <= m_bound and ell <= ell_bound
/// in ascending (m, ell, j) order.
template <class Visitor>
void for_each_admissible(std::uint32_t p, std::uint64_t m_bound, std::uint64_t ell_bound, Visitor&& visit) {
  for (std::uint64_t m = 1; m <= m_bound; ++m) {
    if (m % p == 0) continue;
    std::uint64_t step = 1;
    for (std::uint64_t ell = 1; ell <= ell_bound; ++ell) {
      step *= p;
      if (step - 1 >= m) break;
      for (std::uint64_t j = 1; j * (step - 1) < m; ++j) {
        const std::uint64_t k = m - j * (step - 1);
        if (lucas_binom<std::uint64_t>(k - 1, j, p) != 0) visit(AdmissibleQuadruple{j, k, ell, m});
      }
    }
  }
}

inline std::vector<AdmissibleQuadruple> admissible_enumerate(std::uint32_t p, std::uint64_t m_bound,
                                                             std::uint64_t ell_bound) {
  std::vector<AdmissibleQuadruple> out;
  for_each_admissible(p, m_bound, ell_bound, [&](const AdmissibleQuadruple& a) { out.push_back(a); });
  return out;
}

/// Computes e = ord_p(m+1), f = ord_p k, g = ord_p(k/p^f + 1) and the unique
/// r in [0, e+ell-1], r = 0 mod ell, with j = (p^r-1)/(p^ell-1) mod p^e.
/// Throws LemmaViolation if r is missing or not unique, or if f+g < e or
/// kappa_p(m) < kappa_p(k).
inline DigitGamesWitness digit_games_witness(const AdmissibleQuadruple& a, std::uint32_t p) {
  if (!is_admissible(a.j, a.k, a.ell, a.m, p)) throw std::invalid_argument("quadruple is not p-admissible");
  DigitGamesWitness w;
  w.e = ord_p(a.m + 1, p);
  w.f = ord_p(a.k, p);
  w.g = ord_p(a.k / ipow(p, w.f) + 1, p);

  const std::uint64_t pe = ipow(p, w.e);
  int found = 0;
  for (std::uint64_t r = 0; r + 1 <= w.e + a.ell; r += a.ell) {
    // (p^r - 1)/(p^ell - 1) = 1 + p^ell + ... + p^{r-ell}, reduced mod p^e
    std::uint64_t s = 0, term = 1 % pe;
    for (std::uint64_t t = 0; t < r / a.ell; ++t) {
      s = (s + term) % pe;
      for (std::uint64_t u = 0; u < a.ell; ++u) term = term * p % pe;
    }
    if (a.j % pe == s % pe) {
      ++found;
      w.r = r;
    }
  }
  const std::string tag = "(" + std::to_string(a.j) + "," + std::to_string(a.k) + "," + std::to_string(a.ell) +
                          "," + std::to_string(a.m) + ")";
  if (found != 1)
    throw LemmaViolation("quadruple " + tag + ": " + std::to_string(found) + " admissible values of r");
  if (w.f + w.g < w.e) throw LemmaViolation("quadruple " + tag + ": f + g < e");
  if (p_core(a.m, p) < p_core(a.k, p)) throw LemmaViolation("quadruple " + tag + ": kappa(m) < kappa(k)");
  return w;
}

}  // namespace qcrit
