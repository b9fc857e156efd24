#pragma once

// Brute-force reference computations. Nothing in the production paths
// (digits, series, generators) calls into this header; it backs the
// verification harness and the unit tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcrit/digits.hpp"

namespace qcrit::oracle {

/// binomial(n, k) from factorials, exactly; 0 unless 0 <= k <= n.
inline boost::multiprecision::cpp_int binomial(std::uint64_t n, std::uint64_t k) {
  using boost::multiprecision::cpp_int;
  if (k > n) return 0;
  cpp_int num = 1, den = 1;
  for (std::uint64_t i = 1; i <= n; ++i) num *= i;
  for (std::uint64_t i = 1; i <= k; ++i) den *= i;
  for (std::uint64_t i = 1; i <= n - k; ++i) den *= i;
  return num / den;
}

/// Classes p^i c mod q-1 for i >= 0, found by iterating until the orbit closes.
inline std::vector<std::uint64_t> orbit_classes(std::uint64_t c, const PrimePower& pq) {
  const std::uint64_t mod = pq.q - 1;
  std::vector<std::uint64_t> seen;
  std::uint64_t x = c % mod;
  while (std::find(seen.begin(), seen.end(), x) == seen.end()) {
    seen.push_back(x);
    x = x * pq.p % mod;
  }
  return seen;
}

/// Per residue class r mod q-1: the least p-core and the <=_p-least element
/// among integers n <= bound with (n,p) = 1 and n = r mod q-1.
///
/// The scan bound is q p^{2 lambda}. Both minima over an infinite class are
/// attained below q whenever mu_q < q, so the table is exact under that
/// bound; a disagreement with the fast path is reported, never trusted.
class ClassTable {
 public:
  ClassTable(const PrimePower& pq, std::uint64_t bound) : pq_(pq), bound_(bound) {
    const std::uint64_t mod = pq.q - 1;
    constexpr auto none = std::numeric_limits<std::uint64_t>::max();
    min_core_.assign(mod, none);
    min_elem_.assign(mod, 0);
    for (std::uint64_t n = 1; n <= bound; ++n) {
      if (n % pq.p == 0) continue;
      const std::uint64_t r = n % mod;
      min_core_[r] = std::min(min_core_[r], p_core(n, pq.p));
      if (min_elem_[r] == 0 || digital_cmp(n, min_elem_[r], pq.p) < 0) min_elem_[r] = n;
    }
  }

  static std::uint64_t default_bound(const PrimePower& pq) { return pq.q * ipow(pq.p, 2 * pq.lambda); }

  std::uint64_t bound() const { return bound_; }

  /// min kappa_p over O_q(c), restricted to the scan bound.
  std::uint64_t min_core(std::uint64_t c) const {
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (auto r : orbit_classes(c, pq_)) best = std::min(best, min_core_[r]);
    return best;
  }

  /// <=_p-least element of O_q(c), restricted to the scan bound.
  std::uint64_t mu(std::uint64_t c) const {
    std::uint64_t best = 0;
    for (auto r : orbit_classes(c, pq_)) {
      const std::uint64_t cand = min_elem_[r];
      if (cand == 0) continue;
      if (best == 0 || digital_cmp(cand, best, pq_.p) < 0) best = cand;
    }
    return best;
  }

 private:
  PrimePower pq_;
  std::uint64_t bound_;
  std::vector<std::uint64_t> min_core_;
  std::vector<std::uint64_t> min_elem_;
};

/// Literal <=_p-minimum over O_q(c) n [1, bound].
inline std::uint64_t mu_scan(std::uint64_t c, const PrimePower& pq, std::uint64_t bound) {
  const auto classes = orbit_classes(c, pq);
  std::uint64_t best = 0;
  for (std::uint64_t n = 1; n <= bound; ++n) {
    if (n % pq.p == 0) continue;
    if (std::find(classes.begin(), classes.end(), n % (pq.q - 1)) == classes.end()) continue;
    if (best == 0 || digital_cmp(n, best, pq.p) < 0) best = n;
  }
  return best;
}

}  // namespace qcrit::oracle
