#include <gtest/gtest.h>

#include <random>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcrit/digits.hpp"
#include "qcrit/oracles.hpp"

using namespace qcrit;
using boost::multiprecision::cpp_int;

namespace {

const std::vector<std::pair<std::uint32_t, std::uint32_t>> kGrid = {{2, 1}, {2, 2}, {2, 4}, {3, 1}, {3, 2}, {5, 1}};

// kappa_p by the definition: strip trailing 0's, then trailing (p-1)'s.
std::uint64_t core_by_strings(std::uint64_t n, std::uint32_t p) {
  auto d = to_digits(n, p).digits;
  while (!d.empty() && d.back() == 0) d.pop_back();
  while (!d.empty() && d.back() == p - 1) d.pop_back();
  return from_digits(DigitString{p, d});
}

}  // namespace

TEST(Digits, Expansions) {
  EXPECT_EQ(to_digits(39u, 2).digits, (std::vector<std::uint32_t>{1, 0, 0, 1, 1, 1}));
  EXPECT_EQ(to_digits(39u, 2, 10).digits, (std::vector<std::uint32_t>{0, 0, 0, 0, 1, 0, 0, 1, 1, 1}));
  EXPECT_TRUE(to_digits(0u, 3).digits.empty());
  EXPECT_THROW(to_digits(39u, 2, 5), std::invalid_argument);
  EXPECT_EQ(to_digits(39u, 2, 10).to_string(), "0000100111");
  EXPECT_FALSE(to_digits(39u, 2, 10).is_minimal());
}

TEST(Digits, RoundTrip) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint64_t n = 0; n < 1000000; n += (p == 2 ? 1 : 3)) ASSERT_EQ(from_digits(to_digits(n, p)), n);
  const cpp_int big = cpp_int(1) << 200;
  EXPECT_EQ(from_digits<cpp_int>(to_digits<cpp_int>(big + 12345, 7)), big + 12345);
}

TEST(Digits, LucasMatchesFactorialOracle) {
  EXPECT_EQ(lucas_binom<std::uint64_t>(5, 2, 2), 0u);
  EXPECT_EQ(lucas_binom<std::uint64_t>(17, 0, 3), 1u);
  EXPECT_EQ(lucas_binom<std::uint64_t>(3, 5, 3), 0u);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (std::uint64_t m = 0; m <= 300; ++m) {
      for (std::uint64_t k = 0; k <= m + 1; ++k) {
        const cpp_int expect = oracle::binomial(m, k) % p;
        ASSERT_EQ(lucas_binom<std::uint64_t>(m, k, p), static_cast<std::uint32_t>(expect)) << m << " " << k << " " << p;
        if (m % 37 == 0) {
          ASSERT_EQ(lucas_binom<cpp_int>(m, k, p), static_cast<std::uint32_t>(expect));
        }
      }
    }
  }
}

TEST(Digits, LucasSignAtCriticalExponents) {
  // C(q^f k - 1, (q^f - 1)/(q^ell - 1)) = (-1)^{f/ell} mod p for k in C_q, ell | f
  for (auto [p, lambda] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {3, 2}, {5, 1}}) {
    const PrimePower pq = PrimePower::make(p, lambda);
    for (std::uint64_t k = 1; k < 60; ++k) {
      if (!is_critical(k, pq)) continue;
      for (std::uint32_t ell = 1; ell <= 2; ++ell) {
        for (std::uint32_t f = ell; f <= 4; f += ell) {
          const cpp_int qf = cpp_int(ipow(pq.q, f));
          const cpp_int ql = cpp_int(ipow(pq.q, ell));
          const cpp_int m = qf * k - 1;
          const cpp_int j = (qf - 1) / (ql - 1);
          const std::uint32_t want = (f / ell) % 2 == 0 ? 1 : p - 1;
          EXPECT_EQ(lucas_binom<cpp_int>(m, j, p), want) << "p=" << p << " k=" << k << " f=" << f;
          if (f * lambda <= 3) {
            const auto top = static_cast<std::uint64_t>(m), low = static_cast<std::uint64_t>(j);
            EXPECT_EQ(static_cast<std::uint32_t>(oracle::binomial(top, low) % p), want);
          }
        }
      }
    }
  }
}

TEST(Digits, OrdTauCoreDefect) {
  EXPECT_EQ(ord_p<std::uint64_t>(40, 2), 3u);
  EXPECT_EQ(ord_p<std::uint64_t>(963, 3), 2u);
  EXPECT_EQ(tau_p<std::uint64_t>(963, 3), 107u);
  EXPECT_EQ(ord_p<std::uint64_t>(1, 5), 0u);
  EXPECT_EQ(p_core<std::uint64_t>(963, 3), 3u);
  EXPECT_EQ(p_core<std::uint64_t>(39, 2), 4u);
  EXPECT_EQ(p_defect<std::uint64_t>(963, 3), 2u);
  EXPECT_EQ(p_defect<std::uint64_t>(1, 2), 0u);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    EXPECT_EQ(p_defect<std::uint64_t>(p - 1, p), 0u);
    for (std::uint64_t k = 1; k <= 5; ++k)
      for (std::uint64_t l = 1; l <= 5; ++l) EXPECT_EQ(p_core(ipow(p, k - 1) * (ipow(p, l) - 1), p), 0u);
    for (std::uint64_t n = 1; n < 20000; ++n) ASSERT_EQ(p_core(n, p), core_by_strings(n, p)) << n;
  }
  EXPECT_THROW(p_core<std::uint64_t>(0, 2), std::invalid_argument);
  const cpp_int big = (cpp_int(1) << 130) * 5 - 1;  // 100 followed by 130 ones, binary
  EXPECT_EQ(p_core<cpp_int>(big, 2), 4);
  EXPECT_EQ(p_defect<cpp_int>(big, 2), 3u);
}

TEST(Digits, DigitalOrder) {
  EXPECT_EQ(digital_cmp<std::uint64_t>(3, 6, 2), std::strong_ordering::less);
  EXPECT_EQ(digital_cmp<std::uint64_t>(2, 3, 2), std::strong_ordering::less);
  EXPECT_EQ(digital_cmp<std::uint64_t>(17, 17, 3), std::strong_ordering::equal);
  EXPECT_THROW(digital_cmp<std::uint64_t>(0, 3, 2), std::invalid_argument);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const std::uint64_t top = 120;
    for (std::uint64_t a = 1; a < 500; ++a) {
      for (std::uint64_t b = 1; b < 500; ++b) {
        const auto ab = digital_cmp(a, b, p), ba = digital_cmp(b, a, p);
        ASSERT_EQ(ab == 0, a == b);
        ASSERT_EQ(ab < 0, ba > 0);
        if (p_defect(a, p) < p_defect(b, p)) {
          ASSERT_TRUE(ab < 0);
        }
        if (ab <= 0) {
          ASSERT_LE(p_defect(a, p), p_defect(b, p));
        }
      }
    }
    for (std::uint64_t a = 1; a < top; ++a)
      for (std::uint64_t b = 1; b < top; ++b)
        for (std::uint64_t c = 1; c < top; ++c)
          if (digital_cmp(a, b, p) < 0 && digital_cmp(b, c, p) < 0) {
            ASSERT_TRUE(digital_cmp(a, c, p) < 0);
          }
  }
}

TEST(Digits, Brackets) {
  const PrimePower pq = PrimePower::make(2, 2);
  EXPECT_EQ(bracket_q(2, pq), 2u);
  EXPECT_EQ(bracket_q(3, pq), 3u);
  EXPECT_EQ(bracket_q(6, pq), 3u);
  EXPECT_EQ(bracket_q(6, pq), 3u);
  for (std::uint32_t lambda = 2; lambda <= 5; ++lambda) {
    const PrimePower q = PrimePower::make(2, lambda);
    EXPECT_EQ(bracket_q(q.q + 2, q), 3u);
    EXPECT_EQ(bracket_q(q.q - 1, q), q.q - 1);
  }
  EXPECT_EQ(o_q_members(1, pq, 3), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(o_q_members(3, pq, 3), (std::vector<std::uint64_t>{3}));
  EXPECT_THROW(PrimePower::make(2, 64), std::invalid_argument);
  EXPECT_THROW(PrimePower::make(6, 1), std::invalid_argument);
}

TEST(Digits, MuFastPathMatchesScan) {
  for (auto [p, lambda] : kGrid) {
    const PrimePower pq = PrimePower::make(p, lambda);
    const std::uint64_t bound = oracle::ClassTable::default_bound(pq);
    const oracle::ClassTable table(pq, bound);
    for (std::uint64_t c = 1; c <= 1000; ++c) {
      const std::uint64_t mu = mu_q(c, pq);
      ASSERT_EQ(mu, table.mu(c)) << "p=" << p << " lambda=" << lambda << " c=" << c;
      if (c % 97 == 0) {
        ASSERT_EQ(mu, oracle::mu_scan(c, pq, bound));
      }
      ASSERT_LT(mu, pq.q);
      ASSERT_TRUE(in_o_q(mu, c, pq));
    }
    if (lambda == 1) {
      for (std::uint64_t c = 1; c <= 100; ++c) EXPECT_EQ(mu_q(c, pq), bracket_q(c, pq));
    }
  }
  EXPECT_EQ(mu_q(39, PrimePower::make(2, 10)), 39u);
}

TEST(Digits, CriticalSets) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    std::vector<std::uint64_t> want;
    for (std::uint64_t c = 1; c < p; ++c) want.push_back(c);
    EXPECT_EQ(critical_base_set(PrimePower::make(p, 1)), want);
  }
  EXPECT_EQ(critical_base_set(PrimePower::make(2, 2)), (std::vector<std::uint64_t>{1, 3}));
  const auto c1024 = critical_base_set(PrimePower::make(2, 10));
  EXPECT_TRUE(std::binary_search(c1024.begin(), c1024.end(), 39u));

  for (auto [p, lambda] : kGrid) {
    const PrimePower pq = PrimePower::make(p, lambda);
    std::set<std::uint64_t> mus;
    for (std::uint64_t c = 1; c < pq.q; ++c) mus.insert(mu_q(c, pq));
    const auto base = critical_base_set(pq);
    EXPECT_EQ(std::set<std::uint64_t>(base.begin(), base.end()), mus);

    // C_q from the definition scan against the three descriptions
    const oracle::ClassTable table(pq, oracle::ClassTable::default_bound(pq));
    std::set<std::uint64_t> residues;
    for (auto c : base) EXPECT_TRUE(residues.insert(c % (pq.q - 1)).second);
    for (std::uint64_t k = 1; k <= 5000; ++k) {
      const bool by_def = k % p != 0 && p_core(k, p) == table.min_core(k);
      ASSERT_EQ(is_critical(k, pq), by_def) << "p=" << p << " lambda=" << lambda << " k=" << k;
      ASSERT_EQ(is_critical_by_digits(k, pq), by_def) << k;
      ASSERT_EQ(critical_decompose(k, pq).has_value(), by_def) << k;
      if (auto d = critical_decompose(k, pq)) {
        ASSERT_TRUE(std::binary_search(base.begin(), base.end(), d->first));
        ASSERT_EQ(ipow(pq.q, d->second) * (d->first + 1) - 1, k);
      }
    }
  }
  const PrimePower q1024 = PrimePower::make(2, 10);
  EXPECT_TRUE(is_critical(40959, q1024));
  EXPECT_FALSE(is_critical(40958, q1024));
  EXPECT_EQ(critical_decompose(40959, q1024), (std::pair<std::uint64_t, std::uint64_t>{39, 1}));
}

TEST(Digits, RotationTableFor39) {
  const auto rows = critical_rotation_table(39, PrimePower::make(2, 10));
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].digits.to_string(), "0000100111");
  std::vector<std::pair<std::uint32_t, std::uint64_t>> struck;
  for (const auto& r : rows)
    if (!r.ignored) struck.emplace_back(r.shift, r.value);
  EXPECT_EQ(struck, (std::vector<std::pair<std::uint32_t, std::uint64_t>>{{0, 4}, {5, 112}, {8, 388}, {9, 132}}));
  EXPECT_EQ(rows[5].struck.to_string(), "1110000");
  EXPECT_EQ(rows[8].struck.to_string(), "110000100");
  EXPECT_EQ(rows[9].struck.to_string(), "10000100");
}

TEST(Digits, AdmissibleAndWitness) {
  EXPECT_TRUE(is_admissible(1, 2, 1, 3, 2));
  EXPECT_FALSE(is_admissible(1, 2, 1, 4, 2));
  const DigitGamesWitness w = digit_games_witness({1, 2, 1, 3}, 2);
  EXPECT_EQ(w.e, 2u);
  EXPECT_EQ(w.f, 1u);
  EXPECT_EQ(w.g, 1u);
  EXPECT_EQ(w.r, 1u);
  EXPECT_THROW(digit_games_witness({1, 2, 1, 4}, 2), std::invalid_argument);
  EXPECT_TRUE(digital_cmp<std::uint64_t>(2, 3, 2) < 0);

  // enumeration matches a direct definition scan, in ascending (m, ell, j)
  for (std::uint32_t p : {2u, 3u}) {
    std::vector<std::array<std::uint64_t, 4>> scan;
    for (std::uint64_t m = 1; m <= 200; ++m)
      for (std::uint64_t ell = 1; ell <= 6; ++ell)
        for (std::uint64_t j = 1; j * (ipow(p, ell) - 1) < m; ++j) {
          const std::uint64_t k = m - j * (ipow(p, ell) - 1);
          const bool ok = m % p != 0 && static_cast<std::uint32_t>(oracle::binomial(k - 1, j) % p) != 0;
          if (ok) scan.push_back({j, k, ell, m});
        }
    std::vector<std::array<std::uint64_t, 4>> got;
    for (const auto& a : admissible_enumerate(p, 200, 6)) got.push_back({a.j, a.k, a.ell, a.m});
    EXPECT_EQ(got, scan) << "p=" << p;
  }
}
