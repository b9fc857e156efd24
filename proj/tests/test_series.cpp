#include <gtest/gtest.h>

#include <random>

#include "qcrit/digits.hpp"
#include "qcrit/generators.hpp"
#include "qcrit/series.hpp"

using namespace qcrit;

namespace {

struct Case {
  std::uint32_t p, lambda;
  int n;
};
const std::vector<Case> kCases = {{2, 1, 1}, {2, 1, 3}, {2, 2, 2}, {2, 2, 4}, {3, 1, 2}, {3, 2, 2}, {5, 1, 1}};

// schoolbook product, no sparsity shortcuts
TruncSeries naive_mul(const TruncSeries& a, const TruncSeries& b) {
  const int n = std::min(a.prec(), b.prec());
  TruncSeries r(a.field(), n);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) r.set(i + j, r[i + j] + a[i] * b[j]);
  return r;
}

// sum f_i G^i with explicit powers
TruncSeries naive_compose(const TruncSeries& f, const TruncSeries& g) {
  const int n = std::min(f.prec(), g.prec());
  TruncSeries r(f.field(), n), pw = TruncSeries::constant(f.field(), n, f.field().one());
  for (int i = 0; i <= n; ++i) {
    r += f[i] * pw;
    pw = naive_mul(pw, g.truncated(n));
  }
  return r;
}

TruncSeries random_series(const FieldSpec& K, int n, std::mt19937_64& rng, bool zero_constant = false) {
  TruncSeries s(K, n);
  for (int i = zero_constant ? 1 : 0; i <= n; ++i) s.set(i, random_element(K, rng));
  return s;
}

}  // namespace

TEST(Series, BasicsAndExamples) {
  const FieldSpec& F2 = field_make(2, 1);
  const int n = 20;
  const TruncSeries one = TruncSeries::constant(F2, n, F2.one());
  TruncSeries onepx = one;
  onepx.set(1, F2.one());
  const TruncSeries inv = ps_inv_mult(UnitSeries(onepx)).series();
  for (int i = 0; i <= n; ++i) EXPECT_TRUE(inv[i].is_one());
  EXPECT_EQ(ps_mul(inv, onepx), one);
  EXPECT_EQ(ps_mul(one, onepx), onepx);
  EXPECT_TRUE(ps_derivative(TruncSeries::monomial(F2, n, 2, F2.one())).is_zero());

  const TruncSeries x2 = TruncSeries::monomial(F2, n, 2, F2.one());
  TruncSeries xx2 = TruncSeries::x(F2, n);
  xx2.set(2, F2.one());
  TruncSeries want = x2;
  want.set(4, F2.one());
  EXPECT_EQ(ps_compose(x2, xx2), want);
  EXPECT_EQ(ps_compose(TruncSeries::x(F2, n), xx2), xx2);
  EXPECT_EQ(ps_compose(xx2, TruncSeries::x(F2, n)), xx2);
  EXPECT_THROW(ps_compose(xx2, one), std::invalid_argument);
  EXPECT_THROW(UnitSeries(TruncSeries::x(F2, n)), std::invalid_argument);

  // D[1+X] = X/(1+X) = X + X^2 + ... in char 2
  const TruncSeries d = log_deriv(UnitSeries(onepx));
  EXPECT_TRUE(d[0].is_zero());
  for (int i = 1; i <= n; ++i) EXPECT_TRUE(d[i].is_one());
  EXPECT_TRUE(log_deriv(UnitSeries(TruncSeries::constant(F2, n, F2.one()))).is_zero());

  const FieldSpec& F4 = field_make(2, 2);
  const auto a = F4.gen();
  EXPECT_EQ(scale_arg(TruncSeries::monomial(F4, n, 2, F4.one()), a), TruncSeries::monomial(F4, n, 2, a * a));
}

TEST(Series, RingOpsAgainstNaiveOracles) {
  std::mt19937_64 rng(3);
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    for (int t = 0; t < 5; ++t) {
      const int n = 40;
      const TruncSeries a = random_series(K, n, rng), b = random_series(K, n, rng);
      const TruncSeries g = random_series(K, n, rng, true);
      EXPECT_EQ(ps_mul(a, b), naive_mul(a, b));
      EXPECT_EQ(ps_compose(a, g), naive_compose(a, g));
      TruncSeries unit = a;
      unit.set(0, random_unit_element(K, rng));
      const TruncSeries one = TruncSeries::constant(K, n, K.one());
      EXPECT_EQ(ps_mul(unit, ps_inv_mult(UnitSeries(unit)).series()), one);
      // ps_pow by repeated naive products
      TruncSeries pw = one;
      for (int e = 0; e < 7; ++e) pw = naive_mul(pw, a);
      EXPECT_EQ(ps_pow(a, 7), pw);
      // derivative: product rule
      const TruncSeries lhs = ps_derivative(ps_mul(a, b));
      const TruncSeries rhs = ps_mul(ps_derivative(a), b.truncated(n - 1)) + ps_mul(a.truncated(n - 1), ps_derivative(b));
      EXPECT_TRUE(agree(lhs, rhs));
    }
  }
}

TEST(Series, LogDerivIsHomomorphismWithFactoidStructure) {
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const UnitSeries f = random_unit(K, 128, 100 + s), g = random_unit(K, 128, 200 + s);
      const TruncSeries lhs = log_deriv(UnitSeries(ps_mul(f, g)));
      EXPECT_EQ(lhs, log_deriv(f) + log_deriv(g));
      EXPECT_TRUE(in_log_deriv_image(log_deriv(f)));
      // X F'/F computed with ps_derivative and ps_inv_mult
      const TruncSeries xdf = ps_mul(TruncSeries::x(K, 127), ps_derivative(f));
      const TruncSeries via_quot = ps_mul(xdf, ps_inv_mult(f).series().truncated(127));
      EXPECT_TRUE(agree(log_deriv(f), via_quot));
    }
  }
}

TEST(Series, SolveLogDerivRoundTrip) {
  const FieldSpec& F2 = field_make(2, 1);
  EXPECT_EQ(solve_log_deriv(TruncSeries(F2, 30)).series(), TruncSeries::constant(F2, 30, F2.one()));
  std::mt19937_64 rng(5);
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    for (int t = 0; t < 10; ++t) {
      TruncSeries target(K, 96);
      for (int i = 1; i <= 96; ++i)
        target.set(i, i % static_cast<int>(c.p) ? random_element(K, rng) : target[i / static_cast<int>(c.p)].frobenius(1));
      ASSERT_TRUE(in_log_deriv_image(target));
      const UnitSeries f = solve_log_deriv(target);
      EXPECT_EQ(log_deriv(f), target);
    }
  }
  // a target violating a_{2i} = a_i^2 is not in the image
  TruncSeries bad(F2, 8);
  bad.set(1, F2.one());
  EXPECT_FALSE(in_log_deriv_image(bad));
  EXPECT_THROW(solve_log_deriv(bad), std::invalid_argument);
}

TEST(Series, ArtinHasseAgainstExactExponential) {
  // E_p mod p for degrees 0..30, from exp(sum X^{p^i}/p^i) expanded over Q
  const std::vector<std::uint32_t> e2 = {1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0,
                                         1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0};
  const std::vector<std::uint32_t> e3 = {1, 1, 2, 2, 0, 1, 0, 0, 2, 2, 0, 2, 0, 0, 0, 1,
                                         1, 0, 2, 0, 1, 2, 2, 0, 0, 0, 0, 0, 1, 2, 2};
  const std::vector<std::uint32_t> e5 = {1, 1, 3, 1, 4, 0, 1, 2, 1, 0, 0, 1, 4, 0, 0, 1,
                                         2, 3, 1, 4, 2, 4, 1, 4, 2, 2, 2, 3, 1, 3, 3};
  EXPECT_EQ(artin_hasse_residues(2, 30), e2);
  EXPECT_EQ(artin_hasse_residues(3, 30), e3);
  EXPECT_EQ(artin_hasse_residues(5, 30), e5);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const FieldSpec& K = field_make(p, 1);
    const TruncSeries d = log_deriv(artin_hasse(p, 200, K));
    TruncSeries want(K, 200);
    for (std::uint64_t e = 1; e <= 200; e *= p) want.set(static_cast<int>(e), K.one());
    EXPECT_EQ(d, want) << "p=" << p;
    EXPECT_EQ(w_series(1, K.one(), 200), want);
  }
}

TEST(Series, WSeriesMatchesDefinition) {
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    std::mt19937_64 rng(c.p * 100 + c.n);
    for (std::uint64_t k = 1; k <= 40; ++k) {
      if (k % c.p == 0) continue;
      const auto alpha = random_unit_element(K, rng);
      EXPECT_EQ(w_series(k, alpha, 100), w_series_by_definition(k, alpha, 100)) << k;
    }
  }
}

TEST(Series, MSeriesMatchesDefinition) {
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    const PrimePower pq = PrimePower::make(c.p, c.lambda);
    std::mt19937_64 rng(c.p * 1000 + c.n);
    for (std::uint64_t k = 1; k <= 20; ++k) {
      if (k % c.p == 0) continue;
      for (std::uint32_t ell = 1; ell <= 2; ++ell) {
        const auto alpha = random_unit_element(K, rng), beta = random_unit_element(K, rng);
        EXPECT_EQ(m_series(k, alpha, ell, beta, pq, 80), m_series_by_definition(k, alpha, ell, beta, pq, 80));
      }
    }
  }
  // no admissible exponent within range: M is just W
  const FieldSpec& F4 = field_make(2, 2);
  const PrimePower q4 = PrimePower::make(2, 2);
  EXPECT_EQ(m_series(1, F4.one(), 3, F4.gen(), q4, 60), w_series(1, F4.one(), 60));
}

TEST(Series, PsiOnSimpleInputs) {
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    const PrimePower pq = PrimePower::make(c.p, c.lambda);
    EXPECT_TRUE(psi_q(TruncSeries(K, 50), pq).is_zero());
    for (std::uint64_t k = 1; k <= 49; ++k) {
      if (k % c.p == 0) continue;
      const TruncSeries got = psi_q(w_series(k, K.one(), 50), pq);
      const TruncSeries want =
          is_critical(k, pq) ? TruncSeries::monomial(K, 51, static_cast<int>(k + 1), K.one()) : TruncSeries(K, 51);
      EXPECT_EQ(got, want) << "k=" << k;
    }
    if (c.lambda == 1) {
      const TruncSeries got = psi_q(w_series(1, K.one(), 50), pq);
      EXPECT_EQ(got, TruncSeries::monomial(K, 51, 2, K.one()));
    }
  }
  // {k+1 : k in C_q} is stable under multiplication by q
  const PrimePower q4 = PrimePower::make(2, 2);
  for (std::uint64_t k = 1; k < 2000; ++k) {
    if (is_critical(k, q4)) {
      EXPECT_TRUE(is_critical(4 * (k + 1) - 1, q4));
    }
  }
}

TEST(Series, GammaInverseAgainstClosedFormAndReversion) {
  for (const auto& c : kCases) {
    const FieldSpec& K = field_make(c.p, c.n);
    const PrimePower pq = PrimePower::make(c.p, c.lambda);
    const int n = 100;
    const AdditiveSeries id = AdditiveSeries::identity(K, pq, n);
    EXPECT_EQ(gamma_inverse(GammaSeries(id)).additive(), id);
    std::mt19937_64 rng(c.p + 17 * c.n);
    for (std::uint32_t ell = 1; ipow(pq.q, ell) <= static_cast<std::uint64_t>(n); ++ell) {
      const auto beta = random_unit_element(K, rng);
      const GammaSeries g(AdditiveSeries::generator(K, pq, n, ell, beta));
      // sum_i (-1)^i beta^{(q^{ell i} - 1)/(q^ell - 1)} X^{q^{ell i}}
      AdditiveSeries want(K, pq, n);
      const std::uint64_t ql = ipow(pq.q, ell);
      std::uint64_t qli = 1;
      for (std::uint32_t i = 0; qli <= static_cast<std::uint64_t>(n); ++i, qli *= ql) {
        const auto sign = K.from_int(i % 2 ? -1 : 1);
        want.set(i * ell, sign * beta.pow((qli - 1) / (ql - 1)));
      }
      const GammaSeries h = gamma_inverse(g);
      EXPECT_EQ(h.additive(), want) << "ell=" << ell;
      EXPECT_EQ(ps_compose(want.to_dense(), g.to_dense()), TruncSeries::x(K, n));
      EXPECT_EQ(ps_compose(g.to_dense(), want.to_dense()), TruncSeries::x(K, n));
      EXPECT_EQ(h.to_dense(), ps_reverse(g.to_dense()));
    }
    for (std::uint64_t s = 0; s < 5; ++s) {
      const GammaSeries g = random_gamma(pq, K, n, s, 3);
      const GammaSeries h = gamma_inverse(g);
      EXPECT_EQ(h.to_dense(), ps_reverse(g.to_dense()));
      EXPECT_EQ(gamma_compose(g, h).additive(), id);
      EXPECT_EQ(gamma_compose(g, h).to_dense(), ps_compose(g.to_dense(), h.to_dense()));
    }
  }
}

TEST(Series, ApplyAdditive) {
  const FieldSpec& K = field_make(2, 2);
  const PrimePower pq = PrimePower::make(2, 2);
  std::mt19937_64 rng(9);
  const TruncSeries g = random_series(K, 64, rng, true);
  EXPECT_EQ(apply_additive(AdditiveSeries::identity(K, pq, 64), g), g);
  AdditiveSeries rho(K, pq, 64);
  rho.set(0, K.gen());
  rho.set(1, K.one());
  rho.set(2, K.gen() * K.gen());
  TruncSeries want(K, 64);
  want.set(3, K.gen());
  want.set(12, K.one());
  want.set(48, K.gen() * K.gen());
  EXPECT_EQ(apply_additive(rho, TruncSeries::monomial(K, 64, 3, K.one())), want);
  EXPECT_EQ(apply_additive(rho, g), ps_compose(rho.to_dense(), g));
  EXPECT_THROW(rho.set(4, K.one()), std::out_of_range);
}

TEST(Series, RandomInputsAreDeterministic) {
  const FieldSpec& K = field_make(3, 2);
  const PrimePower pq = PrimePower::make(3, 1);
  EXPECT_EQ(random_unit(K, 50, 42).series(), random_unit(K, 50, 42).series());
  EXPECT_NE(random_unit(K, 50, 42).series(), random_unit(K, 50, 43).series());
  EXPECT_EQ(random_gamma(pq, K, 50, 7, 3).additive(), random_gamma(pq, K, 50, 7, 3).additive());
  EXPECT_EQ(random_gamma(pq, K, 50, 7, 0).additive(), AdditiveSeries::identity(K, pq, 50));
}
