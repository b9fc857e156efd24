#pragma once

// Truncated power series over F_{p^n}, the ring R_{q,K} of additive series
// sum a_i X^{q^i} under composition, and the maps linking them: the
// logarithmic derivative D[F] = X F'/F, the projection psi_q onto the
// q-critical exponents, and the left R_{q,K}-action on the target of psi_q.
//
// Precision: a TruncSeries of precision N knows the coefficients of
// X^0 .. X^N. Every operation documents the precision of its result, and
// identity checks compare up to the smaller precision of the two sides.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcrit/digits.hpp"
#include "qcrit/field.hpp"

namespace qcrit {

class TruncSeries {
 public:
  /// The zero series of precision prec.
  TruncSeries(const FieldSpec& f, int prec) : spec_(&f), prec_(prec), c_(static_cast<std::size_t>(prec) + 1, f.zero()) {
    if (prec < 0) throw std::invalid_argument("precision must be nonnegative");
  }

  static TruncSeries monomial(const FieldSpec& f, int prec, int deg, const FieldElement& coeff) {
    TruncSeries s(f, prec);
    if (deg <= prec) s.set(deg, coeff);
    return s;
  }
  static TruncSeries x(const FieldSpec& f, int prec) { return monomial(f, prec, 1, f.one()); }
  static TruncSeries constant(const FieldSpec& f, int prec, const FieldElement& c) { return monomial(f, prec, 0, c); }

  const FieldSpec& field() const { return *spec_; }
  int prec() const { return prec_; }
  const FieldElement& operator[](int i) const { return c_.at(static_cast<std::size_t>(i)); }
  std::span<const FieldElement> coeffs() const { return c_; }

  void set(int i, const FieldElement& v) {
    if (&v.field() != spec_) throw std::invalid_argument("coefficient from a different field");
    c_.at(static_cast<std::size_t>(i)) = v;
  }
  void add_to(int i, const FieldElement& v) { c_.at(static_cast<std::size_t>(i)) += v; }

  /// Index of the first nonzero coefficient, if any within the precision.
  std::optional<int> valuation() const {
    for (int i = 0; i <= prec_; ++i)
      if (!c_[i].is_zero()) return i;
    return std::nullopt;
  }
  bool is_zero() const { return !valuation(); }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int i = 0; i <= prec_; ++i)
      if (!c_[i].is_zero()) s.push_back(i);
    return s;
  }

  TruncSeries truncated(int prec) const {
    if (prec > prec_) throw std::invalid_argument("cannot raise precision");
    TruncSeries r(*spec_, prec);
    for (int i = 0; i <= prec; ++i) r.c_[i] = c_[i];
    return r;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.spec_ == b.spec_ && a.prec_ == b.prec_ && a.c_ == b.c_;
  }

  TruncSeries& operator+=(const TruncSeries& b) {
    check_same(b);
    prec_ = std::min(prec_, b.prec_);
    c_.resize(static_cast<std::size_t>(prec_) + 1);
    for (int i = 0; i <= prec_; ++i) c_[i] += b.c_[i];
    return *this;
  }
  TruncSeries& operator-=(const TruncSeries& b) {
    check_same(b);
    prec_ = std::min(prec_, b.prec_);
    c_.resize(static_cast<std::size_t>(prec_) + 1);
    for (int i = 0; i <= prec_; ++i) c_[i] -= b.c_[i];
    return *this;
  }
  friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
  friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
  friend TruncSeries operator*(const FieldElement& s, TruncSeries a) {
    for (auto& v : a.c_) v = s * v;
    return a;
  }

 private:
  void check_same(const TruncSeries& b) const {
    if (spec_ != b.spec_) throw std::invalid_argument("series over different fields");
  }

  const FieldSpec* spec_;
  int prec_;
  std::vector<FieldElement> c_;
};

/// Compares up to the smaller precision.
inline bool agree(const TruncSeries& a, const TruncSeries& b) {
  if (&a.field() != &b.field()) return false;
  const int n = std::min(a.prec(), b.prec());
  for (int i = 0; i <= n; ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

inline std::optional<int> first_difference(const TruncSeries& a, const TruncSeries& b) {
  const int n = std::min(a.prec(), b.prec());
  for (int i = 0; i <= n; ++i)
    if (!(a[i] == b[i])) return i;
  return std::nullopt;
}

/// Element of K[[X]]^x.
class UnitSeries {
 public:
  explicit UnitSeries(TruncSeries s) : s_(std::move(s)) {
    if (s_[0].is_zero()) throw std::invalid_argument("series with zero constant term is not a unit");
  }
  const TruncSeries& series() const { return s_; }
  operator const TruncSeries&() const { return s_; }

 private:
  TruncSeries s_;
};

// ---------------------------------------------------------------------------
// ring structure of K[[X]]

namespace detail {
// a * b truncated at prec, skipping zero coefficients of both factors
inline TruncSeries mul_to(const TruncSeries& a, const TruncSeries& b, int prec) {
  TruncSeries r(a.field(), prec);
  const auto sb = b.support();
  for (int i = 0; i <= std::min(prec, a.prec()); ++i) {
    if (a[i].is_zero()) continue;
    for (int j : sb) {
      if (i + j > prec) break;
      r.add_to(i + j, a[i] * b[j]);
    }
  }
  return r;
}
}  // namespace detail

/// Cauchy product at precision min(N_F, N_G).
inline TruncSeries ps_mul(const TruncSeries& f, const TruncSeries& g) {
  if (&f.field() != &g.field()) throw std::invalid_argument("series over different fields");
  return detail::mul_to(f, g, std::min(f.prec(), g.prec()));
}
inline TruncSeries operator*(const TruncSeries& f, const TruncSeries& g) { return ps_mul(f, g); }

inline TruncSeries ps_pow(const TruncSeries& f, std::uint64_t e) {
  TruncSeries r = TruncSeries::constant(f.field(), f.prec(), f.field().one());
  TruncSeries b = f;
  while (e) {
    if (e & 1) r = ps_mul(r, b);
    e >>= 1;
    if (e) b = ps_mul(b, b);
  }
  return r;
}

/// Multiplicative inverse at the same precision.
inline UnitSeries ps_inv_mult(const UnitSeries& fu) {
  const TruncSeries& f = fu;
  const int n = f.prec();
  TruncSeries g(f.field(), n);
  const FieldElement inv0 = f[0].inv();
  g.set(0, inv0);
  const auto sf = f.support();
  for (int m = 1; m <= n; ++m) {
    FieldElement s = f.field().zero();
    for (int j : sf) {
      if (j == 0) continue;
      if (j > m) break;
      s += f[j] * g[m - j];
    }
    g.set(m, -(inv0 * s));
  }
  return UnitSeries(std::move(g));
}

/// Formal derivative; precision N-1 (at least 0).
inline TruncSeries ps_derivative(const TruncSeries& f) {
  const int n = std::max(f.prec() - 1, 0);
  TruncSeries d(f.field(), n);
  for (int i = 1; i <= f.prec() && i - 1 <= n; ++i)
    d.set(i - 1, f.field().from_int(i) * f[i]);
  return d;
}

/// f(g(X)) for g(0) = 0, at precision min(N_f, N_g), by Horner's rule in
/// the truncated ring. Only powers up to N / val(g) are needed.
inline TruncSeries ps_compose(const TruncSeries& f, const TruncSeries& g) {
  if (&f.field() != &g.field()) throw std::invalid_argument("series over different fields");
  if (!g[0].is_zero()) throw std::invalid_argument("ps_compose: inner series must vanish at 0");
  const int n = std::min(f.prec(), g.prec());
  const auto v = g.valuation();
  if (!v) return TruncSeries::constant(f.field(), n, f[0]);
  const int top = std::min(f.prec(), n / *v);
  TruncSeries r = TruncSeries::constant(f.field(), n, f[top]);
  for (int i = top - 1; i >= 0; --i) {
    r = detail::mul_to(r, g, n);
    r.add_to(0, f[i]);
  }
  return r;
}

/// Multiplies the argument: F(X) -> F(alpha X).
inline TruncSeries scale_arg(const TruncSeries& f, const FieldElement& alpha) {
  TruncSeries r(f.field(), f.prec());
  FieldElement a = f.field().one();
  for (int i = 0; i <= f.prec(); ++i) {
    r.set(i, f[i] * a);
    a *= alpha;
  }
  return r;
}

// ---------------------------------------------------------------------------
// logarithmic derivative

/// D[F] = X F'/F at the precision of F; constant term 0.
inline TruncSeries log_deriv(const UnitSeries& fu) {
  // From F * D = X F': d_m = f_0^{-1} (m f_m - sum_{0<j<m} f_j d_{m-j}).
  const TruncSeries& f = fu;
  const FieldSpec& K = f.field();
  const int n = f.prec();
  TruncSeries d(K, n);
  const FieldElement inv0 = f[0].inv();
  const auto sf = f.support();
  for (int m = 1; m <= n; ++m) {
    FieldElement s = K.from_int(m) * f[m];
    for (int j : sf) {
      if (j == 0) continue;
      if (j >= m) break;
      s -= f[j] * d[m - j];
    }
    d.set(m, inv0 * s);
  }
  return d;
}

/// True iff T(0) = 0 and a_{pi} = a_i^p for all pi <= N, i.e. T lies in
/// the image of D.
inline bool in_log_deriv_image(const TruncSeries& t) {
  if (!t[0].is_zero()) return false;
  const int p = static_cast<int>(t.field().p());
  for (int i = 1; i * p <= t.prec(); ++i)
    if (!(t[i * p] == t[i].frobenius(1))) return false;
  return true;
}

/// A unit F with D[F] = T. Normalized by F(0) = 1 and f_m = 0 whenever p | m
/// (those coefficients are not determined by T). Throws std::invalid_argument
/// when T is outside the image of D.
inline UnitSeries solve_log_deriv(const TruncSeries& t) {
  if (!in_log_deriv_image(t)) throw std::invalid_argument("series is not in the image of D");
  const FieldSpec& K = t.field();
  const int n = t.prec();
  const std::uint32_t p = K.p();
  TruncSeries f(K, n);
  f.set(0, K.one());
  const auto st = t.support();
  for (int m = 1; m <= n; ++m) {
    FieldElement s = K.zero();
    for (int j : st) {
      if (j > m) break;
      s += f[m - j] * t[j];
    }
    if (m % p != 0) {
      f.set(m, K.from_int(m).inv() * s);
    } else if (!s.is_zero()) {
      throw LemmaViolation("solve_log_deriv: inconsistent coefficient at X^" + std::to_string(m));
    }
  }
  return UnitSeries(std::move(f));
}

/// Critical-exponent mask: mask[k] == is_critical(k) for k <= n.
inline std::vector<bool> critical_mask(const PrimePower& pq, int n) {
  std::vector<bool> mask(static_cast<std::size_t>(n) + 1, false);
  for (int k = 1; k <= n; ++k) mask[k] = is_critical(static_cast<std::uint64_t>(k), pq);
  return mask;
}

/// psi_q[T] = X sum_{k in C_q} a_k X^k, at precision N+1.
inline TruncSeries psi_q(const TruncSeries& t, const PrimePower& pq) {
  if (t.field().p() != pq.p) throw std::invalid_argument("psi_q: characteristic mismatch");
  if (!t[0].is_zero()) throw std::invalid_argument("psi_q: series must vanish at 0");
  const auto mask = critical_mask(pq, t.prec());
  TruncSeries r(t.field(), t.prec() + 1);
  for (int k = 1; k <= t.prec(); ++k)
    if (mask[k]) r.set(k + 1, t[k]);
  return r;
}

// ---------------------------------------------------------------------------
// R_{q,K} and Gamma_{q,K}

/// sum_i a_i X^{q^i} with q^i <= prec, stored sparsely by the index i.
class AdditiveSeries {
 public:
  AdditiveSeries(const FieldSpec& f, const PrimePower& pq, int prec) : spec_(&f), pq_(pq), prec_(prec) {
    if (f.p() != pq.p) throw std::invalid_argument("additive series: characteristic mismatch");
    if (prec < 1) throw std::invalid_argument("additive series needs precision >= 1");
  }

  static AdditiveSeries identity(const FieldSpec& f, const PrimePower& pq, int prec) {
    AdditiveSeries a(f, pq, prec);
    a.set(0, f.one());
    return a;
  }
  /// X + beta X^{q^ell}
  static AdditiveSeries generator(const FieldSpec& f, const PrimePower& pq, int prec, std::uint32_t ell,
                                  const FieldElement& beta) {
    AdditiveSeries a = identity(f, pq, prec);
    if (a.fits(ell)) a.set(ell, beta);
    return a;
  }

  const FieldSpec& field() const { return *spec_; }
  const PrimePower& prime_power() const { return pq_; }
  int prec() const { return prec_; }
  const std::map<std::uint32_t, FieldElement>& terms() const { return terms_; }

  /// Largest index i with q^i <= prec.
  std::uint32_t max_index() const {
    std::uint32_t i = 0;
    std::uint64_t e = pq_.q;
    while (e <= static_cast<std::uint64_t>(prec_)) {
      ++i;
      e *= pq_.q;
    }
    return i;
  }
  bool fits(std::uint32_t i) const { return i <= max_index(); }

  FieldElement coeff(std::uint32_t i) const {
    auto it = terms_.find(i);
    return it == terms_.end() ? spec_->zero() : it->second;
  }
  void set(std::uint32_t i, const FieldElement& v) {
    if (!fits(i)) throw std::out_of_range("exponent q^i exceeds precision");
    if (&v.field() != spec_) throw std::invalid_argument("coefficient from a different field");
    if (v.is_zero())
      terms_.erase(i);
    else
      terms_[i] = v;
  }

  TruncSeries to_dense() const {
    TruncSeries s(*spec_, prec_);
    std::uint64_t e = 1;
    for (std::uint32_t i = 0; i <= max_index(); ++i, e *= pq_.q) s.set(static_cast<int>(e), coeff(i));
    return s;
  }

  /// Inverse of to_dense(); throws if a non-q-power exponent is present.
  static AdditiveSeries from_dense(const TruncSeries& s, const PrimePower& pq) {
    AdditiveSeries a(s.field(), pq, s.prec());
    std::uint64_t next = 1;
    std::uint32_t idx = 0;
    for (int k = 0; k <= s.prec(); ++k) {
      if (static_cast<std::uint64_t>(k) == next) {
        a.set(idx++, s[k]);
        next *= pq.q;
      } else if (!s[k].is_zero()) {
        throw std::invalid_argument("series has a term at X^" + std::to_string(k) + ", not a power of q");
      }
    }
    return a;
  }

  friend bool operator==(const AdditiveSeries& a, const AdditiveSeries& b) {
    return a.spec_ == b.spec_ && a.pq_ == b.pq_ && a.prec_ == b.prec_ && a.terms_ == b.terms_;
  }

 private:
  const FieldSpec* spec_;
  PrimePower pq_;
  int prec_;
  std::map<std::uint32_t, FieldElement> terms_;
};

/// Element of Gamma_{q,K}: an additive series with leading term X.
class GammaSeries {
 public:
  explicit GammaSeries(AdditiveSeries a) : a_(std::move(a)) {
    if (!a_.coeff(0).is_one()) throw std::invalid_argument("Gamma element must have leading term X");
  }
  static GammaSeries identity(const FieldSpec& f, const PrimePower& pq, int prec) {
    return GammaSeries(AdditiveSeries::identity(f, pq, prec));
  }
  const AdditiveSeries& additive() const { return a_; }
  operator const AdditiveSeries&() const { return a_; }
  int prec() const { return a_.prec(); }
  TruncSeries to_dense() const { return a_.to_dense(); }
  friend bool operator==(const GammaSeries& a, const GammaSeries& b) { return a.a_ == b.a_; }

 private:
  AdditiveSeries a_;
};

/// a o b in R_{q,K}: coefficient of X^{q^s} is sum_{i+j=s} a_i b_j^{q^i}.
inline AdditiveSeries additive_compose(const AdditiveSeries& a, const AdditiveSeries& b) {
  if (&a.field() != &b.field() || !(a.prime_power() == b.prime_power()))
    throw std::invalid_argument("additive series over different rings");
  AdditiveSeries r(a.field(), a.prime_power(), std::min(a.prec(), b.prec()));
  const std::uint32_t lambda = a.prime_power().lambda;
  for (const auto& [i, ai] : a.terms()) {
    for (const auto& [j, bj] : b.terms()) {
      if (!r.fits(i + j)) break;
      r.set(i + j, r.coeff(i + j) + ai * bj.frobenius(static_cast<std::uint64_t>(lambda) * i));
    }
  }
  return r;
}

inline GammaSeries gamma_compose(const GammaSeries& a, const GammaSeries& b) {
  return GammaSeries(additive_compose(a, b));
}

/// Compositional inverse in Gamma_{q,K}, determined coefficient by coefficient
/// from g o h = X: h_0 = 1, h_s = -sum_{i=1}^{s} g_i h_{s-i}^{q^i}.
/// Precision min(prec, g.prec()).
inline GammaSeries gamma_inverse(const GammaSeries& g, std::optional<int> prec = std::nullopt) {
  const AdditiveSeries& ga = g;
  AdditiveSeries h(ga.field(), ga.prime_power(), std::min(prec.value_or(ga.prec()), ga.prec()));
  const std::uint32_t lambda = ga.prime_power().lambda;
  h.set(0, ga.field().one());
  for (std::uint32_t s = 1; s <= h.max_index(); ++s) {
    FieldElement acc = ga.field().zero();
    for (const auto& [i, gi] : ga.terms()) {
      if (i == 0) continue;
      if (i > s) break;
      acc += gi * h.coeff(s - i).frobenius(static_cast<std::uint64_t>(lambda) * i);
    }
    h.set(s, -acc);
  }
  return GammaSeries(std::move(h));
}

/// rho o G = sum_i a_i G^{q^i}, where G^{q^i} = sum_k b_k^{q^i} X^{k q^i}.
/// Requires G(0) = 0; precision min(N_G, rho.prec()).
inline TruncSeries apply_additive(const AdditiveSeries& rho, const TruncSeries& g) {
  if (&rho.field() != &g.field()) throw std::invalid_argument("series over different fields");
  if (!g[0].is_zero()) throw std::invalid_argument("apply_additive: series must vanish at 0");
  const int n = std::min(g.prec(), rho.prec());
  TruncSeries r(g.field(), n);
  const auto sg = g.support();
  const PrimePower& pq = rho.prime_power();
  std::uint64_t qi = 1;
  std::uint32_t last = 0;
  for (const auto& [i, a] : rho.terms()) {
    for (; last < i; ++last) qi *= pq.q;
    if (qi > static_cast<std::uint64_t>(n)) break;
    for (int k : sg) {
      const std::uint64_t e = static_cast<std::uint64_t>(k) * qi;
      if (e > static_cast<std::uint64_t>(n)) break;
      r.add_to(static_cast<int>(e), a * g[k].frobenius(static_cast<std::uint64_t>(pq.lambda) * i));
    }
  }
  return r;
}

/// Coefficient-by-coefficient compositional inverse of a series g = X + ...
/// (generic dense reversion, no structure assumed). Used as an independent
/// cross-check for gamma_inverse.
inline TruncSeries ps_reverse(const TruncSeries& g) {
  if (!g[0].is_zero() || g.prec() < 1 || !g[1].is_one())
    throw std::invalid_argument("ps_reverse expects g = X + O(X^2)");
  const int n = g.prec();
  TruncSeries h = TruncSeries::x(g.field(), n);
  for (int m = 2; m <= n; ++m) {
    // with h correct below degree m, the X^m coefficient of g o h is h_m + (terms in h_{<m})
    const TruncSeries c = ps_compose(g, h.truncated(m));
    h.set(m, h[m] - c[m]);
  }
  return h;
}

}  // namespace qcrit
