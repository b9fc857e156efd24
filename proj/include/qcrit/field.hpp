#pragma once

// Exact arithmetic in F_{p^n} in a fixed polynomial basis F_p[t]/(m(t)).
//
// Field specifications are interned: field_make() returns a reference with
// static storage duration, so a FieldElement can carry a plain pointer to
// its field and two elements belong to the same field iff the pointers
// compare equal.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace qcrit {

inline constexpr int kMaxExtDegree = 16;
inline constexpr std::uint32_t kMaxCharacteristic = 251;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

// a mod f for monic or non-monic f != 0
inline Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  poly_trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint32_t lead_inv = inv_mod_p(f.back(), p);
  while (a.size() > df) {
    const std::size_t shift = a.size() - 1 - df;
    const std::uint64_t c = std::uint64_t(a.back()) * lead_inv % p;
    for (std::size_t i = 0; i <= df; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * f[i]) % p);
    poly_trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  return poly_mod(std::move(r), f, p);
}

inline Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly poly_sub(Poly a, const Poly& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  poly_trim(a);
  return a;
}

// x^{p^k} mod f
inline Poly frobenius_of_x(const Poly& f, std::uint32_t p, int k) {
  Poly x{0, 1};
  x = poly_mod(x, f, p);
  for (int i = 0; i < k; ++i) x = poly_powmod(x, p, f, p);
  return x;
}

// Rabin's irreducibility test for a monic f of degree n over F_p.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly x = poly_mod(Poly{0, 1}, f, p);
  if (poly_sub(frobenius_of_x(f, p, n), x, p) != Poly{}) return false;
  int m = n;
  for (int r = 2; r <= m; ++r) {
    if (m % r != 0) continue;
    while (m % r == 0) m /= r;
    Poly g = poly_gcd(poly_sub(frobenius_of_x(f, p, n / r), x, p), f, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

class FieldElement;

/// The field F_p[t]/(m(t)). Immutable; obtain instances through field_make().
class FieldSpec {
 public:
  std::uint32_t p() const { return p_; }
  int n() const { return n_; }
  /// Coefficients of the monic modulus, constant term first (n+1 entries).
  std::span<const std::uint32_t> modulus() const { return modulus_; }
  /// p^n, or nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> order() const { return order_; }

  FieldElement zero() const;
  FieldElement one() const;
  /// Image of an integer under Z -> F_p -> F_{p^n}.
  FieldElement from_int(std::int64_t k) const;
  /// The class of t.
  FieldElement gen() const;
  FieldElement element(std::span<const std::uint32_t> coords) const;

  /// Every element, in order of the base-p integer formed by the coordinates.
  std::vector<FieldElement> elements() const;
  std::vector<FieldElement> units() const;

  bool operator==(const FieldSpec& o) const { return this == &o; }

 private:
  friend const FieldSpec& field_make(std::uint32_t, int, std::optional<std::vector<std::uint32_t>>);
  friend class FieldElement;

  FieldSpec(std::uint32_t p, int n, std::vector<std::uint32_t> modulus);

  std::uint32_t p_;
  int n_;
  std::vector<std::uint32_t> modulus_;
  std::optional<std::uint64_t> order_;
  // images of t^j under x -> x^p
  std::vector<std::array<std::uint8_t, kMaxExtDegree>> frob_basis_;
};

class FieldElement {
 public:
  using Coords = std::array<std::uint8_t, kMaxExtDegree>;

  FieldElement() = default;

  const FieldSpec& field() const { return *spec_; }
  bool has_field() const { return spec_ != nullptr; }
  std::uint32_t coord(int i) const { return c_[i]; }
  std::vector<std::uint32_t> coords() const {
    return {c_.begin(), c_.begin() + spec_->n_};
  }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::uint8_t v) { return v == 0; });
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](std::uint8_t v) { return v == 0; });
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.c_ == b.c_;
  }

  FieldElement& operator+=(const FieldElement& b) {
    check_same(b);
    const std::uint32_t p = spec_->p_;
    for (int i = 0; i < spec_->n_; ++i) c_[i] = static_cast<std::uint8_t>((c_[i] + b.c_[i]) % p);
    return *this;
  }
  FieldElement& operator-=(const FieldElement& b) {
    check_same(b);
    const std::uint32_t p = spec_->p_;
    for (int i = 0; i < spec_->n_; ++i) c_[i] = static_cast<std::uint8_t>((c_[i] + p - b.c_[i]) % p);
    return *this;
  }
  FieldElement operator-() const {
    FieldElement r = *this;
    const std::uint32_t p = spec_->p_;
    for (int i = 0; i < spec_->n_; ++i) r.c_[i] = static_cast<std::uint8_t>((p - c_[i]) % p);
    return r;
  }
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    const FieldSpec& s = *a.spec_;
    const int n = s.n();
    const std::uint32_t p = s.p();
    FieldElement r;
    r.spec_ = a.spec_;
    if (n == 1) {
      r.c_[0] = static_cast<std::uint8_t>(std::uint32_t(a.c_[0]) * b.c_[0] % p);
      return r;
    }
    std::array<std::uint32_t, 2 * kMaxExtDegree - 1> t{};
    for (int i = 0; i < n; ++i) {
      if (a.c_[i] == 0) continue;
      for (int j = 0; j < n; ++j) t[i + j] += std::uint32_t(a.c_[i]) * b.c_[j];
    }
    for (int d = 2 * n - 2; d >= n; --d) {
      const std::uint32_t coef = t[d] % p;
      if (coef == 0) continue;
      for (int i = 0; i < n; ++i) t[d - n + i] += coef * ((p - s.modulus()[i]) % p);
    }
    for (int i = 0; i < n; ++i) r.c_[i] = static_cast<std::uint8_t>(t[i] % p);
    return r;
  }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

  FieldElement pow(std::uint64_t e) const {
    if (auto ord = spec_->order_; ord && !is_zero() && e >= *ord) e %= (*ord - 1);
    FieldElement r = spec_->one();
    FieldElement b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  FieldElement inv() const {
    if (is_zero()) throw std::domain_error("inversion of zero in F_" + std::to_string(spec_->p_) + "^" +
                                           std::to_string(spec_->n_));
    if (spec_->n_ == 1) {
      FieldElement r = *this;
      r.c_[0] = static_cast<std::uint8_t>(detail::inv_mod_p(c_[0], spec_->p_));
      return r;
    }
    // a^(p^n - 2); p^n fits in 64 bits for every admissible (p, n)
    return pow(*spec_->order_ - 2);
  }

  /// a -> a^{p^i}
  FieldElement frobenius(std::uint64_t i) const {
    const int n = spec_->n_;
    i %= static_cast<std::uint64_t>(n);
    if (n == 1 || i == 0) return *this;
    const std::uint32_t p = spec_->p_;
    FieldElement cur = *this;
    for (std::uint64_t step = 0; step < i; ++step) {
      std::array<std::uint32_t, kMaxExtDegree> acc{};
      for (int j = 0; j < n; ++j) {
        if (cur.c_[j] == 0) continue;
        const auto& img = spec_->frob_basis_[j];
        for (int k = 0; k < n; ++k) acc[k] += std::uint32_t(cur.c_[j]) * img[k];
      }
      for (int k = 0; k < n; ++k) cur.c_[k] = static_cast<std::uint8_t>(acc[k] % p);
    }
    return cur;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < spec_->n_; ++i) os << (i ? "," : "") << unsigned(c_[i]);
    os << ']';
    return os.str();
  }

 private:
  friend class FieldSpec;
  void check_same(const FieldElement& b) const {
    if (spec_ != b.spec_) throw std::invalid_argument("field elements from different fields");
  }

  const FieldSpec* spec_ = nullptr;
  Coords c_{};
};

inline FieldSpec::FieldSpec(std::uint32_t p, int n, std::vector<std::uint32_t> modulus)
    : p_(p), n_(n), modulus_(std::move(modulus)) {
  unsigned __int128 ord = 1;
  bool fits = true;
  for (int i = 0; i < n; ++i) {
    ord *= p;
    if (ord > std::numeric_limits<std::uint64_t>::max()) fits = false;
  }
  if (fits) order_ = static_cast<std::uint64_t>(ord);
  frob_basis_.resize(n);
  for (int j = 0; j < n; ++j) {
    detail::Poly tj(j + 1, 0);
    tj[j] = 1;
    const detail::Poly img = detail::poly_powmod(tj, p, modulus_, p);
    frob_basis_[j].fill(0);
    for (std::size_t k = 0; k < img.size(); ++k) frob_basis_[j][k] = static_cast<std::uint8_t>(img[k]);
  }
}

inline FieldElement FieldSpec::zero() const {
  FieldElement r;
  r.spec_ = this;
  return r;
}
inline FieldElement FieldSpec::one() const { return from_int(1); }
inline FieldElement FieldSpec::from_int(std::int64_t k) const {
  FieldElement r;
  r.spec_ = this;
  const std::int64_t pp = p_;
  r.c_[0] = static_cast<std::uint8_t>(((k % pp) + pp) % pp);
  return r;
}
inline FieldElement FieldSpec::gen() const {
  if (n_ == 1) return from_int(static_cast<std::int64_t>(p_ - modulus_[0]) % p_);
  FieldElement r;
  r.spec_ = this;
  r.c_[1] = 1;
  return r;
}
inline FieldElement FieldSpec::element(std::span<const std::uint32_t> coords) const {
  if (coords.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("expected " + std::to_string(n_) + " coordinates, got " +
                                std::to_string(coords.size()));
  FieldElement r;
  r.spec_ = this;
  for (int i = 0; i < n_; ++i) {
    if (coords[i] >= p_) throw std::invalid_argument("coordinate out of range [0,p)");
    r.c_[i] = static_cast<std::uint8_t>(coords[i]);
  }
  return r;
}
inline std::vector<FieldElement> FieldSpec::elements() const {
  if (!order_ || *order_ > (1u << 20)) throw std::length_error("field too large to enumerate");
  std::vector<FieldElement> out;
  out.reserve(*order_);
  for (std::uint64_t v = 0; v < *order_; ++v) {
    FieldElement e = zero();
    std::uint64_t x = v;
    for (int i = 0; i < n_; ++i) {
      e.c_[i] = static_cast<std::uint8_t>(x % p_);
      x /= p_;
    }
    out.push_back(e);
  }
  return out;
}
inline std::vector<FieldElement> FieldSpec::units() const {
  auto all = elements();
  all.erase(all.begin());
  return all;
}

/// Interned construction of F_{p^n}. Without a modulus, the monic irreducible
/// with the smallest value sum_{i<n} m_i p^i is chosen.
inline const FieldSpec& field_make(std::uint32_t p, int n,
                                   std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
  if (p > kMaxCharacteristic) throw std::invalid_argument("characteristic too large");
  if (n < 1 || n > kMaxExtDegree) throw std::invalid_argument("extension degree must be in [1, 16]");

  std::vector<std::uint32_t> m;
  if (modulus) {
    m = *modulus;
    if (m.size() != static_cast<std::size_t>(n) + 1)
      throw std::invalid_argument("modulus degree does not match n");
    if (m.back() != 1) throw std::invalid_argument("modulus is not monic");
    for (auto c : m)
      if (c >= p) throw std::invalid_argument("modulus coefficient out of range [0,p)");
    if (!detail::is_irreducible(m, p)) throw std::invalid_argument("modulus is reducible");
  } else {
    m.assign(n + 1, 0);
    m[n] = 1;
    for (;;) {
      if (detail::is_irreducible(m, p)) break;
      int i = 0;
      while (i < n && ++m[i] == p) m[i++] = 0;
      if (i == n) throw std::logic_error("no irreducible polynomial found");
    }
  }

  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, int, std::vector<std::uint32_t>>, const FieldSpec*> index;
  static std::deque<FieldSpec> storage;
  std::lock_guard lock(mu);
  auto key = std::make_tuple(p, n, m);
  if (auto it = index.find(key); it != index.end()) return *it->second;
  storage.push_back(FieldSpec(p, n, m));
  index.emplace(std::move(key), &storage.back());
  return storage.back();
}

/// Uniform-ish element from the raw 64-bit stream (coordinate = draw mod p).
inline FieldElement random_element(const FieldSpec& f, std::mt19937_64& rng) {
  std::vector<std::uint32_t> c(f.n());
  for (auto& v : c) v = static_cast<std::uint32_t>(rng() % f.p());
  return f.element(c);
}

inline FieldElement random_unit_element(const FieldSpec& f, std::mt19937_64& rng) {
  for (;;) {
    FieldElement e = random_element(f, rng);
    if (!e.is_zero()) return e;
  }
}

/// a lies in the subfield F_{p^m} iff a^{p^m} = a.
inline bool in_subfield(const FieldElement& a, int m) { return a.frobenius(m) == a; }

/// All elements of the subfield F_{p^m} (m | n), computed as the kernel of
/// Frob^m - 1 over F_p.
inline std::vector<FieldElement> subfield_elements(const FieldSpec& f, int m) {
  const int n = f.n();
  if (m < 1 || n % m != 0) throw std::invalid_argument("subfield degree must divide n");
  const std::uint32_t p = f.p();
  // column j = (Frob^m - 1)(t^j)
  std::vector<std::vector<std::uint32_t>> a(n, std::vector<std::uint32_t>(n));
  for (int j = 0; j < n; ++j) {
    std::vector<std::uint32_t> e(n, 0);
    e[j] = 1;
    FieldElement b = f.element(e);
    FieldElement img = b.frobenius(m) - b;
    for (int i = 0; i < n; ++i) a[i][j] = img.coord(i);
  }
  // row-reduce, then read off a kernel basis
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int piv = -1;
    for (int r = row; r < n; ++r)
      if (a[r][col]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[row], a[piv]);
    const std::uint32_t inv = detail::inv_mod_p(a[row][col], p);
    for (auto& v : a[row]) v = static_cast<std::uint32_t>(std::uint64_t(v) * inv % p);
    for (int r = 0; r < n; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const std::uint64_t c = a[r][col];
      for (int k = 0; k < n; ++k) a[r][k] = static_cast<std::uint32_t>((a[r][k] + (p - c) * a[row][k]) % p);
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<std::vector<std::uint32_t>> basis;
  for (int free = 0; free < n; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<std::uint32_t> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = (p - a[r][free]) % p;
    basis.push_back(std::move(v));
  }
  std::vector<FieldElement> out{f.zero()};
  for (const auto& b : basis) {
    const FieldElement be = f.element(b);
    std::vector<FieldElement> next;
    next.reserve(out.size() * p);
    for (std::uint32_t c = 0; c < p; ++c)
      for (const auto& x : out) next.push_back(x + f.from_int(c) * be);
    out = std::move(next);
  }
  return out;
}

}  // namespace qcrit
