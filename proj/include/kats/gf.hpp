#pragma once

// Finite fields F_{p^d} with deterministic construction: the modulus is the
// lexicographically smallest monic irreducible of degree d over F_p
// (coefficients compared low-to-high as integers in [0, p)), so any two
// constructions of F_{p^d} are bit-identical and serialized data is portable
// across runs. Elements are coefficient vectors in the power basis
// 1, x, ..., x^{d-1}, each coefficient a residue in [0, p).
//
// The canonical ordering of elements reads the coefficient vector as a base-p
// integer (c_0 least significant). "Smallest generator", "first root" and the
// n-th root of unity below are all defined against that ordering, which is
// what makes character lifts and embeddings reproducible.

#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kats/errors.hpp"
#include "kats/numeric.hpp"

namespace kats {

namespace gfdetail {

// Dense polynomials over F_p, low degree first, trimmed.
using Poly = std::vector<uint64_t>;

inline void ptrim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly pmul(const Poly& a, const Poly& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
  }
  Poly out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<uint64_t>(acc[i] % p);
  ptrim(out);
  return out;
}

// Remainder of a modulo a monic divisor m.
inline Poly pmod(Poly a, const Poly& m, uint64_t p) {
  ptrim(a);
  size_t dm = m.size() - 1;
  while (a.size() > dm) {
    uint64_t lead = a.back();
    size_t shift = a.size() - 1 - dm;
    if (lead) {
      for (size_t i = 0; i < dm; ++i) {
        uint64_t sub = mulmod_u64(lead, m[i], p);
        uint64_t& slot = a[i + shift];
        slot = (slot + p - sub) % p;
      }
    }
    a.pop_back();
    ptrim(a);
    if (a.size() <= dm) break;
  }
  return a;
}

inline Poly pgcd(Poly a, Poly b, uint64_t p) {
  ptrim(a);
  ptrim(b);
  while (!b.empty()) {
    // Scale b monic, reduce, swap.
    Poly bm = b;
    uint64_t inv_lead = powmod_u64(bm.back(), p - 2, p);
    for (auto& c : bm) c = mulmod_u64(c, inv_lead, p);
    Poly r = pmod(a, bm, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^i) mod m, computed by i-fold Frobenius powering.
inline Poly frobenius_power_of_x(const Poly& m, uint64_t p, unsigned i) {
  Poly h{0, 1};
  h = pmod(h, m, p);
  for (unsigned s = 0; s < i; ++s) {
    // h <- h^p mod m
    Poly r{1};
    Poly base = h;
    uint64_t e = p;
    while (e) {
      if (e & 1) r = pmod(pmul(r, base, p), m, p);
      base = pmod(pmul(base, base, p), m, p);
      e >>= 1;
    }
    h = std::move(r);
  }
  return h;
}

inline bool is_irreducible(const Poly& m, uint64_t p) {
  unsigned d = static_cast<unsigned>(m.size() - 1);
  // No factor of degree <= i for i < d, then x^(p^d) = x.
  for (unsigned i = 1; i < d; ++i) {
    Poly h = frobenius_power_of_x(m, p, i);
    // h - x
    Poly diff = h;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    ptrim(diff);
    Poly g = pgcd(m, diff, p);
    if (g.size() != 1) return false;
  }
  Poly h = frobenius_power_of_x(m, p, d);
  return h.size() == 2 && h[0] == 0 && h[1] == 1;
}

struct FieldData {
  uint64_t p = 0;
  unsigned d = 0;
  uint64_t size = 0;  // p^d
  Poly modulus;       // d+1 coefficients, monic
  std::vector<PrimePower> unit_factors;  // factorization of size - 1
  std::vector<uint64_t> generator;       // smallest multiplicative generator
};

}  // namespace gfdetail

class FieldElement;

class Field {
 public:
  static constexpr uint64_t kDefaultMaxSize = 1ull << 40;
  static constexpr uint64_t kMaxCharacteristic = 1ull << 31;

  Field() = default;

  // make_field: deterministic F_{p^d}.
  static Field make(uint64_t p, unsigned d, uint64_t max_size = kDefaultMaxSize);

  bool valid() const { return static_cast<bool>(data_); }
  uint64_t characteristic() const { return data_->p; }
  unsigned degree() const { return data_->d; }
  uint64_t size() const { return data_->size; }
  const std::vector<uint64_t>& modulus() const { return data_->modulus; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_integer(const Int& n) const;
  FieldElement from_integer(int64_t n) const;
  FieldElement element(std::vector<uint64_t> coeffs) const;
  FieldElement element_at(uint64_t index) const;  // canonical ordering
  FieldElement generator() const;                 // smallest generator of the unit group
  FieldElement nth_root_of_unity(uint64_t n) const;

  const std::vector<PrimePower>& unit_group_factors() const { return data_->unit_factors; }

  bool operator==(const Field& o) const {
    return data_ == o.data_ ||
           (data_ && o.data_ && data_->p == o.data_->p && data_->d == o.data_->d);
  }
  bool operator!=(const Field& o) const { return !(*this == o); }

  // GF(p^d;c_0,...,c_d)
  std::string to_string() const;
  static Field parse(std::string_view token);

 private:
  explicit Field(std::shared_ptr<const gfdetail::FieldData> data) : data_(std::move(data)) {}
  std::shared_ptr<const gfdetail::FieldData> data_;
  friend class FieldElement;
};

class FieldElement {
 public:
  FieldElement() = default;

  const Field& field() const { return parent_; }
  const std::vector<uint64_t>& coeffs() const { return c_; }
  bool is_zero() const {
    for (uint64_t x : c_)
      if (x) return false;
    return true;
  }
  bool is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i]) return false;
    return true;
  }

  uint64_t canonical_index() const {
    uint64_t idx = 0;
    for (size_t i = c_.size(); i-- > 0;) idx = idx * parent_.characteristic() + c_[i];
    return idx;
  }

  FieldElement operator+(const FieldElement& o) const {
    check_same(o);
    FieldElement r(*this);
    uint64_t p = parent_.characteristic();
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = (c_[i] + o.c_[i]) % p;
    return r;
  }
  FieldElement operator-(const FieldElement& o) const {
    check_same(o);
    FieldElement r(*this);
    uint64_t p = parent_.characteristic();
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = (c_[i] + p - o.c_[i]) % p;
    return r;
  }
  FieldElement operator-() const {
    FieldElement r(*this);
    uint64_t p = parent_.characteristic();
    for (auto& x : r.c_) x = (p - x) % p;
    return r;
  }
  FieldElement operator*(const FieldElement& o) const {
    check_same(o);
    uint64_t p = parent_.characteristic();
    auto prod = gfdetail::pmul(c_, o.c_, p);
    prod = gfdetail::pmod(std::move(prod), parent_.data_->modulus, p);
    prod.resize(parent_.degree(), 0);
    return FieldElement(parent_, std::move(prod));
  }
  FieldElement inv() const {
    if (is_zero()) raise(errc::division_by_zero, "inverse of zero");
    return pow(static_cast<int64_t>(parent_.size() - 2));
  }
  FieldElement operator/(const FieldElement& o) const { return *this * o.inv(); }

  FieldElement pow(int64_t e) const {
    if (e < 0) return inv().pow(-e);
    FieldElement base = *this, r = parent_.one();
    uint64_t u = static_cast<uint64_t>(e);
    while (u) {
      if (u & 1) r = r * base;
      base = base * base;
      u >>= 1;
    }
    return r;
  }

  // Multiplicative order (nonzero elements).
  uint64_t order() const {
    if (is_zero()) raise(errc::division_by_zero, "order of zero");
    uint64_t ord = parent_.size() - 1;
    for (const auto& pp : parent_.unit_group_factors()) {
      for (unsigned e = 0; e < pp.exp; ++e) {
        if (pow(static_cast<int64_t>(ord / pp.prime)).is_one())
          ord /= pp.prime;
        else
          break;
      }
    }
    return ord;
  }

  bool operator==(const FieldElement& o) const { return parent_ == o.parent_ && c_ == o.c_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  // [c_0,...,c_{d-1}]
  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < c_.size(); ++i) {
      if (i) os << ',';
      os << c_[i];
    }
    os << ']';
    return os.str();
  }
  static FieldElement parse(std::string_view token, const Field& F);

 private:
  FieldElement(Field parent, std::vector<uint64_t> c) : parent_(std::move(parent)), c_(std::move(c)) {}
  void check_same(const FieldElement& o) const {
    if (!(parent_ == o.parent_)) raise(errc::field_mismatch, "elements of different fields");
  }
  Field parent_;
  std::vector<uint64_t> c_;
  friend class Field;
};

inline Field Field::make(uint64_t p, unsigned d, uint64_t max_size) {
  if (!is_prime_u64(p)) raise(errc::composite_characteristic, std::to_string(p) + " is not prime");
  if (p >= kMaxCharacteristic)
    raise(errc::degree_overflow, "characteristic exceeds 2^31 budget");
  if (d < 1) raise(errc::degree_overflow, "degree must be at least 1");
  uint64_t q = 1;
  for (unsigned i = 0; i < d; ++i) {
    if (q > max_size / p) raise(errc::degree_overflow, "p^d exceeds the configured size budget");
    q *= p;
  }

  auto data = std::make_shared<gfdetail::FieldData>();
  data->p = p;
  data->d = d;
  data->size = q;

  if (d == 1) {
    data->modulus = {0, 1};
  } else {
    // Lexicographic scan: candidate index m encodes (c_0,...,c_{d-1}) with c_0
    // most significant, so ascending m is ascending lex order.
    bool found = false;
    for (uint64_t m = 0; m < q && !found; ++m) {
      gfdetail::Poly cand(d + 1, 0);
      cand[d] = 1;
      uint64_t t = m;
      for (unsigned i = d; i-- > 0;) {
        cand[i] = t % p;  // fills c_{d-1} first: t's low digit is the least significant lex slot
        t /= p;
      }
      if (gfdetail::is_irreducible(cand, p)) {
        data->modulus = std::move(cand);
        found = true;
      }
    }
    if (!found) raise(errc::degree_overflow, "no irreducible found (unreachable)");
  }

  data->unit_factors = factorize_u64(q - 1);

  Field F{std::shared_ptr<const gfdetail::FieldData>(data)};
  // Smallest generator in canonical order. Index 0 is zero; start at 1.
  for (uint64_t idx = 1; idx < q; ++idx) {
    FieldElement a = F.element_at(idx);
    if (a.order() == q - 1) {
      data->generator = a.coeffs();
      break;
    }
  }
  return F;
}

inline FieldElement Field::zero() const { return FieldElement(*this, std::vector<uint64_t>(degree(), 0)); }

inline FieldElement Field::one() const {
  std::vector<uint64_t> c(degree(), 0);
  c[0] = 1;
  return FieldElement(*this, std::move(c));
}

inline FieldElement Field::from_integer(const Int& n) const {
  Int r = n % Int(characteristic());
  if (r < 0) r += characteristic();
  std::vector<uint64_t> c(degree(), 0);
  c[0] = static_cast<uint64_t>(r);
  return FieldElement(*this, std::move(c));
}

inline FieldElement Field::from_integer(int64_t n) const { return from_integer(Int(n)); }

inline FieldElement Field::element(std::vector<uint64_t> coeffs) const {
  if (coeffs.size() > degree()) raise(errc::degree_overflow, "too many coefficients for field degree");
  coeffs.resize(degree(), 0);
  for (auto& x : coeffs) x %= characteristic();
  return FieldElement(*this, std::move(coeffs));
}

inline FieldElement Field::element_at(uint64_t index) const {
  std::vector<uint64_t> c(degree(), 0);
  for (unsigned i = 0; i < degree(); ++i) {
    c[i] = index % characteristic();
    index /= characteristic();
  }
  return FieldElement(*this, std::move(c));
}

inline FieldElement Field::generator() const { return FieldElement(*this, data_->generator); }

inline FieldElement Field::nth_root_of_unity(uint64_t n) const {
  if (n == 0) raise(errc::no_such_root, "order 0");
  if ((size() - 1) % n != 0)
    raise(errc::no_such_root,
          std::to_string(n) + " does not divide the unit group order " + std::to_string(size() - 1));
  return generator().pow(static_cast<int64_t>((size() - 1) / n));
}

inline std::string Field::to_string() const {
  std::ostringstream os;
  os << "GF(" << characteristic() << '^' << degree() << ';';
  for (size_t i = 0; i < data_->modulus.size(); ++i) {
    if (i) os << ',';
    os << data_->modulus[i];
  }
  os << ')';
  return os.str();
}

namespace gfdetail {
inline uint64_t parse_u64(std::string_view s, const char* what) {
  if (s.empty()) raise(errc::parse_error, std::string("empty ") + what);
  uint64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') raise(errc::parse_error, std::string("bad ") + what + ": " + std::string(s));
    v = v * 10 + static_cast<uint64_t>(ch - '0');
  }
  return v;
}
}  // namespace gfdetail

inline Field Field::parse(std::string_view token) {
  // GF(p^d;c_0,...,c_d) or GF(p;...)
  if (token.substr(0, 3) != "GF(" || token.back() != ')')
    raise(errc::parse_error, "field token must look like GF(p^d;...)");
  std::string_view body = token.substr(3, token.size() - 4);
  size_t semi = body.find(';');
  if (semi == std::string_view::npos) raise(errc::parse_error, "field token missing ';'");
  std::string_view head = body.substr(0, semi);
  uint64_t p;
  unsigned d = 1;
  size_t caret = head.find('^');
  if (caret == std::string_view::npos) {
    p = gfdetail::parse_u64(head, "characteristic");
  } else {
    p = gfdetail::parse_u64(head.substr(0, caret), "characteristic");
    d = static_cast<unsigned>(gfdetail::parse_u64(head.substr(caret + 1), "degree"));
  }
  Field F = Field::make(p, d);
  // Verify the modulus written in the token matches the deterministic one.
  std::string_view rest = body.substr(semi + 1);
  std::vector<uint64_t> mod;
  while (!rest.empty()) {
    size_t comma = rest.find(',');
    std::string_view piece = comma == std::string_view::npos ? rest : rest.substr(0, comma);
    mod.push_back(gfdetail::parse_u64(piece, "modulus coefficient"));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (mod != F.modulus())
    raise(errc::parse_error, "field token modulus does not match the canonical modulus for " +
                                 std::to_string(p) + "^" + std::to_string(d));
  return F;
}

inline FieldElement FieldElement::parse(std::string_view token, const Field& F) {
  if (token.size() < 2 || token.front() != '[' || token.back() != ']')
    raise(errc::parse_error, "element token must look like [c0,...]");
  std::string_view body = token.substr(1, token.size() - 2);
  std::vector<uint64_t> c;
  while (!body.empty()) {
    size_t comma = body.find(',');
    std::string_view piece = comma == std::string_view::npos ? body : body.substr(0, comma);
    c.push_back(gfdetail::parse_u64(piece, "element coefficient"));
    body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
  }
  if (c.size() != F.degree()) raise(errc::parse_error, "element coefficient count != field degree");
  for (uint64_t x : c)
    if (x >= F.characteristic()) raise(errc::parse_error, "element coefficient out of range");
  return F.element(std::move(c));
}

// Embedding of F_{p^d} into F_{p^d'} for d | d': the generator x of the small
// field maps to the first root (ascending canonical order) of the small
// modulus in the big field, and elements follow by evaluating their
// coefficient polynomial at that root.
inline FieldElement embed(const FieldElement& a, const Field& G) {
  const Field& F = a.field();
  if (F == G) return G.element(a.coeffs());
  if (F.characteristic() != G.characteristic())
    raise(errc::no_embedding, "different characteristics");
  if (G.degree() % F.degree() != 0)
    raise(errc::no_embedding, std::to_string(F.degree()) + " does not divide " + std::to_string(G.degree()));

  FieldElement root = G.zero();
  bool found = false;
  for (uint64_t idx = 0; idx < G.size(); ++idx) {
    FieldElement t = G.element_at(idx);
    FieldElement val = G.zero();
    for (size_t i = F.modulus().size(); i-- > 0;)
      val = val * t + G.from_integer(static_cast<int64_t>(F.modulus()[i]));
    if (val.is_zero()) {
      root = t;
      found = true;
      break;
    }
  }
  if (!found) raise(errc::no_embedding, "modulus has no root in target (unreachable for d | d')");

  FieldElement out = G.zero();
  for (size_t i = a.coeffs().size(); i-- > 0;)
    out = out * root + G.from_integer(static_cast<int64_t>(a.coeffs()[i]));
  return out;
}

}  // namespace kats
