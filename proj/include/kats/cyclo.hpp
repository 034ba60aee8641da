#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n), represented as
// Q[x]/Phi_n(x) with rational coordinates in the power basis
// 1, zeta, ..., zeta^{phi(n)-1}. Phi_n is computed by the recursive-division
// identity x^n - 1 = prod_{d | n} Phi_d and cached. Elements of different
// orders interoperate by promotion into the lcm field (zeta_n -> zeta_m^{m/n}).
//
// reduce() maps into a finite field along zeta_n -> nth_root_of_unity(F, n).
// Because every root of unity in gf.hpp is a power of the same deterministic
// generator, these reductions are compatible across orders: promoting first
// and reducing gives the same element as reducing directly.

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kats/errors.hpp"
#include "kats/gf.hpp"
#include "kats/numeric.hpp"

namespace kats {

namespace cyclodetail {

// Integer polynomial division, exact, divisor monic. Low degree first.
inline std::vector<Int> divide_exact(std::vector<Int> num, const std::vector<Int>& den) {
  if (num.size() < den.size()) return {Int(0)};
  std::vector<Int> q(num.size() - den.size() + 1, 0);
  for (size_t i = num.size() - 1;; --i) {
    Int c = num[i];
    if (c != 0) {
      size_t shift = i - (den.size() - 1);
      q[shift] = c;
      for (size_t j = 0; j < den.size(); ++j) num[shift + j] -= c * den[j];
    }
    if (i == den.size() - 1) break;
  }
  return q;
}

inline const std::vector<Int>& cyclotomic_poly(uint32_t n) {
  static std::map<uint32_t, std::vector<Int>> cache;
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<Int> poly;
  if (n == 1) {
    poly = {Int(-1), Int(1)};  // x - 1
  } else {
    std::vector<Int> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (uint64_t d : divisors_u64(n))
      if (d < n) num = divide_exact(std::move(num), cyclotomic_poly(static_cast<uint32_t>(d)));
    poly = std::move(num);
  }
  return cache.emplace(n, std::move(poly)).first->second;
}

// Reduce a rational polynomial modulo the (monic, integer) Phi_n in place.
inline void reduce_mod_phi(std::vector<Rat>& a, uint32_t n) {
  const auto& phi = cyclotomic_poly(n);
  size_t deg = phi.size() - 1;
  while (a.size() > deg) {
    Rat c = a.back();
    a.pop_back();
    if (c != 0) {
      // The removed term was c*x^{a.size()}; x^{a.size()} = x^{a.size()-deg} * x^deg
      // and x^deg = -sum_j phi[j] x^j modulo the monic phi.
      for (size_t j = 0; j < deg; ++j) a[a.size() - deg + j] -= c * Rat(phi[j]);
    }
  }
  a.resize(deg, Rat(0));
}

}  // namespace cyclodetail

class CycloRational {
 public:
  CycloRational() : order_(1), coords_(1, Rat(0)) {}
  explicit CycloRational(const Rat& r) : order_(1), coords_(1, r) {}
  explicit CycloRational(int64_t n) : order_(1), coords_(1, Rat(n)) {}

  static CycloRational zeta(uint32_t n) { return zeta_power(n, 1); }

  static CycloRational zeta_power(uint32_t n, uint64_t e) {
    if (n == 0) raise(errc::bad_order, "zeta of order 0");
    e %= n;
    std::vector<Rat> poly(e + 1, Rat(0));
    poly[e] = 1;
    cyclodetail::reduce_mod_phi(poly, n);
    return CycloRational(n, std::move(poly));
  }

  uint32_t order() const { return order_; }
  const std::vector<Rat>& coords() const { return coords_; }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (size_t i = 1; i < coords_.size(); ++i)
      if (coords_[i] != 0) return false;
    return true;
  }
  const Rat& rational_part() const { return coords_[0]; }

  CycloRational promoted(uint32_t m) const {
    if (m == order_) return *this;
    if (m % order_ != 0) raise(errc::bad_order, "promotion target is not a multiple of the order");
    uint64_t stretch = m / order_;
    std::vector<Rat> poly((coords_.size() - 1) * stretch + 1, Rat(0));
    for (size_t j = 0; j < coords_.size(); ++j) poly[j * stretch] = coords_[j];
    cyclodetail::reduce_mod_phi(poly, m);
    return CycloRational(m, std::move(poly));
  }

  friend CycloRational operator+(const CycloRational& a, const CycloRational& b) {
    auto [x, y] = aligned(a, b);
    for (size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] += y.coords_[i];
    return x;
  }
  friend CycloRational operator-(const CycloRational& a, const CycloRational& b) {
    auto [x, y] = aligned(a, b);
    for (size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] -= y.coords_[i];
    return x;
  }
  CycloRational operator-() const {
    CycloRational r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
  }
  friend CycloRational operator*(const CycloRational& a, const CycloRational& b) {
    auto [x, y] = aligned(a, b);
    std::vector<Rat> prod(x.coords_.size() + y.coords_.size() - 1, Rat(0));
    for (size_t i = 0; i < x.coords_.size(); ++i) {
      if (x.coords_[i] == 0) continue;
      for (size_t j = 0; j < y.coords_.size(); ++j) prod[i + j] += x.coords_[i] * y.coords_[j];
    }
    cyclodetail::reduce_mod_phi(prod, x.order_);
    return CycloRational(x.order_, std::move(prod));
  }
  friend CycloRational operator*(const CycloRational& a, const Rat& s) {
    CycloRational r = a;
    for (auto& c : r.coords_) c *= s;
    return r;
  }
  friend CycloRational operator*(const Rat& s, const CycloRational& a) { return a * s; }
  friend CycloRational operator/(const CycloRational& a, const Rat& s) {
    if (s == 0) raise(errc::division_by_zero, "cyclotomic division by zero rational");
    CycloRational r = a;
    for (auto& c : r.coords_) c /= s;
    return r;
  }

  CycloRational& operator+=(const CycloRational& o) { return *this = *this + o; }
  CycloRational& operator-=(const CycloRational& o) { return *this = *this - o; }
  CycloRational& operator*=(const CycloRational& o) { return *this = *this * o; }

  CycloRational pow(uint64_t e) const {
    CycloRational base = *this, r(Rat(1));
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const CycloRational& a, const CycloRational& b) {
    auto [x, y] = aligned(a, b);
    return x.coords_ == y.coords_;
  }
  friend bool operator!=(const CycloRational& a, const CycloRational& b) { return !(a == b); }

  // True when every coordinate, in lowest terms, has denominator coprime to p.
  bool is_p_integral(uint64_t p) const {
    for (const auto& c : coords_)
      if (rat_den(c) % p == 0) return false;
    return true;
  }

  // Map along zeta_n -> nth_root_of_unity(F, n). Requires n | |F*| and
  // p-integral coordinates.
  FieldElement reduce(const Field& F) const {
    uint64_t p = F.characteristic();
    if (!is_p_integral(p))
      raise(errc::not_p_integral, "denominator divisible by " + std::to_string(p));
    FieldElement omega = F.nth_root_of_unity(order_);
    FieldElement out = F.zero();
    for (size_t j = coords_.size(); j-- > 0;) {
      Int num = rat_num(coords_[j]) % p;
      Int den = rat_den(coords_[j]) % p;
      FieldElement cj = F.from_integer(num) / F.from_integer(den);
      out = out * omega + cj;
    }
    return out;
  }

  // cyc(n;q_0,...,q_{phi(n)-1}) with rationals as a or a/b.
  std::string to_string() const {
    std::ostringstream os;
    os << "cyc(" << order_ << ';';
    for (size_t i = 0; i < coords_.size(); ++i) {
      if (i) os << ',';
      os << rat_num(coords_[i]);
      if (rat_den(coords_[i]) != 1) os << '/' << rat_den(coords_[i]);
    }
    os << ')';
    return os.str();
  }

  static CycloRational parse(std::string_view token) {
    if (token.substr(0, 4) != "cyc(" || token.back() != ')')
      raise(errc::parse_error, "cyclotomic token must look like cyc(n;...)");
    std::string_view body = token.substr(4, token.size() - 5);
    size_t semi = body.find(';');
    if (semi == std::string_view::npos) raise(errc::parse_error, "cyclotomic token missing ';'");
    uint32_t n = static_cast<uint32_t>(gfdetail::parse_u64(body.substr(0, semi), "cyclotomic order"));
    std::string_view rest = body.substr(semi + 1);
    std::vector<Rat> coords;
    while (!rest.empty()) {
      size_t comma = rest.find(',');
      std::string_view piece = comma == std::string_view::npos ? rest : rest.substr(0, comma);
      coords.push_back(parse_rat(piece));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (coords.size() != euler_phi_u64(n))
      raise(errc::parse_error, "cyclotomic coordinate count != phi(order)");
    return CycloRational(n, std::move(coords));
  }

  static Rat parse_rat(std::string_view s) {
    bool neg = !s.empty() && s.front() == '-';
    if (neg) s.remove_prefix(1);
    size_t slash = s.find('/');
    Int num, den = 1;
    if (slash == std::string_view::npos) {
      num = Int(gfdetail::parse_u64(s, "rational"));
    } else {
      num = Int(gfdetail::parse_u64(s.substr(0, slash), "rational numerator"));
      den = Int(gfdetail::parse_u64(s.substr(slash + 1), "rational denominator"));
    }
    Rat r(num, den);
    return neg ? Rat(-r) : r;
  }

 private:
  CycloRational(uint32_t order, std::vector<Rat> coords)
      : order_(order), coords_(std::move(coords)) {
    coords_.resize(euler_phi_u64(order_), Rat(0));
  }

  static std::pair<CycloRational, CycloRational> aligned(const CycloRational& a,
                                                         const CycloRational& b) {
    uint32_t m = static_cast<uint32_t>(std::lcm<uint64_t>(a.order_, b.order_));
    return {a.promoted(m), b.promoted(m)};
  }

  uint32_t order_;
  std::vector<Rat> coords_;
};

}  // namespace kats
