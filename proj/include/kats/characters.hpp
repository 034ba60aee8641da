#pragma once

// Dirichlet characters with values in a finite field, their lifts to exact
// cyclotomic roots of unity, and generalized Bernoulli numbers.
//
// A character mod N is stored by its values on the canonical generators of
// (Z/NZ)^*: for an odd prime power l^e the smallest primitive root, for 4 the
// residue 3, and for 2^e (e >= 3) the pair -1, 5 in that order. Evaluation
// solves discrete logs per CRT factor; the moduli this layer is meant for are
// small enough that a direct scan is fine.

#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kats/cyclo.hpp"
#include "kats/errors.hpp"
#include "kats/gf.hpp"
#include "kats/numeric.hpp"

namespace kats {

struct UnitGenerator {
  uint64_t prime;
  unsigned exp;
  uint64_t prime_power;
  uint64_t gen;    // residue mod prime_power
  uint64_t order;  // multiplicative order of gen mod prime_power
};

inline std::vector<UnitGenerator> unit_group_generators(uint64_t N) {
  std::vector<UnitGenerator> out;
  for (const auto& pp : factorize_u64(N)) {
    if (pp.prime == 2) {
      if (pp.exp == 1) continue;  // (Z/2)^* trivial
      if (pp.exp == 2) {
        out.push_back({2, 2, 4, 3, 2});
      } else {
        uint64_t q = pp.value;
        out.push_back({2, pp.exp, q, q - 1, 2});
        out.push_back({2, pp.exp, q, 5, q / 4});
      }
    } else {
      uint64_t phi = pp.value / pp.prime * (pp.prime - 1);
      out.push_back({pp.prime, pp.exp, pp.value, smallest_primitive_root(pp.value), phi});
    }
  }
  return out;
}

namespace chardetail {

// Exponent e with g^e = target (mod m), scanning 0..order-1.
inline std::optional<uint64_t> dlog(uint64_t g, uint64_t target, uint64_t m, uint64_t order) {
  uint64_t cur = 1 % m;
  for (uint64_t e = 0; e < order; ++e) {
    if (cur == target % m) return e;
    cur = mulmod_u64(cur, g, m);
  }
  return std::nullopt;
}

// Decompose a unit r mod 2^e (e >= 3) as (-1)^s * 5^t.
inline std::pair<uint64_t, uint64_t> two_adic_log(uint64_t r, uint64_t q) {
  uint64_t s = (r % 4 == 1) ? 0 : 1;
  uint64_t target = s ? (q - r % q) % q : r % q;
  auto t = dlog(5, target, q, q / 4);
  if (!t) raise(errc::bad_order, "2-adic discrete log failed (not a unit?)");
  return {s, *t};
}

// Exponents of m with respect to the canonical generators, CRT factor by factor.
// Requires gcd(m, N) = 1. Result aligned with unit_group_generators(N).
inline std::vector<uint64_t> generator_exponents(uint64_t m, uint64_t N,
                                                 const std::vector<UnitGenerator>& gens) {
  std::vector<uint64_t> out(gens.size(), 0);
  for (size_t i = 0; i < gens.size(); ++i) {
    const auto& G = gens[i];
    uint64_t r = m % G.prime_power;
    if (G.prime == 2 && G.exp >= 3) {
      auto [s, t] = two_adic_log(r, G.prime_power);
      // generators come in pairs (-1, 5); this slot is -1 when gen == q-1
      out[i] = (G.gen == G.prime_power - 1) ? s : t;
    } else {
      auto e = dlog(G.gen, r, G.prime_power, G.order);
      if (!e) raise(errc::bad_order, "discrete log failed (not a unit?)");
      out[i] = *e;
    }
  }
  return out;
}

inline uint64_t crt_combine(const std::vector<std::pair<uint64_t, uint64_t>>& residues) {
  // residues: (value mod m, m) with pairwise coprime moduli
  Int x = 0, M = 1;
  for (auto [r, m] : residues) M *= m;
  for (auto [r, m] : residues) {
    Int Mi = M / m;
    uint64_t mi = static_cast<uint64_t>(Mi % m);
    uint64_t inv = powmod_u64(mi % m, euler_phi_u64(m) - 1, m);  // mi^{-1} mod m
    x += Int(r) * Mi * inv;
  }
  x %= M;
  if (x < 0) x += M;
  return static_cast<uint64_t>(x);
}

}  // namespace chardetail

class LiftedCharacter;

class DirichletCharacter {
 public:
  DirichletCharacter() = default;

  // char_make. Assignments map canonical generators to unit values; each
  // value's multiplicative order must divide the generator's order.
  static DirichletCharacter make(uint64_t N,
                                 const std::vector<std::pair<uint64_t, FieldElement>>& assignments,
                                 const Field& target) {
    DirichletCharacter chi;
    chi.modulus_ = N;
    chi.field_ = target;
    chi.gens_ = unit_group_generators(N);
    chi.values_.reserve(chi.gens_.size());
    // Slots are filled in canonical order, each assignment consumed at most
    // once. Exact key matches win; a key that merely reduces to the generator
    // (a global lift) is a fallback, so e.g. mod 40 the key 7 cannot shadow
    // the mod-5 generator 2 even though 7 = 2 (mod 5).
    std::vector<bool> used(assignments.size(), false);
    for (const auto& G : chi.gens_) {
      const FieldElement* found = nullptr;
      for (size_t a = 0; a < assignments.size() && !found; ++a)
        if (!used[a] && assignments[a].first == G.gen) {
          found = &assignments[a].second;
          used[a] = true;
        }
      for (size_t a = 0; a < assignments.size() && !found; ++a)
        if (!used[a] && assignments[a].first % G.prime_power == G.gen) {
          found = &assignments[a].second;
          used[a] = true;
        }
      if (!found)
        raise(errc::incomplete_assignment,
              "no value assigned to generator " + std::to_string(G.gen) + " mod " +
                  std::to_string(G.prime_power));
      if (!(found->field() == target)) raise(errc::field_mismatch, "value in wrong field");
      if (found->is_zero()) raise(errc::bad_order, "character value must be a unit");
      uint64_t t = found->order();
      if (G.order % t != 0)
        raise(errc::bad_order, "value order " + std::to_string(t) +
                                   " does not divide generator order " + std::to_string(G.order));
      chi.values_.push_back(*found);
    }
    if (assignments.size() != chi.gens_.size())
      raise(errc::incomplete_assignment, "assignment count does not match generator count");
    chi.finish();
    return chi;
  }

  static DirichletCharacter trivial(uint64_t N, const Field& target) {
    std::vector<std::pair<uint64_t, FieldElement>> assign;
    for (const auto& G : unit_group_generators(N)) assign.emplace_back(G.gen, target.one());
    return make(N, assign, target);
  }

  uint64_t modulus() const { return modulus_; }
  uint64_t conductor() const { return conductor_; }
  uint64_t order() const { return order_; }
  const Field& field() const { return field_; }
  const std::vector<UnitGenerator>& generators() const { return gens_; }
  const std::vector<FieldElement>& generator_values() const { return values_; }
  bool is_trivial() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus_; }

  // char_eval; zero on non-units.
  FieldElement operator()(int64_t m) const {
    uint64_t r = reduce_mod(m, modulus_);
    if (modulus_ > 1 && std::gcd(r, modulus_) != 1) return field_.zero();
    FieldElement out = field_.one();
    if (modulus_ == 1) return out;
    auto exps = chardetail::generator_exponents(r, modulus_, gens_);
    for (size_t i = 0; i < exps.size(); ++i)
      out = out * values_[i].pow(static_cast<int64_t>(exps[i]));
    return out;
  }

  bool is_odd() const { return !(*this)(-1).is_one(); }

  // The same character seen at its conductor.
  DirichletCharacter primitivize() const {
    if (is_primitive()) return *this;
    std::vector<std::pair<uint64_t, FieldElement>> assign;
    for (const auto& G : unit_group_generators(conductor_)) {
      uint64_t lift = lift_to_unit(G.gen, conductor_, modulus_);
      assign.emplace_back(G.gen, (*this)(static_cast<int64_t>(lift)));
    }
    return make(conductor_, assign, field_);
  }

  bool equal_primitive(const DirichletCharacter& other) const {
    if (!(field_ == other.field_) || conductor_ != other.conductor_) return false;
    DirichletCharacter a = primitivize(), b = other.primitivize();
    return a.values_ == b.values_;
  }

  // Pointwise product, modeled at modulus M (both moduli must divide M).
  static DirichletCharacter product(const DirichletCharacter& a, const DirichletCharacter& b,
                                    uint64_t M) {
    if (!(a.field_ == b.field_)) raise(errc::field_mismatch, "characters over different fields");
    if (M % a.modulus_ != 0 || M % b.modulus_ != 0)
      raise(errc::bad_level_divisibility, "product modulus must be divisible by both moduli");
    std::vector<std::pair<uint64_t, FieldElement>> assign;
    for (const auto& G : unit_group_generators(M)) {
      uint64_t g = chardetail::crt_combine(crt_residues_for(G, M));
      assign.emplace_back(G.gen, a(static_cast<int64_t>(g)) * b(static_cast<int64_t>(g)));
    }
    return make(M, assign, a.field_);
  }

  LiftedCharacter lift() const;  // char_lift

  // chi(N;g1:v1,...)
  std::string to_string() const {
    std::ostringstream os;
    os << "chi(" << modulus_ << ';';
    for (size_t i = 0; i < gens_.size(); ++i) {
      if (i) os << ',';
      os << gens_[i].gen << ':' << values_[i].to_string();
    }
    os << ')';
    return os.str();
  }

  static DirichletCharacter parse(std::string_view token, const Field& F) {
    if (token.substr(0, 4) != "chi(" || token.back() != ')')
      raise(errc::parse_error, "character token must look like chi(N;...)");
    std::string_view body = token.substr(4, token.size() - 5);
    size_t semi = body.find(';');
    if (semi == std::string_view::npos) raise(errc::parse_error, "character token missing ';'");
    uint64_t N = gfdetail::parse_u64(body.substr(0, semi), "character modulus");
    std::string_view rest = body.substr(semi + 1);
    std::vector<std::pair<uint64_t, FieldElement>> assign;
    while (!rest.empty()) {
      size_t close = rest.find(']');
      if (close == std::string_view::npos) raise(errc::parse_error, "unterminated element token");
      std::string_view piece = rest.substr(0, close + 1);
      size_t colon = piece.find(':');
      if (colon == std::string_view::npos) raise(errc::parse_error, "generator entry missing ':'");
      uint64_t g = gfdetail::parse_u64(piece.substr(0, colon), "generator");
      assign.emplace_back(g, FieldElement::parse(piece.substr(colon + 1), F));
      rest = rest.substr(close + 1);
      if (!rest.empty() && rest.front() == ',') rest.remove_prefix(1);
    }
    return make(N, assign, F);
  }

  bool operator==(const DirichletCharacter& o) const {
    return modulus_ == o.modulus_ && field_ == o.field_ && values_ == o.values_;
  }

 private:
  static uint64_t reduce_mod(int64_t m, uint64_t N) {
    int64_t n = static_cast<int64_t>(N);
    int64_t r = m % n;
    if (r < 0) r += n;
    return static_cast<uint64_t>(r);
  }

  // Unit u mod big with u = g (mod small), small | big.
  static uint64_t lift_to_unit(uint64_t g, uint64_t small, uint64_t big) {
    std::vector<std::pair<uint64_t, uint64_t>> residues;
    for (const auto& pp : factorize_u64(big)) {
      uint64_t sm = 1;
      uint64_t tmp = small;
      while (tmp % pp.prime == 0) {
        sm *= pp.prime;
        tmp /= pp.prime;
      }
      residues.emplace_back(sm > 1 ? g % sm : 1, pp.value);
    }
    uint64_t u = chardetail::crt_combine(residues);
    return u == 0 ? 1 : u;  // big == 1
  }

  static std::vector<std::pair<uint64_t, uint64_t>> crt_residues_for(const UnitGenerator& G,
                                                                     uint64_t M) {
    std::vector<std::pair<uint64_t, uint64_t>> residues;
    for (const auto& pp : factorize_u64(M))
      residues.emplace_back(pp.value == G.prime_power ? G.gen % pp.value : 1, pp.value);
    return residues;
  }

  void finish() {
    // order = lcm of value orders
    order_ = 1;
    for (const auto& v : values_) order_ = std::lcm(order_, v.order());
    // conductor = product of local conductors
    conductor_ = 1;
    for (size_t i = 0; i < gens_.size(); ++i) {
      const auto& G = gens_[i];
      if (G.prime == 2 && G.exp >= 3) continue;  // handled below as a pair
      uint64_t t = values_[i].order();
      if (t == 1) continue;
      // smallest b >= 1 with t | phi(l^b); the prime-to-l part of t always
      // divides l-1, so b = v_l(t) + 1
      unsigned b = 1;
      uint64_t tt = t;
      while (tt % G.prime == 0) {
        tt /= G.prime;
        ++b;
      }
      uint64_t lb = 1;
      for (unsigned j = 0; j < b; ++j) lb *= G.prime;
      conductor_ *= lb;
    }
    // the 2^e (e >= 3) pair
    for (size_t i = 0; i < gens_.size(); ++i) {
      const auto& G = gens_[i];
      if (!(G.prime == 2 && G.exp >= 3)) continue;
      if (G.gen != G.prime_power - 1) continue;  // handle once, at the -1 slot
      uint64_t t_minus = values_[i].order();
      uint64_t t_five = values_[i + 1].order();  // 5 always follows -1
      uint64_t local = 1;
      if (t_five > 1) {
        local = 4 * t_five;  // 2^{s+2} where t_five = 2^s
      } else if (t_minus > 1) {
        local = 4;
      }
      conductor_ *= local;
      break;
    }
  }

  uint64_t modulus_ = 1;
  uint64_t conductor_ = 1;
  uint64_t order_ = 1;
  Field field_;
  std::vector<UnitGenerator> gens_;
  std::vector<FieldElement> values_;

  friend class LiftedCharacter;
};

// A character lifted to exact cyclotomic values: value(g_i) = zeta_n^{e_i}
// with n the character order. Reduction back along
// zeta_n -> nth_root_of_unity(F, n) recovers the original values.
class LiftedCharacter {
 public:
  uint64_t modulus() const { return modulus_; }
  uint64_t conductor() const { return conductor_; }
  uint32_t order() const { return order_; }
  const Field& field() const { return field_; }
  bool is_trivial() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus_; }

  CycloRational eval(int64_t m) const {
    int64_t n = static_cast<int64_t>(modulus_);
    int64_t rr = m % n;
    if (rr < 0) rr += n;
    uint64_t r = static_cast<uint64_t>(rr);
    if (modulus_ > 1 && std::gcd(r, modulus_) != 1) return CycloRational();  // zero
    if (modulus_ == 1) return CycloRational(Rat(1));
    auto exps = chardetail::generator_exponents(r, modulus_, gens_);
    uint64_t e = 0;
    for (size_t i = 0; i < exps.size(); ++i) e = (e + exps[i] % order_ * zeta_exps_[i]) % order_;
    return CycloRational::zeta_power(order_, e);
  }

  bool is_odd() const { return eval(-1) != CycloRational(Rat(1)); }

  // The reduced (finite field) character this lift came from.
  const DirichletCharacter& reduced() const { return source_; }

 private:
  friend class DirichletCharacter;
  uint64_t modulus_ = 1;
  uint64_t conductor_ = 1;
  uint32_t order_ = 1;
  Field field_;
  std::vector<UnitGenerator> gens_;
  std::vector<uint64_t> zeta_exps_;
  DirichletCharacter source_;
};

inline LiftedCharacter DirichletCharacter::lift() const {
  if (order_ % field_.characteristic() == 0)
    raise(errc::ramified_order, "character order divisible by the characteristic");
  LiftedCharacter L;
  L.modulus_ = modulus_;
  L.conductor_ = conductor_;
  L.order_ = static_cast<uint32_t>(order_);
  L.field_ = field_;
  L.gens_ = gens_;
  L.source_ = *this;
  FieldElement omega = field_.nth_root_of_unity(order_);
  for (const auto& v : values_) {
    bool found = false;
    FieldElement w = field_.one();
    for (uint64_t e = 0; e < order_; ++e) {
      if (w == v) {
        L.zeta_exps_.push_back(e);
        found = true;
        break;
      }
      w = w * omega;
    }
    if (!found) raise(errc::no_such_root, "value is not a power of the canonical root (unreachable)");
  }
  return L;
}

// Generalized Bernoulli numbers from the generating function
//   sum_{j=1}^{n} eps(j) x e^{jx} / (e^{nx} - 1) = sum_k B_k^eps x^k / k!,
// n the modulus of eps. Computed by exact truncated series division; the
// numerator over x is A(x) = sum_j eps(j) e^{jx} and the denominator is
// (e^{nx} - 1)/x, whose constant term n is invertible.
inline CycloRational gen_bernoulli(unsigned k, const LiftedCharacter& eps) {
  uint64_t n = eps.modulus();
  std::vector<CycloRational> A(k + 1);
  std::vector<Rat> fact_inv(k + 1);
  Int f = 1;
  for (unsigned i = 0; i <= k; ++i) {
    if (i) f *= i;
    fact_inv[i] = Rat(Int(1), f);
  }
  for (uint64_t j = 1; j <= n; ++j) {
    CycloRational ej = eps.eval(static_cast<int64_t>(j));
    if (ej.is_zero()) continue;
    Int jp = 1;
    for (unsigned i = 0; i <= k; ++i) {
      A[i] += ej * Rat(jp * rat_num(fact_inv[i]), rat_den(fact_inv[i]));
      jp *= j;
    }
  }
  std::vector<Rat> D(k + 1);
  Int np = n;
  for (unsigned i = 0; i <= k; ++i) {
    D[i] = Rat(np, factorial_int(i + 1));
    np *= n;
  }
  // S = A / D, k+1 terms
  std::vector<CycloRational> S(k + 1);
  for (unsigned m = 0; m <= k; ++m) {
    CycloRational acc = A[m];
    for (unsigned i = 0; i < m; ++i) acc -= S[i] * D[m - i];
    S[m] = acc / D[0];
  }
  return S[k] * Rat(factorial_int(k));
}

// All coordinate denominators coprime to p.
inline bool p_integral_check(const CycloRational& c, uint64_t p) { return c.is_p_integral(p); }

}  // namespace kats
