#pragma once

// Eisenstein q-expansions. The exact series lives over cyclotomic rationals:
//
//   E_k^{eps1,eps2}(q) = c0 + sum_{m>=1} ( sum_{0<d|m} eps1(d) eps2(m/d) d^{k-1} ) q^m
//
// with c0 = -B_k^{eps1}/2k when cond(eps2) = 1 and c0 = 0 otherwise. The
// stretch variant E^{...,t} is E_2^{1,1}(q) - t E_2^{1,1}(q^t) in the weight-2
// all-trivial case and E_k^{eps1,eps2}(q^t) otherwise; it lives at level
// t*u*v for conductors u, v. Reduction mod p yields a Katz form whenever the
// constant term is p-integral (all higher coefficients are algebraic
// integers), together with its reducible representation data
// eps' (+) eps*chi_p^{k-1}.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kats/characters.hpp"
#include "kats/cyclo.hpp"
#include "kats/errors.hpp"
#include "kats/numeric.hpp"
#include "kats/qseries.hpp"

namespace kats {

struct EisensteinSpec {
  unsigned k;
  LiftedCharacter eps1;  // rides d^{k-1} in the divisor sum, and the Bernoulli number
  LiftedCharacter eps2;  // gates the constant term by its conductor
  uint64_t t;

  EisensteinSpec(unsigned k_, LiftedCharacter e1, LiftedCharacter e2, uint64_t t_ = 1)
      : k(k_), eps1(std::move(e1)), eps2(std::move(e2)), t(t_) {
    if (k < 1) raise(errc::usage_error, "Eisenstein weight must be >= 1");
    if (t < 1) raise(errc::usage_error, "stretch factor must be >= 1");
    if (!eps1.is_primitive() || !eps2.is_primitive())
      raise(errc::imprimitive_character, "Eisenstein characters must be primitive");
    bool product_odd = eps1.is_odd() != eps2.is_odd();
    if (product_odd != (k % 2 == 1))
      raise(errc::parity_violation, "(eps1 eps2)(-1) != (-1)^k for k = " + std::to_string(k));
    if (k == 2 && eps1.is_trivial() && eps2.is_trivial() && t == 1)
      raise(errc::illegal_e2, "weight-2 all-trivial series needs a stretch t > 1");
  }

  bool weight2_combination() const { return k == 2 && eps1.is_trivial() && eps2.is_trivial(); }
  uint64_t level() const { return t * eps1.conductor() * eps2.conductor(); }
};

namespace eisdetail {

// Coefficients a_1..a_B of the unstretched series (a_0 handled separately).
inline void divisor_sums(const EisensteinSpec& spec, std::vector<CycloRational>& a) {
  size_t B = a.size() - 1;
  for (uint64_t d = 1; d <= B; ++d) {
    CycloRational e1d = spec.eps1.eval(static_cast<int64_t>(d));
    if (e1d.is_zero()) continue;
    CycloRational term = e1d * Rat(int_pow(Int(d), spec.k - 1));
    for (uint64_t m = d; m <= B; m += d) {
      CycloRational e2 = spec.eps2.eval(static_cast<int64_t>(m / d));
      if (!e2.is_zero()) a[m] += term * e2;
    }
  }
}

}  // namespace eisdetail

// Constant term of the unstretched series: -B_k^{eps1}/2k, or 0 when eps2 is
// nontrivial.
inline CycloRational eisenstein_c0(const EisensteinSpec& spec) {
  if (spec.eps2.conductor() != 1) return CycloRational();
  return -(gen_bernoulli(spec.k, spec.eps1) / Rat(2 * spec.k));
}

// Exact expansion of E_k^{eps1,eps2,t} to precision B (coefficients 0..B).
inline std::vector<CycloRational> eisenstein_qexp(const EisensteinSpec& spec, size_t B) {
  CycloRational c0 = eisenstein_c0(spec);
  if (spec.t == 1) {
    std::vector<CycloRational> a(B + 1);
    a[0] = c0;
    eisdetail::divisor_sums(spec, a);
    return a;
  }
  std::vector<CycloRational> base(B / spec.t + 1);
  base[0] = c0;
  eisdetail::divisor_sums(spec, base);
  std::vector<CycloRational> out(B + 1);
  if (spec.weight2_combination()) {
    // E_2(q) - t E_2(q^t); recompute the q-part of E_2 to full precision.
    std::vector<CycloRational> full(B + 1);
    full[0] = c0;
    eisdetail::divisor_sums(spec, full);
    Rat tr(spec.t);
    for (size_t n = 0; n <= B; ++n) {
      out[n] = full[n];
      if (n % spec.t == 0) out[n] -= base[n / spec.t] * tr;
    }
  } else {
    for (size_t n = 0; n * spec.t <= B; ++n) out[n * spec.t] = base[n];
  }
  return out;
}

// Semisimple rank-2 representation data eps'*chi_p^a (+) eps*chi_p^b, the
// shape attached to Eisenstein eigensystems. Exponents are kept reduced mod
// p - 1 (chi_p has order p - 1 on Frobenius traces).
struct ReducibleRep {
  DirichletCharacter eps;   // summand eps * chi_p^b
  DirichletCharacter epsp;  // summand eps' * chi_p^a
  uint64_t a = 0;
  uint64_t b = 0;

  ReducibleRep() = default;
  ReducibleRep(DirichletCharacter eps_, DirichletCharacter epsp_, uint64_t a_, uint64_t b_)
      : eps(std::move(eps_)), epsp(std::move(epsp_)) {
    if (!(eps.field() == epsp.field()))
      raise(errc::field_mismatch, "representation summands over different fields");
    uint64_t pm1 = eps.field().characteristic() - 1;
    a = pm1 ? a_ % pm1 : 0;
    b = pm1 ? b_ % pm1 : 0;
  }

  const Field& field() const { return eps.field(); }
  uint64_t modulus() const { return std::lcm(eps.modulus(), epsp.modulus()); }
};

// (trace, det) of the representation at Frob_l, for l coprime to p and the
// character moduli: (eps'(l) l^a + eps(l) l^b, eps(l) eps'(l) l^{a+b}).
inline std::pair<FieldElement, FieldElement> rep_trace_det(const ReducibleRep& rho, uint64_t l) {
  const Field& F = rho.field();
  if (!is_prime_u64(l) || l == F.characteristic() || std::gcd(l, rho.modulus()) != 1)
    raise(errc::bad_prime, "trace needs a prime not dividing p or the character moduli");
  FieldElement lf = F.from_integer(static_cast<int64_t>(l));
  FieldElement la = lf.pow(static_cast<int64_t>(rho.a));
  FieldElement lb = lf.pow(static_cast<int64_t>(rho.b));
  FieldElement tr = rho.epsp(static_cast<int64_t>(l)) * la + rho.eps(static_cast<int64_t>(l)) * lb;
  FieldElement det = rho.eps(static_cast<int64_t>(l)) * rho.epsp(static_cast<int64_t>(l)) * la * lb;
  return {tr, det};
}

enum class RepMatch { direct, swapped, none };

// Equality of semisimplifications: the unordered pairs of summands
// (character up to primitive equivalence, exponent mod p-1) must match.
inline RepMatch rep_equiv(const ReducibleRep& r1, const ReducibleRep& r2) {
  if (!(r1.field() == r2.field()))
    raise(errc::field_mismatch, "representations over different fields");
  uint64_t pm1 = r1.field().characteristic() - 1;
  auto exp_eq = [pm1](uint64_t x, uint64_t y) { return pm1 == 0 || x % pm1 == y % pm1; };
  bool direct = r1.epsp.equal_primitive(r2.epsp) && exp_eq(r1.a, r2.a) &&
                r1.eps.equal_primitive(r2.eps) && exp_eq(r1.b, r2.b);
  if (direct) return RepMatch::direct;
  bool swapped = r1.epsp.equal_primitive(r2.eps) && exp_eq(r1.a, r2.b) &&
                 r1.eps.equal_primitive(r2.epsp) && exp_eq(r1.b, r2.a);
  return swapped ? RepMatch::swapped : RepMatch::none;
}

inline const char* rep_match_name(RepMatch m) {
  switch (m) {
    case RepMatch::direct: return "direct";
    case RepMatch::swapped: return "swapped";
    case RepMatch::none: return "none";
  }
  return "?";
}

struct EisensteinForm {
  ModularForm form;
  ReducibleRep rep;
};

// Mod-p reduction of E_k^{eps1,eps2,t} where eps1, eps2 lift eps, eps' into
// characteristic zero: a ModularForm of level t*u*v, weight k, nebentypus
// eps*eps', plus the representation data eps' (+) eps*chi_p^{k-1}.
inline EisensteinForm katz_eisenstein(unsigned k, const DirichletCharacter& eps,
                                      const DirichletCharacter& epsp, uint64_t t, size_t prec) {
  if (!(eps.field() == epsp.field()))
    raise(errc::field_mismatch, "the two characters target different fields");
  const Field F = eps.field();
  uint64_t p = F.characteristic();
  if (!eps.is_primitive() || !epsp.is_primitive())
    raise(errc::imprimitive_character, "reduction is defined for primitive characters");

  EisensteinSpec spec(k, eps.lift(), epsp.lift(), t);
  uint64_t level = spec.level();
  if (std::gcd(level, p) != 1)
    raise(errc::characteristic_divides_level,
          "level " + std::to_string(level) + " not coprime to p = " + std::to_string(p));
  CycloRational c0 = eisenstein_c0(spec);
  if (!p_integral_check(c0, p))
    raise(errc::not_p_integral,
          "constant term " + c0.to_string() + " has denominator divisible by " + std::to_string(p));

  std::vector<CycloRational> exact = eisenstein_qexp(spec, prec);
  QExpansion q(F, prec);
  for (size_t n = 0; n <= prec; ++n) q.set(n, exact[n].reduce(F));

  DirichletCharacter chi = DirichletCharacter::product(eps, epsp, level);
  ModularForm form(std::move(q), level, static_cast<int64_t>(k), std::move(chi));
  ReducibleRep rep(eps, epsp, 0, k - 1);
  return {std::move(form), std::move(rep)};
}

}  // namespace kats
