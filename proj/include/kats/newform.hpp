#pragma once
// Old spaces and structure procedures for truncated forms in characteristic p:
// generator enumeration (weight-raising words and level degeneracies), exact
// membership testing with certification bounds, eigenform surgery (killing bad
// primes, theta-kernel descent, eigensystem comparison), and the two-stage
// decomposition of a form over the old space attached to a newform.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kats/characters.hpp"
#include "kats/eisenstein.hpp"
#include "kats/errors.hpp"
#include "kats/gf.hpp"
#include "kats/linalg.hpp"
#include "kats/numeric.hpp"
#include "kats/qseries.hpp"

namespace kats {

// Coefficient bound certifying equality of two forms of weight `kprime` on
// Gamma_0(M)-level M: agreement of a_0..a_B with B = ceil(kprime*[SL2 index]/12)
// forces equality.  Exact integer arithmetic; the index is M*prod(1+1/l).
inline size_t sturm_bound(uint64_t M, int64_t kprime) {
  if (M == 0) raise(errc::usage_error, "level must be positive");
  if (kprime < 0) raise(errc::usage_error, "weight must be nonnegative");
  Int num = Int(kprime) * M;
  Int den = 12;
  for (uint64_t l : prime_divisors_u64(M)) {
    num *= (l + 1);
    den *= l;
  }
  Int bound = (num + den - 1) / den + 1;
  constexpr uint64_t cap = uint64_t(1) << 62;
  if (bound > cap) return static_cast<size_t>(cap);
  return static_cast<size_t>(static_cast<uint64_t>(bound));
}

// One old-space generator: the image of the seed form under q -> q^(d*p^j),
// with the weight raised by Hasse multiples as needed.
struct OldGenerator {
  uint64_t d = 1;    // degeneracy stretch
  unsigned j = 0;    // Frobenius twists applied
  ModularForm form;
};

struct OldSpaceBasis {
  uint64_t level = 1;
  int64_t weight = 0;
  std::vector<OldGenerator> gens;
};

// All ways to raise f from weight k to weight kprime at fixed level: apply
// Frobenius j times (weight k*p^j) then Hasse multiples for the remaining
// (p-1)-divisible gap.  Returns an empty basis when no j qualifies.
inline OldSpaceBasis weight_old_generators(const ModularForm& f, int64_t kprime) {
  const uint64_t p = f.expansion().field().characteristic();
  const int64_t k = f.weight();
  if (k < 1) raise(errc::usage_error, "weight raising needs a positive starting weight");
  OldSpaceBasis out{f.level(), kprime, {}};
  for (unsigned j = 0;; ++j) {
    Int w = Int(k) * int_pow(Int(p), j);
    if (w > kprime) break;
    Int gap = Int(kprime) - w;
    if (gap % (p - 1) != 0) continue;
    uint64_t steps = static_cast<uint64_t>(Int(gap / (p - 1)));
    ModularForm g = f;
    for (unsigned i = 0; i < j; ++i) g = frobenius(g);
    out.gens.push_back({1, j, hasse_mult(g, steps)});
  }
  return out;
}

// Degeneracy images f(q^d) for every d | M/N, all viewed at level M.
inline OldSpaceBasis level_old_generators(const ModularForm& f, uint64_t M) {
  const uint64_t p = f.expansion().field().characteristic();
  if (M == 0 || M % f.level() != 0)
    raise(errc::bad_level, "target level is not a multiple of the source level");
  if (std::gcd(M, p) != 1)
    raise(errc::bad_level, "target level shares a factor with the characteristic");
  OldSpaceBasis out{M, f.weight(), {}};
  for (uint64_t d : divisors_u64(M / f.level()))
    out.gens.push_back({d, 0, degeneracy_Bd(f, d, M)});
  return out;
}

// Full old space attached to f inside level M, weight kprime: weight words
// first, then every degeneracy stretch of each.  Ordered by (d, j).
inline OldSpaceBasis combined_old_generators(const ModularForm& f, uint64_t M,
                                             int64_t kprime) {
  OldSpaceBasis weights = weight_old_generators(f, kprime);
  const uint64_t p = f.expansion().field().characteristic();
  if (M == 0 || M % f.level() != 0)
    raise(errc::bad_level, "target level is not a multiple of the source level");
  if (std::gcd(M, p) != 1)
    raise(errc::bad_level, "target level shares a factor with the characteristic");
  OldSpaceBasis out{M, kprime, {}};
  for (uint64_t d : divisors_u64(M / f.level()))
    for (const OldGenerator& g : weights.gens)
      out.gens.push_back({d, g.j, degeneracy_Bd(g.form, d, M)});
  return out;
}

enum class Verdict { member, member_up_to_precision, non_member };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::member_up_to_precision: return "member-up-to-precision";
    case Verdict::non_member: return "non-member";
  }
  return "?";
}

struct MembershipResult {
  Verdict verdict = Verdict::non_member;
  // Combination coefficients, aligned with the basis generators; empty for
  // non-members.
  std::vector<FieldElement> coeffs;
  std::vector<std::pair<uint64_t, unsigned>> labels;  // (d, j) per generator
  size_t certified_precision = 0;  // coefficients checked: a_0..a_B
  size_t sturm = 0;                // bound needed for a proof
  std::optional<size_t> witness;   // first unmatchable exponent
};

namespace nfdetail {

inline size_t row_lead(const std::vector<FieldElement>& row) {
  for (size_t i = 0; i < row.size(); ++i)
    if (!row[i].is_zero()) return i;
  return row.size();
}

// Incremental consistency scan of [gens | F] row by row (rows indexed by the
// q-exponent), reporting the first exponent whose equation is unsolvable.
inline std::optional<size_t> first_obstruction(
    const std::vector<const ModularForm*>& gens, const ModularForm& F, size_t B) {
  const size_t g = gens.size();
  std::vector<std::vector<FieldElement>> rows;  // reduced rows, sorted by lead
  for (size_t n = 0; n <= B; ++n) {
    std::vector<FieldElement> v(g + 1, F.expansion().field().zero());
    for (size_t i = 0; i < g; ++i) v[i] = gens[i]->coeff(n);
    v[g] = F.coeff(n);
    for (const auto& row : rows) {
      size_t lead = row_lead(row);
      if (v[lead].is_zero()) continue;
      FieldElement c = v[lead];
      for (size_t idx = lead; idx <= g; ++idx) v[idx] = v[idx] - c * row[idx];
    }
    size_t lead = row_lead(v);
    if (lead > g) continue;
    if (lead == g) return n;
    FieldElement inv = v[lead].inv();
    for (size_t idx = lead; idx <= g; ++idx) v[idx] = v[idx] * inv;
    auto at = std::upper_bound(rows.begin(), rows.end(), lead,
                               [](size_t key, const std::vector<FieldElement>& r) {
                                 return key < row_lead(r);
                               });
    rows.insert(at, std::move(v));
  }
  return std::nullopt;
}

}  // namespace nfdetail

// Exact membership of F in the span of the basis generators, comparing
// coefficients a_0..a_B with B the largest exponent known on every side.
// The verdict is upgraded from "up to precision" to a certified membership
// when B reaches the Sturm-type bound for (basis.level, basis.weight).
inline MembershipResult membership(const ModularForm& F, const OldSpaceBasis& basis) {
  const Field& K = F.expansion().field();
  if (F.level() != basis.level || F.weight() != basis.weight)
    raise(errc::mixed_metadata, "candidate and basis disagree on level or weight");
  size_t B = F.prec();
  std::vector<const ModularForm*> gens;
  for (const OldGenerator& g : basis.gens) {
    if (!(g.form.expansion().field() == K))
      raise(errc::mixed_metadata, "basis generator lives over a different field");
    if (g.form.level() != basis.level || g.form.weight() != basis.weight)
      raise(errc::mixed_metadata, "basis generator disagrees on level or weight");
    B = std::min(B, g.form.prec());
    gens.push_back(&g.form);
  }

  MembershipResult out;
  out.certified_precision = B;
  out.sturm = sturm_bound(basis.level, basis.weight);
  for (const OldGenerator& g : basis.gens) out.labels.emplace_back(g.d, g.j);

  out.witness = nfdetail::first_obstruction(gens, F, B);
  if (out.witness) {
    out.verdict = Verdict::non_member;
    return out;
  }

  // Consistent: extract the least-index solution from the full system.
  std::vector<std::vector<FieldElement>> columns;
  std::vector<FieldElement> rhs;
  for (const ModularForm* g : gens) {
    std::vector<FieldElement> col;
    col.reserve(B + 1);
    for (size_t n = 0; n <= B; ++n) col.push_back(g->coeff(n));
    columns.push_back(std::move(col));
  }
  rhs.reserve(B + 1);
  for (size_t n = 0; n <= B; ++n) rhs.push_back(F.coeff(n));
  auto sol = solve_columns(K, columns, rhs);
  if (!sol) raise(errc::usage_error, "internal: obstruction scan and solver disagree");
  out.coeffs = *sol;
  out.verdict = B >= out.sturm ? Verdict::member : Verdict::member_up_to_precision;
  return out;
}

// Strip the Euler factors at a set S of bad primes from a normalized
// eigenform: f~ = prod_{l in S} (1 - a_l V_l) applied to f, an eigenform of
// level N*prod(S) whose T_l-eigenvalues vanish for l in S.  The operators are
// applied one prime at a time; a single subtraction per prime would miss the
// cross terms (at n = 6 with S = {2,3} the q^6 coefficient needs +a_2 a_3)
// and the result would not be an eigenform.  Output precision is
// floor(prec/max S); eigenform-ness is verified over the available range.
inline ModularForm lemma31_kill(const ModularForm& f, std::vector<uint64_t> S) {
  EigenCheck chk = is_eigen_upto(f, f.prec());
  if (!chk.ok)
    raise(errc::not_eigenform, "input is not an eigenform over its precision",
          chk.witness->l);
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  if (S.empty()) return f;
  uint64_t L = f.level();
  for (uint64_t l : S) {
    if (!is_prime_u64(l) || f.level() % l != 0)
      raise(errc::s_not_dividing_level, "kill set must consist of primes dividing the level", l);
    L *= l;
  }
  uint64_t m = S.back();
  if (f.prec() < m)
    raise(errc::precision_underflow, "precision too small to read the killed eigenvalues");
  ModularForm g = normalized_copy(f);
  size_t outB = g.prec() / m;
  QExpansion cur = g.expansion();
  for (uint64_t l : S) {
    QExpansion next(cur.field(), cur.prec());
    FieldElement al = cur.coeff(l);
    for (size_t n = 0; n <= cur.prec(); ++n) {
      FieldElement c = cur.coeff(n);
      if (n % l == 0) c = c - al * cur.coeff(n / l);
      next.set(n, c);
    }
    cur = std::move(next);
  }
  return ModularForm(cur.truncated(outB), L, g.weight(), g.character());
}

struct ThetaKernelDecomposition {
  unsigned r = 0;  // Hasse multiples split off
  ModularForm g;   // the form with f = A^r g(q^p)
};

// Invert theta-kernel membership: a form killed by theta has all its support
// on exponents divisible by p, and factors as A^r g(q^p) with
// r = (-k mod p) and g of weight (k - r(p-1))/p.
inline ThetaKernelDecomposition theta_kernel_decompose(const ModularForm& f) {
  const uint64_t p = f.expansion().field().characteristic();
  for (size_t n = 0; n <= f.prec(); ++n)
    if (n % p != 0 && !f.coeff(n).is_zero())
      raise(errc::theta_nonzero, "form is not in the theta kernel", n);
  const int64_t k = f.weight();
  const uint64_t r = (p - static_cast<uint64_t>(k % static_cast<int64_t>(p))) % p;
  const int64_t num = k - static_cast<int64_t>(r * (p - 1));
  if (num < 0)
    raise(errc::negative_weight, "descended weight would be negative");
  if (num % static_cast<int64_t>(p) != 0)
    raise(errc::usage_error, "internal: descended weight not divisible by p");
  size_t outB = f.prec() / p;
  QExpansion q(f.expansion().field(), outB);
  for (size_t m = 0; m <= outB; ++m) q.set(m, f.coeff(m * p));
  ModularForm g(std::move(q), f.level(), num / static_cast<int64_t>(p), f.character());
  return {static_cast<unsigned>(r), std::move(g)};
}

struct Prop24Report {
  bool weight_congruent = false;   // k_f = k_g mod (p-1)
  bool characters_equal = false;   // after primitivization
  bool expansions_agree = false;   // over the common precision
  size_t compared_precision = 0;
  // (k_f - k_g)/(p-1) when the weights are congruent and expansions agree:
  // the larger-weight form is the Hasse-multiple image of the smaller.
  std::optional<int64_t> hasse_steps;
};

// Diagnostic for "equal q-expansions force congruent weights": reports the
// three relevant comparisons without passing judgement.
inline Prop24Report check_prop24(const ModularForm& f, const ModularForm& g) {
  if (!(f.expansion().field() == g.expansion().field()))
    raise(errc::field_mismatch, "forms live over different fields");
  const int64_t p = static_cast<int64_t>(f.expansion().field().characteristic());
  Prop24Report rep;
  int64_t diff = f.weight() - g.weight();
  rep.weight_congruent = p == 2 || diff % (p - 1) == 0;
  rep.characters_equal = f.character().equal_primitive(g.character());
  rep.compared_precision = std::min(f.prec(), g.prec());
  rep.expansions_agree = QExpansion::agree(f.expansion(), g.expansion());
  if (rep.weight_congruent && rep.expansions_agree && p > 2)
    rep.hasse_steps = diff / (p - 1);
  else if (rep.weight_congruent && rep.expansions_agree)
    rep.hasse_steps = diff;
  return rep;
}

struct CompareResult {
  bool equal = true;
  // (l, a_l(f), a_l(g)) for each compared prime, up to and including the
  // first divergence when one exists.
  std::vector<std::tuple<uint64_t, FieldElement, FieldElement>> table;
  std::optional<uint64_t> divergence;
};

// Compare the T_l-eigenvalue systems of two normalized eigenforms away from
// a set of bad primes.  Both inputs are certified as eigenforms over the
// compared range first.
inline CompareResult compare_eigensystems(const ModularForm& f, const ModularForm& g,
                                          const std::vector<uint64_t>& bad,
                                          uint64_t bound) {
  if (!(f.expansion().field() == g.expansion().field()))
    raise(errc::field_mismatch, "forms live over different fields");
  uint64_t B = std::min<uint64_t>(bound, std::min(f.prec(), g.prec()));
  EigenCheck cf = is_eigen_upto(f, B, bad);
  if (!cf.ok)
    raise(errc::not_eigenform, "first form fails the eigenform check", cf.witness->l);
  EigenCheck cg = is_eigen_upto(g, B, bad);
  if (!cg.ok)
    raise(errc::not_eigenform, "second form fails the eigenform check", cg.witness->l);
  ModularForm fn = normalized_copy(f);
  ModularForm gn = normalized_copy(g);
  CompareResult out;
  for (uint64_t l : primes_up_to(B)) {
    bool skip = false;
    for (uint64_t e : bad) skip = skip || e == l;
    if (skip) continue;
    FieldElement a = fn.coeff(l), b = gn.coeff(l);
    out.table.emplace_back(l, a, b);
    if (!(a == b)) {
      out.equal = false;
      out.divergence = l;
      break;
    }
  }
  return out;
}

struct Cor37Line {
  uint64_t l = 0;
  const char* case_label = "none";  // "i", "ii", "iii", or "none"
  bool satisfied = true;
  // Case (iii) involves l^(k-1); both natural weight readings are recorded.
  bool iii_with_weight_F = false;
  bool iii_with_weight_f = false;
  FieldElement a;  // a_l of the candidate
  FieldElement b;  // a_l of the seed newform
};

struct Cor37Report {
  bool all_satisfied = true;
  size_t bound = 0;
  std::vector<Cor37Line> lines;
};

// Classify each prime's eigenvalue relation between a form F of level M and
// the seed newform f of level N | M: equal away from Mp/N, zero-or-equal at
// primes dividing both M/N and N, and a quadratic relation at primes
// dividing Mp/N but not N.
inline Cor37Report check_cor37(const ModularForm& F, const ModularForm& f,
                               uint64_t bound = 0) {
  if (!(F.expansion().field() == f.expansion().field()))
    raise(errc::field_mismatch, "forms live over different fields");
  const uint64_t M = F.level(), N = f.level();
  const uint64_t p = F.expansion().field().characteristic();
  if (M % N != 0)
    raise(errc::level_not_divisible, "candidate level is not a multiple of the seed level");
  ModularForm Fn = normalized_copy(F);
  ModularForm fn = normalized_copy(f);
  Cor37Report rep;
  uint64_t B = std::min<uint64_t>(Fn.prec(), fn.prec());
  if (bound > 0) B = std::min(B, bound);
  rep.bound = B;
  const uint64_t Q = M / N;
  for (uint64_t l : primes_up_to(B)) {
    Cor37Line line;
    line.l = l;
    line.a = Fn.coeff(l);
    line.b = fn.coeff(l);
    const bool div_MpN = Q % l == 0 || l == p;
    const bool div_N = N % l == 0;
    if (!div_MpN) {
      line.case_label = "i";
      line.satisfied = line.a == line.b;
    } else if (Q % l == 0 && div_N) {
      line.case_label = "ii";
      line.satisfied = line.a.is_zero() || line.a == line.b;
    } else if (div_MpN && !div_N) {
      line.case_label = "iii";
      auto quad = [&](int64_t k) {
        FieldElement lk = Fn.expansion().field().from_integer(static_cast<int64_t>(l))
                              .pow(k - 1);
        return line.a * line.a - line.a * line.b + fn.char_at(static_cast<int64_t>(l)) * lk;
      };
      line.iii_with_weight_F = quad(Fn.weight()).is_zero();
      line.iii_with_weight_f = quad(fn.weight()).is_zero();
      line.satisfied =
          line.a.is_zero() || line.iii_with_weight_F || line.iii_with_weight_f;
    } else {
      line.case_label = "none";
      line.satisfied = true;  // no constraint applies; flagged by the label
    }
    rep.all_satisfied = rep.all_satisfied && line.satisfied;
    rep.lines.push_back(line);
  }
  return rep;
}

// Degenerate an eigenform to level lN with the T_l-eigenvalue replaced by a
// chosen root alpha of x^2 - a_l x + eps(l) l^(k-1):
// g = f(q) - (a_l - alpha) f(q^l).
inline ModularForm oldform_eigenform_at_l(const ModularForm& f, uint64_t l,
                                          const FieldElement& alpha) {
  const Field& K = f.expansion().field();
  const uint64_t p = K.characteristic();
  if (!is_prime_u64(l) || l == p || f.level() % l == 0)
    raise(errc::bad_prime, "need a prime not dividing the level or the characteristic", l);
  if (f.prec() < l)
    raise(errc::precision_underflow, "precision too small to read a_l");
  if (!(alpha.field() == K)) raise(errc::field_mismatch, "root lives in a different field");
  FieldElement al = f.coeff(l);
  FieldElement lk = K.from_integer(static_cast<int64_t>(l)).pow(f.weight() - 1);
  if (!(alpha * alpha - al * alpha + f.char_at(static_cast<int64_t>(l)) * lk).is_zero())
    raise(errc::not_a_root, "alpha does not satisfy the Hecke polynomial at l", l);
  FieldElement other = al - alpha;
  QExpansion out(K, f.prec());
  for (size_t n = 0; n <= f.prec(); ++n) {
    FieldElement c = f.coeff(n);
    if (n % l == 0) c = c - other * f.coeff(n / l);
    out.set(n, c);
  }
  return ModularForm(std::move(out), f.level() * l, f.weight(), f.character());
}

enum class Lemma45Case { i, ii, iii, iv };

inline const char* lemma45_case_name(Lemma45Case c) {
  switch (c) {
    case Lemma45Case::i: return "i";
    case Lemma45Case::ii: return "ii";
    case Lemma45Case::iii: return "iii";
    case Lemma45Case::iv: return "iv";
  }
  return "?";
}

struct Lemma45Result {
  ModularForm form;
  ReducibleRep rep;
};

// Produce the eigenform theta^a(E) attached to a reducible representation
// eps' + eps chi^(k-1+...), split into the four hypothesis regimes for the
// pair (eps, eps') and the weight k in 1..p+1:
//   (i)   eps' nontrivial:            theta^a E_k(eps, eps')
//   (ii)  both trivial, k = 2, p >= 5: theta^a E_(p^2+1)(1, 1)
//   (iii) both trivial, k != 2:       theta^a E_k(1, 1)
//   (iv)  eps nontrivial, eps' = 1:   theta^a E_k(eps, 1)
inline Lemma45Result lemma45_construct(Lemma45Case c, unsigned a, unsigned k,
                                       const DirichletCharacter& eps,
                                       const DirichletCharacter& epsp, size_t prec) {
  const Field& K = eps.field();
  if (!(epsp.field() == K)) raise(errc::field_mismatch, "characters over different fields");
  const uint64_t p = K.characteristic();
  if (a >= p)
    raise(errc::hypothesis_violation, "twist exponent must lie in 0..p-1");
  if (k < 1 || k > p + 1)
    raise(errc::hypothesis_violation, "weight must lie in 1..p+1");
  unsigned weight_used = k;
  switch (c) {
    case Lemma45Case::i:
      if (epsp.is_trivial())
        raise(errc::hypothesis_violation, "case (i) needs a nontrivial second character");
      break;
    case Lemma45Case::ii:
      if (!eps.is_trivial() || !epsp.is_trivial())
        raise(errc::hypothesis_violation, "case (ii) needs both characters trivial");
      if (k != 2)
        raise(errc::hypothesis_violation, "case (ii) is the weight-2 regime");
      if (p < 5)
        raise(errc::hypothesis_violation, "case (ii) needs characteristic at least 5");
      weight_used = static_cast<unsigned>(p * p + 1);
      break;
    case Lemma45Case::iii:
      if (!eps.is_trivial() || !epsp.is_trivial())
        raise(errc::hypothesis_violation, "case (iii) needs both characters trivial");
      if (k == 2)
        raise(errc::hypothesis_violation, "case (iii) excludes weight 2");
      break;
    case Lemma45Case::iv:
      if (eps.is_trivial())
        raise(errc::hypothesis_violation, "case (iv) needs a nontrivial first character");
      if (!epsp.is_trivial())
        raise(errc::hypothesis_violation, "case (iv) needs a trivial second character");
      break;
  }
  if (c != Lemma45Case::ii && eps.conductor() == 1 && epsp.conductor() == 1 && k == 2)
    raise(errc::hypothesis_violation, "level 1 weight 2 is excluded");
  EisensteinForm base = katz_eisenstein(weight_used, eps, epsp, 1, prec);
  ModularForm g = theta_power(base.form, a);
  ReducibleRep rep(eps, epsp, a, static_cast<uint64_t>(weight_used) - 1 + a);
  return {std::move(g), std::move(rep)};
}

struct Theorem13Certificate {
  // Coefficients of F1 = sum beta_j * A^(s_j) Frob^j(f), ascending j over the
  // admissible weight words (scaled so the j = 0 coefficient is a_1(F)).
  std::vector<std::pair<unsigned, FieldElement>> beta;
  ModularForm F1;
  // Soft structure certificates for T_p acting on F1; failures are recorded,
  // not raised, since generic coefficient choices violate them.
  bool tp_multiplicative = true;
  std::optional<size_t> tp_mult_witness;  // first m with a_pm != a_p a_m
  bool tp_recursion = true;
  std::optional<unsigned> tp_rec_witness;  // first exponent n failing the 3-term rule
  MembershipResult level_membership;
  CompareResult eigen_compat;
  size_t certified_precision = 0;
};

// Two-stage decomposition of a normalized eigenform F of level M over the
// old space of a seed newform f of level N | M: stage 1 solves the p-power
// coefficients of F for the weight-word combination F1 (triangular system,
// with every inadmissible power acting as an obstruction check), stage 2
// certifies that F lies in the span of the degeneracy images of F1.
inline Theorem13Certificate theorem13_decompose(const ModularForm& F,
                                                const ModularForm& f) {
  const Field& K = F.expansion().field();
  if (!(f.expansion().field() == K))
    raise(errc::field_mismatch, "forms live over different fields");
  const uint64_t p = K.characteristic();
  const uint64_t M = F.level(), N = f.level();
  if (M % N != 0)
    raise(errc::level_not_divisible, "candidate level is not a multiple of the seed level");
  if (F.prec() < 1 || F.coeff(1).is_zero())
    raise(errc::not_normalizable, "candidate has vanishing a_1");
  ModularForm fn = normalized_copy(f);

  Theorem13Certificate cert;

  // Eigensystem compatibility away from the bad primes.
  std::vector<uint64_t> bad = prime_divisors_u64(M);
  if (std::find(bad.begin(), bad.end(), p) == bad.end()) bad.push_back(p);
  uint64_t cmp_bound = std::min<uint64_t>(F.prec(), fn.prec());
  cert.eigen_compat = compare_eigensystems(F, fn, bad, cmp_bound);
  if (!cert.eigen_compat.equal)
    raise(errc::stage1_fail, "eigensystems diverge away from the bad primes",
          *cert.eigen_compat.divergence);

  // Stage 1: triangular solve over p-power coefficients.
  OldSpaceBasis words = weight_old_generators(fn, F.weight());
  if (words.gens.empty())
    raise(errc::stage1_fail, "no weight word connects the two weights");
  std::vector<unsigned> J;
  for (const OldGenerator& g : words.gens) J.push_back(g.j);
  std::vector<FieldElement> beta(J.back() + 1, K.zero());
  std::vector<bool> admissible(J.back() + 1, false);
  for (unsigned j : J) admissible[j] = true;

  for (unsigned j = 0;; ++j) {
    Int pj = int_pow(Int(p), j);
    if (pj > F.prec()) break;
    size_t pjn = static_cast<size_t>(static_cast<uint64_t>(pj));
    FieldElement rhs = F.coeff(pjn);
    bool readable = true;
    for (unsigned t : J) {
      if (t >= j || !admissible[t]) continue;
      Int rem = int_pow(Int(p), j - t);
      if (rem > fn.prec()) { readable = false; break; }
      rhs = rhs - beta[t] * fn.coeff(static_cast<size_t>(static_cast<uint64_t>(rem)));
    }
    if (!readable) break;
    if (j < admissible.size() && admissible[j]) {
      beta[j] = rhs;  // coefficient of q^1 in Frob^j(f) images is a_1(f) = 1
    } else if (!rhs.is_zero()) {
      raise(errc::stage1_fail, "p-power coefficient cannot come from any weight word",
            pjn);
    }
  }
  for (unsigned j : J) cert.beta.emplace_back(j, beta[j]);

  // Assemble F1 at the precision common to all weight words (the j = 0 word).
  size_t f1prec = words.gens.front().form.prec();
  for (const OldGenerator& g : words.gens) f1prec = std::min(f1prec, g.form.prec());
  QExpansion acc(K, f1prec);
  for (size_t i = 0; i < words.gens.size(); ++i)
    acc = acc + words.gens[i].form.expansion().truncated(f1prec).scaled(beta[J[i]]);
  cert.F1 = ModularForm(std::move(acc), N, F.weight(), fn.character());

  // Soft certificates for the T_p structure of F1.
  const ModularForm& F1 = cert.F1;
  if (F1.prec() >= p) {
    FieldElement ap = F1.coeff(p);
    for (size_t m = 1; m * p <= F1.prec(); ++m) {
      if (m % p == 0) continue;
      if (!(F1.coeff(m * p) == ap * F1.coeff(m))) {
        cert.tp_multiplicative = false;
        cert.tp_mult_witness = m;
        break;
      }
    }
    FieldElement scale = fn.char_at(static_cast<int64_t>(p)) *
                         K.from_integer(static_cast<int64_t>(p)).pow(F.weight() - 1);
    for (unsigned n = 2;; ++n) {
      Int pn = int_pow(Int(p), n);
      if (pn > F1.prec()) break;
      size_t i0 = static_cast<size_t>(static_cast<uint64_t>(pn));
      if (!(F1.coeff(i0) ==
            ap * F1.coeff(i0 / p) - scale * F1.coeff(i0 / p / p))) {
        cert.tp_recursion = false;
        cert.tp_rec_witness = n;
        break;
      }
    }
  }

  // Stage 2: F must lie in the span of the degeneracy images of F1.
  OldSpaceBasis degen = level_old_generators(F1, M);
  cert.level_membership = membership(F, degen);
  if (cert.level_membership.verdict == Verdict::non_member)
    raise(errc::stage2_fail, "candidate is outside the degeneracy span of F1",
          *cert.level_membership.witness);
  cert.certified_precision = cert.level_membership.certified_precision;
  return cert;
}

struct CompanionLine {
  uint64_t l = 0;
  const char* case_label = "none";
  bool ok_equal = false;  // the zero-or-equal reading
  bool ok_quad = false;   // the quadratic-relation reading
  bool satisfied = true;
};

struct CompanionReport {
  size_t identity_checked = 0;  // n^k b_n = n a_n verified for n <= this
  bool has_trichotomy = false;
  bool trichotomy_all = true;
  std::vector<CompanionLine> lines;
};

// Certify a companion pair (F, G) of weights (k, p+1-k): the coefficientwise
// identity n^k b_n = n a_n must hold over the common precision (violations
// raise with the witness), and optionally G's twisted eigenvalues are
// classified against a seed newform per the level-raising trichotomy.
inline CompanionReport companion_check(const ModularForm& F, const ModularForm& G,
                                       const ModularForm* seed = nullptr) {
  const Field& K = F.expansion().field();
  const uint64_t p = K.characteristic();
  if (!(G.expansion().field() == K))
    raise(errc::field_mismatch, "companion pair over different fields");
  if (F.level() != G.level())
    raise(errc::mixed_metadata, "companion pair must share a level");
  const int64_t k = F.weight();
  if (k < 2 || static_cast<uint64_t>(k) > p)
    raise(errc::hypothesis_violation, "companion weights need 2 <= k <= p");
  if (G.weight() != static_cast<int64_t>(p) + 1 - k)
    raise(errc::hypothesis_violation, "companion weight must be p + 1 - k");
  if (F.prec() >= p && F.coeff(p).is_zero())
    raise(errc::hypothesis_violation, "companion source must be ordinary (a_p != 0)");

  CompanionReport rep;
  rep.identity_checked = std::min(F.prec(), G.prec());
  for (size_t n = 1; n <= rep.identity_checked; ++n) {
    FieldElement nf = K.from_integer(static_cast<int64_t>(n));
    if (!(nf.pow(k) * G.coeff(n) == nf * F.coeff(n)))
      raise(errc::identity_fail, "companion identity n^k b_n = n a_n fails", n);
  }

  if (seed) {
    if (!(seed->expansion().field() == K))
      raise(errc::field_mismatch, "seed newform over a different field");
    const uint64_t M = F.level(), N = seed->level();
    if (M % N != 0)
      raise(errc::level_not_divisible, "companion level is not a multiple of the seed level");
    ModularForm sn = normalized_copy(*seed);
    rep.has_trichotomy = true;
    const uint64_t Q = M / N;
    uint64_t B = std::min<uint64_t>(G.prec(), sn.prec());
    for (uint64_t l : primes_up_to(B)) {
      CompanionLine line;
      line.l = l;
      FieldElement lf = K.from_integer(static_cast<int64_t>(l));
      FieldElement lhs = lf.pow(k) * G.coeff(l);  // l^k b_l
      FieldElement cl = sn.coeff(l);
      const bool div_MpN = Q % l == 0 || l == p;
      const bool div_N = N % l == 0;
      if (!div_MpN) {
        line.case_label = "i";
        line.ok_equal = lhs == lf * cl;
        line.satisfied = line.ok_equal;
      } else if (Q % l == 0 && !div_N) {
        // The two remaining clauses share this condition; report both.
        line.case_label = "ii/iii";
        line.ok_equal = lhs.is_zero() || lhs == lf * cl;
        FieldElement bl = G.coeff(l);
        line.ok_quad = lhs.is_zero() ||
                       (lf * bl * (lf.pow(k - 1) * bl - cl) +
                        sn.char_at(static_cast<int64_t>(l)) * lf)
                           .is_zero();
        line.satisfied = line.ok_equal || line.ok_quad;
      } else {
        line.case_label = "none";
        line.satisfied = true;
      }
      rep.trichotomy_all = rep.trichotomy_all && line.satisfied;
      rep.lines.push_back(line);
    }
  }
  return rep;
}

}  // namespace kats
