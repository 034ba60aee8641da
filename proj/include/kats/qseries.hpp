#pragma once

// Truncated q-expansions over a finite field and the operator algebra on
// them: Hecke operators T_n (U_l at primes dividing the level), diamond
// operators, theta = q d/dq, multiplication by the Hasse invariant (weight
// bookkeeping only), Frobenius f -> f(q^p), and the degeneracy maps
// f -> f(q^d). Precision bookkeeping is conservative: T_n divides the
// precision by n (floor), Frobenius and B_d multiply it.
//
// A ModularForm is an expansion plus metadata (level N with gcd(N, p) = 1,
// weight, nebentypus character whose modulus divides N, flags). The
// character is always evaluated "at the level": eps(m) = 0 when
// gcd(m, N) > 1, which is what the Hecke formulas expect.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kats/characters.hpp"
#include "kats/errors.hpp"
#include "kats/gf.hpp"
#include "kats/numeric.hpp"

namespace kats {

class QExpansion {
 public:
  QExpansion() = default;
  QExpansion(const Field& F, size_t prec) : F_(F), a_(prec + 1, F.zero()) {}

  const Field& field() const { return F_; }
  size_t prec() const { return a_.size() - 1; }
  const FieldElement& coeff(size_t n) const {
    if (n >= a_.size()) raise(errc::precision_underflow, "coefficient index beyond precision");
    return a_[n];
  }
  void set(size_t n, const FieldElement& v) {
    if (n >= a_.size()) raise(errc::precision_underflow, "coefficient index beyond precision");
    if (!(v.field() == F_)) raise(errc::field_mismatch, "coefficient from wrong field");
    a_[n] = v;
  }

  bool is_zero() const {
    for (const auto& c : a_)
      if (!c.is_zero()) return false;
    return true;
  }

  QExpansion truncated(size_t prec) const {
    if (prec >= this->prec()) return *this;
    QExpansion out(F_, prec);
    for (size_t n = 0; n <= prec; ++n) out.a_[n] = a_[n];
    return out;
  }

  QExpansion scaled(const FieldElement& s) const {
    QExpansion out(F_, prec());
    for (size_t n = 0; n < a_.size(); ++n) out.a_[n] = a_[n] * s;
    return out;
  }

  // Sum/difference at the common precision.
  friend QExpansion operator+(const QExpansion& a, const QExpansion& b) {
    return a.combined(b, false);
  }
  friend QExpansion operator-(const QExpansion& a, const QExpansion& b) {
    return a.combined(b, true);
  }

  // First index n <= common precision where the two differ, if any.
  static std::optional<size_t> first_difference(const QExpansion& a, const QExpansion& b) {
    size_t B = std::min(a.prec(), b.prec());
    for (size_t n = 0; n <= B; ++n)
      if (a.a_[n] != b.a_[n]) return n;
    return std::nullopt;
  }
  static bool agree(const QExpansion& a, const QExpansion& b) {
    return !first_difference(a, b).has_value();
  }

 private:
  QExpansion combined(const QExpansion& o, bool subtract) const {
    if (!(F_ == o.F_)) raise(errc::field_mismatch, "expansions over different fields");
    QExpansion out(F_, std::min(prec(), o.prec()));
    for (size_t n = 0; n <= out.prec(); ++n)
      out.a_[n] = subtract ? a_[n] - o.a_[n] : a_[n] + o.a_[n];
    return out;
  }

  Field F_;
  std::vector<FieldElement> a_{FieldElement()};
};

struct FormFlags {
  bool cuspidal = false;
  bool normalized = false;
  bool asserted_newform = false;
  bool asserted_minimal_weight = false;

  bool operator==(const FormFlags&) const = default;
};

class ModularForm {
 public:
  ModularForm() = default;
  ModularForm(QExpansion q, uint64_t level, int64_t weight, DirichletCharacter chi,
              FormFlags flags = {})
      : q_(std::move(q)), level_(level), weight_(weight), chi_(std::move(chi)), flags_(flags) {
    uint64_t p = q_.field().characteristic();
    if (level_ == 0 || std::gcd(level_, p) != 1)
      raise(errc::characteristic_divides_level,
            "level " + std::to_string(level_) + " not coprime to " + std::to_string(p));
    if (weight_ < 0) raise(errc::usage_error, "negative weight");
    if (level_ % chi_.modulus() != 0)
      raise(errc::bad_level_divisibility, "character modulus does not divide the level");
    if (!(chi_.field() == q_.field())) raise(errc::field_mismatch, "character over wrong field");
    refresh_flags();
  }

  const QExpansion& expansion() const { return q_; }
  const Field& field() const { return q_.field(); }
  size_t prec() const { return q_.prec(); }
  const FieldElement& coeff(size_t n) const { return q_.coeff(n); }
  uint64_t level() const { return level_; }
  int64_t weight() const { return weight_; }
  const DirichletCharacter& character() const { return chi_; }
  const FormFlags& flags() const { return flags_; }
  void assert_newform(bool v = true) { flags_.asserted_newform = v; }
  void assert_minimal_weight(bool v = true) { flags_.asserted_minimal_weight = v; }

  // Nebentypus at the level: zero on anything sharing a factor with N.
  FieldElement char_at(int64_t m) const {
    int64_t n = static_cast<int64_t>(level_);
    int64_t r = m % n;
    if (r < 0) r += n;
    if (level_ > 1 && std::gcd(static_cast<uint64_t>(r), level_) != 1) return field().zero();
    return chi_(m);
  }

  ModularForm with_expansion(QExpansion q) const {
    return ModularForm(std::move(q), level_, weight_, chi_, flags_);
  }
  ModularForm with_metadata(uint64_t level, int64_t weight) const {
    ModularForm f(q_, level, weight, chi_, flags_);
    return f;
  }

  bool same_space(const ModularForm& o) const {
    return field() == o.field() && level_ == o.level_ && weight_ == o.weight_;
  }

 private:
  void refresh_flags() {
    flags_.cuspidal = q_.coeff(0).is_zero();
    flags_.normalized = q_.prec() >= 1 && q_.coeff(1).is_one();
  }

  QExpansion q_;
  uint64_t level_ = 1;
  int64_t weight_ = 0;
  DirichletCharacter chi_;
  FormFlags flags_;
};

namespace qdetail {

// eps(l) * l^{k-1} with the convention that a vanishing character value
// short-circuits the power (avoids inverting l = p when k = 0).
inline FieldElement hecke_scale(const ModularForm& f, uint64_t l) {
  FieldElement c = f.char_at(static_cast<int64_t>(l));
  if (c.is_zero()) return c;
  return c * f.field().from_integer(static_cast<int64_t>(l)).pow(f.weight() - 1);
}

}  // namespace qdetail

// T_l for prime l (U_l when l | N): a_m -> a_{lm} + eps(l) l^{k-1} a_{m/l}.
inline ModularForm hecke_prime(const ModularForm& f, uint64_t l) {
  if (!is_prime_u64(l)) raise(errc::bad_prime, std::to_string(l) + " is not prime");
  size_t outB = f.prec() / l;
  if (f.prec() < l) raise(errc::precision_underflow, "precision too small for T_" + std::to_string(l));
  FieldElement scale = qdetail::hecke_scale(f, l);
  QExpansion out(f.field(), outB);
  for (size_t m = 0; m <= outB; ++m) {
    FieldElement v = f.coeff(l * m);
    if (m % l == 0 && !scale.is_zero()) v = v + scale * f.coeff(m / l);
    out.set(m, v);
  }
  return f.with_expansion(std::move(out));
}

// T_n for arbitrary n >= 1: multiplicative across coprime prime powers, and
// T_{l^r} = T_l T_{l^{r-1}} - eps(l) l^{k-1} T_{l^{r-2}} at prime powers.
inline ModularForm hecke_Tn(const ModularForm& f, uint64_t n) {
  if (n == 0) raise(errc::usage_error, "T_0 is not defined");
  if (f.prec() / n < 1)
    raise(errc::precision_underflow, "precision too small for T_" + std::to_string(n));
  ModularForm cur = f;
  for (const auto& pp : factorize_u64(n)) {
    FieldElement scale = qdetail::hecke_scale(cur, pp.prime);
    ModularForm prev2 = cur;                     // T_{l^0}
    ModularForm prev = hecke_prime(cur, pp.prime);  // T_{l^1}
    for (unsigned i = 2; i <= pp.exp; ++i) {
      QExpansion next = hecke_prime(prev, pp.prime).expansion();
      if (!scale.is_zero())
        next = next - prev2.expansion().truncated(next.prec()).scaled(scale);
      ModularForm nf = f.with_expansion(std::move(next));
      prev2 = std::move(prev);
      prev = std::move(nf);
    }
    cur = std::move(prev);
  }
  return cur;
}

// Diamond operator: multiplication by eps(d), gcd(d, N) = 1.
inline ModularForm diamond(const ModularForm& f, uint64_t d) {
  if (std::gcd(d, f.level()) != 1)
    raise(errc::not_coprime, "diamond requires gcd(d, N) = 1");
  return f.with_expansion(f.expansion().scaled(f.char_at(static_cast<int64_t>(d))));
}

// theta = q d/dq. Weight goes up by p + 1; the output is always cuspidal.
inline ModularForm theta(const ModularForm& f) {
  uint64_t p = f.field().characteristic();
  QExpansion out(f.field(), f.prec());
  for (size_t n = 0; n <= f.prec(); ++n)
    out.set(n, f.field().from_integer(static_cast<int64_t>(n % p)) * f.coeff(n));
  QExpansion q = std::move(out);
  return ModularForm(std::move(q), f.level(), f.weight() + static_cast<int64_t>(p) + 1,
                     f.character());
}

inline ModularForm theta_power(const ModularForm& f, unsigned times) {
  ModularForm g = f;
  for (unsigned i = 0; i < times; ++i) g = theta(g);
  return g;
}

// Multiplication by the t-th power of the Hasse invariant: the expansion is
// unchanged, the weight rises by t(p - 1).
inline ModularForm hasse_mult(const ModularForm& f, unsigned t) {
  uint64_t p = f.field().characteristic();
  return ModularForm(f.expansion(), f.level(),
                     f.weight() + static_cast<int64_t>(t) * (static_cast<int64_t>(p) - 1),
                     f.character());
}

// Frobenius: f(q) -> f(q^p), weight multiplied by p, level unchanged.
inline ModularForm frobenius(const ModularForm& f) {
  uint64_t p = f.field().characteristic();
  size_t outB = f.prec() * p;
  if (outB > 50'000'000) raise(errc::degree_overflow, "frobenius output precision too large");
  QExpansion out(f.field(), outB);
  for (size_t m = 0; m <= f.prec(); ++m) out.set(p * m, f.coeff(m));
  return ModularForm(std::move(out), f.level(), f.weight() * static_cast<int64_t>(p),
                     f.character());
}

// Degeneracy map B_d: f(q) -> f(q^d), viewed at level M (needs N d | M and
// both d and M coprime to p).
inline ModularForm degeneracy_Bd(const ModularForm& f, uint64_t d, uint64_t M) {
  uint64_t p = f.field().characteristic();
  if (d == 0 || d % p == 0)
    raise(errc::characteristic_divides_level, "B_d requires p coprime to d");
  if (std::gcd(M, p) != 1)
    raise(errc::characteristic_divides_level, "target level not coprime to p");
  if (M % (f.level() * d) != 0)
    raise(errc::bad_level_divisibility, "target level must be divisible by d * level");
  size_t outB = f.prec() * d;
  if (outB > 50'000'000) raise(errc::degree_overflow, "degeneracy output precision too large");
  QExpansion out(f.field(), outB);
  for (size_t m = 0; m <= f.prec(); ++m) out.set(d * m, f.coeff(m));
  return ModularForm(std::move(out), M, f.weight(), f.character());
}

// Inverse of q -> q^l on expansions supported on l-th powers. Divides the
// level by l when l | N; otherwise the input must vanish identically (and the
// zero form at the same level is returned).
inline ModularForm divide_exponents(const ModularForm& f, uint64_t l) {
  uint64_t p = f.field().characteristic();
  if (!is_prime_u64(l) || l == p) raise(errc::bad_prime, "need a prime l != p");
  for (size_t n = 0; n <= f.prec(); ++n)
    if (n % l != 0 && !f.coeff(n).is_zero())
      raise(errc::not_pure, "coefficient at exponent " + std::to_string(n) +
                                " is nonzero but not an l-th power index");
  size_t outB = f.prec() / l;
  if (f.level() % l != 0) {
    if (!f.expansion().is_zero())
      raise(errc::non_integral_level,
            "support lies in q^" + std::to_string(l) + " powers but l does not divide the level");
    return f.with_expansion(QExpansion(f.field(), outB));
  }
  uint64_t newN = f.level() / l;
  if (newN % f.character().modulus() != 0)
    raise(errc::bad_level_divisibility, "character modulus does not divide the divided level");
  QExpansion out(f.field(), outB);
  for (size_t m = 0; m <= outB; ++m) out.set(m, f.coeff(l * m));
  return ModularForm(std::move(out), newN, f.weight(), f.character());
}

// Scale so that a_1 = 1 (the standing normalization for eigenforms).
inline ModularForm normalized_copy(const ModularForm& f) {
  if (f.prec() < 1 || f.coeff(1).is_zero())
    raise(errc::not_normalizable, "a_1 vanishes; form cannot be normalized");
  if (f.coeff(1).is_one()) return f;
  return f.with_expansion(f.expansion().scaled(f.coeff(1).inv()));
}

struct EigenWitness {
  uint64_t l = 0;   // prime where the eigen relation fails
  size_t n = 0;     // coefficient index witnessing it
  FieldElement lhs;  // a_n(T_l f)
  FieldElement rhs;  // a_l(f) a_n(f)
};

struct EigenCheck {
  bool ok = true;
  std::vector<std::pair<uint64_t, FieldElement>> eigenvalues;
  std::optional<EigenWitness> witness;
};

// Verify T_l f = a_l(f) f for all primes l <= bound not excluded, each to the
// output precision of T_l. The form is normalized first (a_1 must be a unit).
// Primes beyond the precision cannot be read off and are skipped.
inline EigenCheck is_eigen_upto(const ModularForm& f, uint64_t bound,
                                const std::vector<uint64_t>& exclude = {}) {
  ModularForm g = normalized_copy(f);
  EigenCheck out;
  for (uint64_t l : primes_up_to(std::min<uint64_t>(bound, g.prec()))) {
    bool skip = false;
    for (uint64_t e : exclude) skip = skip || e == l;
    if (skip) continue;
    FieldElement lambda = g.coeff(l);
    out.eigenvalues.emplace_back(l, lambda);
    ModularForm tl = hecke_prime(g, l);
    for (size_t n = 0; n <= tl.prec(); ++n) {
      FieldElement rhs = lambda * g.coeff(n);
      if (tl.coeff(n) != rhs) {
        out.ok = false;
        out.witness = EigenWitness{l, n, tl.coeff(n), rhs};
        return out;
      }
    }
  }
  return out;
}

// Words in the two weight-raising operators. Applying the word to a form
// composes hasse_mult / frobenius left to right.
struct WeightWord {
  enum class Letter { hasse, frob };
  std::vector<Letter> letters;

  int64_t final_weight(int64_t k, uint64_t p) const {
    for (Letter L : letters)
      k = (L == Letter::hasse) ? k + static_cast<int64_t>(p) - 1 : k * static_cast<int64_t>(p);
    return k;
  }
  unsigned frobenius_count() const {
    unsigned c = 0;
    for (Letter L : letters) c += (L == Letter::frob) ? 1 : 0;
    return c;
  }
  ModularForm apply(const ModularForm& f) const {
    ModularForm g = f;
    for (Letter L : letters) g = (L == Letter::hasse) ? hasse_mult(g, 1) : frobenius(g);
    return g;
  }
};

}  // namespace kats
