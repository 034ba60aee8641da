#pragma once
// Built-in corpus of classical integer-coefficient expansions: the
// discriminant cusp form (eta-power construction) and the small
// integer-normalized Eisenstein series.  Every entry is computed over the
// exact integers once and reduced modulo the requested prime, so a single
// integer oracle serves every characteristic.

#include <cstdint>
#include <string>
#include <vector>

#include "kats/characters.hpp"
#include "kats/errors.hpp"
#include "kats/gf.hpp"
#include "kats/numeric.hpp"
#include "kats/qseries.hpp"

namespace kats {

namespace corpusdetail {

// Coefficients 0..L of prod_{n>=1} (1 - q^n)^24, built from the cube
//   prod (1 - q^n)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}
// followed by three truncated squarings (exponents 3 -> 6 -> 12 -> 24).
inline std::vector<Int> eta_pow24(size_t L) {
  std::vector<Int> c(L + 1, Int(0));
  for (uint64_t j = 0;; ++j) {
    uint64_t e = j * (j + 1) / 2;
    if (e > L) break;
    c[e] = (j % 2 == 0) ? Int(2 * j + 1) : Int(-static_cast<int64_t>(2 * j + 1));
  }
  auto square = [L](const std::vector<Int>& a) {
    std::vector<Int> out(L + 1, Int(0));
    for (size_t i = 0; i <= L; ++i) {
      if (a[i] == 0) continue;
      for (size_t k = 0; i + k <= L; ++k) {
        if (a[k] == 0) continue;
        out[i + k] += a[i] * a[k];
      }
    }
    return out;
  };
  c = square(c);
  c = square(c);
  return square(c);
}

struct EisSpec {
  unsigned weight;
  int64_t scale;  // E_k = 1 + scale * sum sigma_{k-1}(n) q^n
};

inline const EisSpec* eis_lookup(const std::string& name) {
  static const std::pair<const char*, EisSpec> table[] = {
      {"E4", {4, 240}},   {"E6", {6, -504}}, {"E8", {8, 480}},
      {"E10", {10, -264}}, {"E14", {14, -24}},
  };
  for (const auto& [n, s] : table)
    if (name == n) return &s;
  return nullptr;
}

}  // namespace corpusdetail

// Exact integer coefficients a_0..a_prec of a corpus entry.
inline std::vector<Int> corpus_integer(const std::string& name, size_t prec) {
  if (name == "delta") {
    std::vector<Int> out(prec + 1, Int(0));
    if (prec >= 1) {
      std::vector<Int> e = corpusdetail::eta_pow24(prec - 1);
      for (size_t n = 1; n <= prec; ++n) out[n] = e[n - 1];
    }
    return out;
  }
  if (const corpusdetail::EisSpec* s = corpusdetail::eis_lookup(name)) {
    std::vector<Int> out(prec + 1, Int(0));
    out[0] = 1;
    for (uint64_t d = 1; d <= prec; ++d) {
      Int dk = int_pow(Int(d), s->weight - 1) * s->scale;
      for (uint64_t m = d; m <= prec; m += d) out[m] += dk;
    }
    return out;
  }
  raise(errc::unknown_entry, "no corpus entry named '" + name + "'");
}

inline int64_t corpus_weight(const std::string& name) {
  if (name == "delta") return 12;
  if (const corpusdetail::EisSpec* s = corpusdetail::eis_lookup(name))
    return static_cast<int64_t>(s->weight);
  raise(errc::unknown_entry, "no corpus entry named '" + name + "'");
}

// Reduce a corpus entry modulo p.  Every entry lives at level 1, so the only
// constraint on p is primality.
inline ModularForm corpus_get(const std::string& name, uint64_t p, size_t prec) {
  int64_t k = corpus_weight(name);  // validates the name first
  if (!is_prime_u64(p))
    raise(errc::bad_prime, "corpus reduction needs a prime characteristic", p);
  std::vector<Int> a = corpus_integer(name, prec);
  Field F = Field::make(p, 1);
  QExpansion q(F, prec);
  for (size_t n = 0; n <= prec; ++n) q.set(n, F.from_integer(a[n]));
  return ModularForm(std::move(q), 1, k, DirichletCharacter::trivial(1, F));
}

}  // namespace kats
