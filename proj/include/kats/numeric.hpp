#pragma once

// Small-integer number theory helpers plus the exact big-integer/rational
// aliases used throughout the library. Everything here is deterministic;
// factorization is plain trial division, which covers the supported field
// sizes (see gf.hpp) and the moduli the character layer accepts.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kats/errors.hpp"

namespace kats {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  for (uint64_t f = 7; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

struct PrimePower {
  uint64_t prime;
  unsigned exp;
  uint64_t value;  // prime^exp
};

inline std::vector<PrimePower> factorize_u64(uint64_t n) {
  std::vector<PrimePower> out;
  for (uint64_t f = 2; f * f <= n; f += (f == 2 ? 1 : 2)) {
    if (n % f) continue;
    PrimePower pp{f, 0, 1};
    while (n % f == 0) {
      n /= f;
      ++pp.exp;
      pp.value *= f;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

inline std::vector<uint64_t> prime_divisors_u64(uint64_t n) {
  std::vector<uint64_t> out;
  for (const auto& pp : factorize_u64(n)) out.push_back(pp.prime);
  return out;
}

inline std::vector<uint64_t> divisors_u64(uint64_t n) {
  std::vector<uint64_t> out{1};
  for (const auto& pp : factorize_u64(n)) {
    size_t base = out.size();
    uint64_t q = 1;
    for (unsigned e = 1; e <= pp.exp; ++e) {
      q *= pp.prime;
      for (size_t i = 0; i < base; ++i) out.push_back(out[i] * q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline uint64_t euler_phi_u64(uint64_t n) {
  uint64_t r = n;
  for (const auto& pp : factorize_u64(n)) r = r / pp.prime * (pp.prime - 1);
  return r;
}

inline std::vector<uint64_t> primes_up_to(uint64_t bound) {
  std::vector<uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(bound + 1, true);
  for (uint64_t i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (uint64_t j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

// Multiplicative order of a modulo m (gcd(a, m) = 1), via the factored group order.
inline uint64_t mult_order_mod(uint64_t a, uint64_t m, uint64_t group_order) {
  uint64_t ord = group_order;
  for (const auto& pp : factorize_u64(group_order)) {
    for (unsigned e = 0; e < pp.exp; ++e) {
      if (powmod_u64(a, ord / pp.prime, m) == 1)
        ord /= pp.prime;
      else
        break;
    }
  }
  return ord;
}

// Smallest primitive root modulo an odd prime power l^e.
inline uint64_t smallest_primitive_root(uint64_t le) {
  uint64_t phi = euler_phi_u64(le);
  for (uint64_t g = 2; g < le; ++g) {
    if (std::gcd(g, le) != 1) continue;
    if (mult_order_mod(g, le, phi) == phi) return g;
  }
  raise(errc::bad_order, "no primitive root modulo " + std::to_string(le));
}

inline Int int_pow(Int base, uint64_t exp) {
  Int r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

inline Int binomial_int(unsigned n, unsigned k) {
  if (k > n) return 0;
  Int r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

inline Int factorial_int(unsigned n) {
  Int r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace kats
