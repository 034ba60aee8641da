// Built-in integer corpus.  The eta-power series is checked against a dense
// product of (1 - q^n)^24 factors, tau against published values, and the
// Eisenstein scales against the exact ring identities E4^2 = E8,
// E4 E6 = E10, E6 E8 = E14 and E4^3 - E6^2 = 1728 Delta, which tie every
// entry to every other one.

#include <catch2/catch_amalgamated.hpp>

#include "kats/corpus.hpp"
#include "test_util.hpp"

using namespace kats;

namespace {

std::vector<Int> mul_trunc(const std::vector<Int>& a, const std::vector<Int>& b, size_t L) {
  std::vector<Int> out(L + 1, Int(0));
  for (size_t i = 0; i <= L && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; i + j <= L && j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

uint64_t sigma_mod(unsigned e, uint64_t n, uint64_t p) {
  uint64_t s = 0;
  for (uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) s = (s + powmod_u64(d % p, e, p)) % p;
  return s;
}

}  // namespace

TEST_CASE("eta_pow24 equals the dense 24-fold product") {
  const size_t L = 60;
  std::vector<Int> dense{Int(1)};
  dense.resize(L + 1, Int(0));
  for (uint64_t n = 1; n <= L; ++n) {
    std::vector<Int> factor(L + 1, Int(0));
    factor[0] = 1;
    factor[n] = -1;
    for (int rep = 0; rep < 24; ++rep) dense = mul_trunc(dense, factor, L);
  }
  CHECK(corpusdetail::eta_pow24(L) == dense);
}

TEST_CASE("delta reproduces the published tau values") {
  auto d = corpus_integer("delta", 12);
  REQUIRE(d.size() == 13);
  CHECK(d[0] == 0);
  CHECK(d[1] == 1);
  CHECK(d[2] == -24);
  CHECK(d[3] == 252);
  CHECK(d[4] == -1472);
  CHECK(d[5] == 4830);
  CHECK(d[6] == -6048);
  CHECK(d[7] == -16744);
  CHECK(d[8] == 84480);
  CHECK(d[9] == -113643);
  CHECK(d[10] == -115920);
  CHECK(d[11] == 534612);
  CHECK(d[12] == -370944);
}

TEST_CASE("Eisenstein entries are 1 + scale * sigma sums") {
  auto e4 = corpus_integer("E4", 6);
  CHECK(e4[0] == 1);
  CHECK(e4[1] == 240);
  CHECK(e4[2] == 2160);   // 240 * 9
  CHECK(e4[6] == 60480);  // 240 * 252
  auto e6 = corpus_integer("E6", 3);
  CHECK(e6[1] == -504);
  CHECK(e6[2] == -16632);  // -504 * 33
  auto e14 = corpus_integer("E14", 2);
  CHECK(e14[1] == -24);
  CHECK(e14[2] == -196632);  // -24 * (1 + 2^13)
  CHECK(corpus_weight("E4") == 4);
  CHECK(corpus_weight("E10") == 10);
  CHECK(corpus_weight("delta") == 12);
}

TEST_CASE("exact ring identities tie the corpus together") {
  const size_t L = 40;
  auto e4 = corpus_integer("E4", L);
  auto e6 = corpus_integer("E6", L);
  auto e8 = corpus_integer("E8", L);
  auto e10 = corpus_integer("E10", L);
  auto e14 = corpus_integer("E14", L);
  auto delta = corpus_integer("delta", L);

  CHECK(mul_trunc(e4, e4, L) == e8);
  CHECK(mul_trunc(e4, e6, L) == e10);
  CHECK(mul_trunc(e6, e8, L) == e14);
  // E4^3 - E6^2 = 1728 Delta.
  auto e4cubed = mul_trunc(mul_trunc(e4, e4, L), e4, L);
  auto e6sq = mul_trunc(e6, e6, L);
  for (size_t n = 0; n <= L; ++n) CHECK(e4cubed[n] - e6sq[n] == Int(1728) * delta[n]);
}

TEST_CASE("reduction mod p") {
  // tau(n) = n sigma_3(n) mod 7.
  ModularForm d7 = corpus_get("delta", 7, 40);
  Field F7 = d7.field();
  CHECK(d7.level() == 1);
  CHECK(d7.weight() == 12);
  CHECK(d7.flags().cuspidal);
  CHECK(d7.flags().normalized);
  for (uint64_t n = 1; n <= 40; ++n)
    CHECK(d7.coeff(n) ==
          F7.from_integer(static_cast<int64_t>(n % 7 * sigma_mod(3, n, 7) % 7)));
  // Delta mod 2 is supported exactly on odd squares.
  ModularForm d2 = corpus_get("delta", 2, 100);
  for (uint64_t n = 0; n <= 100; ++n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)) + 0.5);
    bool odd_square = r * r == n && n % 2 == 1;
    CHECK(d2.coeff(n).is_one() == odd_square);
  }
  // Corpus E4 is 240 times the arithmetically normalized reduction.
  ModularForm e4 = corpus_get("E4", 7, 20);
  CHECK(e4.coeff(0).is_one());
  CHECK(e4.coeff(1) == F7.from_integer(240));
  for (size_t n = 1; n <= 20; ++n)
    CHECK(e4.coeff(n) ==
          F7.from_integer(240) * F7.from_integer(static_cast<int64_t>(sigma_mod(3, n, 7))));
  // Big characteristic passes through unreduced-looking values.
  ModularForm d691 = corpus_get("delta", 691, 5);
  CHECK(d691.coeff(2) == d691.field().from_integer(-24));
}

TEST_CASE("corpus errors") {
  REQUIRE_RAISES(errc::unknown_entry, corpus_integer("E12", 4));
  REQUIRE_RAISES(errc::unknown_entry, corpus_get("zeta", 7, 4));
  REQUIRE_RAISES(errc::unknown_entry, corpus_weight("Delta"));
  REQUIRE_RAISES(errc::bad_prime, corpus_get("delta", 6, 4));
  REQUIRE_RAISES(errc::bad_prime, corpus_get("delta", 1, 4));
}
