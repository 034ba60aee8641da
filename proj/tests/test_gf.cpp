// Finite fields: canonical moduli, generators, roots of unity, embeddings.
// Expected values for F_49 and F_8 were frozen from an independent
// implementation of the quotient-ring arithmetic (direct polynomial
// reduction mod x^2+1 resp. x^3+x^2+1).

#include <catch2/catch_amalgamated.hpp>

#include "kats/gf.hpp"
#include "test_util.hpp"

using namespace kats;

TEST_CASE("prime field arithmetic") {
  Field F = Field::make(7, 1);
  REQUIRE(F.characteristic() == 7);
  REQUIRE(F.degree() == 1);
  REQUIRE(F.size() == 7);

  FieldElement a = F.from_integer(3), b = F.from_integer(5);
  CHECK((a + b) == F.from_integer(1));
  CHECK((a - b) == F.from_integer(5));  // 3 - 5 = -2 = 5
  CHECK((a * b) == F.from_integer(1));  // 15 = 1
  CHECK((a / b) == a * b.inv());
  CHECK(b.inv() == F.from_integer(3));  // 5*3 = 15 = 1
  CHECK((-a) == F.from_integer(4));
  CHECK(a.pow(6).is_one());             // Fermat
  CHECK(a.pow(0).is_one());
  CHECK(F.from_integer(-24) == F.from_integer(4));
  CHECK(F.from_integer(Int("123456789123456789")) ==
        F.from_integer(Int("123456789123456789") % 7));
}

TEST_CASE("division by zero and field mismatch") {
  Field F = Field::make(7, 1), G = Field::make(5, 1);
  REQUIRE_RAISES(errc::division_by_zero, F.one() / F.zero());
  REQUIRE_RAISES(errc::division_by_zero, F.zero().inv());
  REQUIRE_RAISES(errc::field_mismatch, F.one() + G.one());
}

TEST_CASE("canonical lex-smallest moduli") {
  // c_0 is the most significant lex slot; x | f rules out c_0 = 0, so the
  // scan lands on the first irreducible with small low-order coefficients.
  CHECK(Field::make(2, 2).modulus() == std::vector<uint64_t>{1, 1, 1});     // x^2+x+1
  CHECK(Field::make(2, 3).modulus() == std::vector<uint64_t>{1, 0, 1, 1});  // x^3+x^2+1
  CHECK(Field::make(7, 2).modulus() == std::vector<uint64_t>{1, 0, 1});     // x^2+1
  CHECK(Field::make(3, 2).modulus() == std::vector<uint64_t>{1, 0, 1});     // x^2+1 (p=3)
  CHECK(Field::make(5, 1).modulus() == std::vector<uint64_t>{0, 1});        // x
}

TEST_CASE("field construction guards") {
  REQUIRE_RAISES(errc::composite_characteristic, Field::make(6, 1));
  REQUIRE_RAISES(errc::composite_characteristic, Field::make(1, 1));
  REQUIRE_RAISES(errc::degree_overflow, Field::make(3, 26));  // 3^26 > 2^40
  REQUIRE_RAISES(errc::degree_overflow, Field::make(7, 0));
}

TEST_CASE("smallest generators (frozen)") {
  CHECK(Field::make(7, 1).generator() == Field::make(7, 1).from_integer(3));
  CHECK(Field::make(7, 2).generator().coeffs() == std::vector<uint64_t>{2, 1});
  CHECK(Field::make(7, 2).generator().canonical_index() == 9);
  CHECK(Field::make(2, 3).generator().coeffs() == std::vector<uint64_t>{0, 1, 0});
  Field F49 = Field::make(7, 2);
  CHECK(F49.generator().order() == 48);
  // No element of smaller canonical index generates.
  for (uint64_t i = 1; i < 9; ++i) CHECK(F49.element_at(i).order() < 48);
}

TEST_CASE("roots of unity (frozen)") {
  Field F7 = Field::make(7, 1);
  CHECK(F7.nth_root_of_unity(1).is_one());
  CHECK(F7.nth_root_of_unity(2) == F7.from_integer(6));
  CHECK(F7.nth_root_of_unity(3) == F7.from_integer(2));
  CHECK(F7.nth_root_of_unity(6) == F7.from_integer(3));
  REQUIRE_RAISES(errc::no_such_root, F7.nth_root_of_unity(4));
  REQUIRE_RAISES(errc::no_such_root, F7.nth_root_of_unity(5));

  Field F49 = Field::make(7, 2);
  CHECK(F49.nth_root_of_unity(8).coeffs() == std::vector<uint64_t>{2, 2});
  CHECK(F49.nth_root_of_unity(16).coeffs() == std::vector<uint64_t>{2, 4});
  CHECK(F49.nth_root_of_unity(8).order() == 8);
  CHECK(F49.nth_root_of_unity(16).order() == 16);
  // Coherence: zeta_16^2 = zeta_8 (both are powers of one generator).
  CHECK(F49.nth_root_of_unity(16).pow(2) == F49.nth_root_of_unity(8));
  CHECK(F49.nth_root_of_unity(48) == F49.generator());
}

TEST_CASE("canonical index round trip") {
  Field F = Field::make(7, 2);
  for (uint64_t i = 0; i < 49; ++i) CHECK(F.element_at(i).canonical_index() == i);
  CHECK(F.element({3, 4}).canonical_index() == 3 + 7 * 4);
  // element() reduces entries mod p and pads.
  CHECK(F.element({10}) == F.element({3, 0}));
  REQUIRE_RAISES(errc::degree_overflow, F.element({1, 2, 3}));
}

TEST_CASE("embedding F_7 into F_49") {
  Field F7 = Field::make(7, 1), F49 = Field::make(7, 2);
  FieldElement three = embed(F7.from_integer(3), F49);
  CHECK(three.order() == 6);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      FieldElement x = F7.from_integer(a), y = F7.from_integer(b);
      CHECK(embed(x * y, F49) == embed(x, F49) * embed(y, F49));
      CHECK(embed(x + y, F49) == embed(x, F49) + embed(y, F49));
    }
  // Identity embedding.
  CHECK(embed(F49.generator(), F49) == F49.generator());
  // F_4 does not embed in F_8 (2 does not divide 3).
  REQUIRE_RAISES(errc::no_embedding,
                 embed(Field::make(2, 2).generator(), Field::make(2, 3)));
  REQUIRE_RAISES(errc::no_embedding,
                 embed(Field::make(5, 1).one(), Field::make(7, 1)));
}

TEST_CASE("frobenius is a field automorphism fixing exactly F_p") {
  Field F = Field::make(7, 2);
  int fixed = 0;
  for (uint64_t i = 0; i < 49; ++i) {
    FieldElement a = F.element_at(i);
    if (a.pow(7) == a) ++fixed;
  }
  CHECK(fixed == 7);
  TestRng rng(11);
  for (int t = 0; t < 50; ++t) {
    FieldElement a = F.element_at(rng.below(49)), b = F.element_at(rng.below(49));
    CHECK((a + b).pow(7) == a.pow(7) + b.pow(7));
  }
}

TEST_CASE("string round trips") {
  Field F = Field::make(7, 2);
  CHECK(F.to_string() == "GF(7^2;1,0,1)");
  CHECK(Field::parse(F.to_string()) == F);
  FieldElement a = F.element({3, 5});
  CHECK(a.to_string() == "[3,5]");
  CHECK(FieldElement::parse(a.to_string(), F) == a);
  Field F7 = Field::make(7, 1);
  CHECK(Field::parse("GF(7^1;0,1)") == F7);
  REQUIRE_RAISES(errc::parse_error, Field::parse("GF(7^2;9,9,9)"));
}

TEST_CASE("element order divides group order") {
  Field F = Field::make(3, 3);  // F_27
  REQUIRE(F.size() == 27);
  for (uint64_t i = 1; i < 27; ++i) {
    uint64_t n = F.element_at(i).order();
    CHECK(26 % n == 0);
    CHECK(F.element_at(i).pow(static_cast<int64_t>(n)).is_one());
  }
}
