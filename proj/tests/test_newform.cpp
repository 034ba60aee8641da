// Old spaces, membership certification, and eigenform surgery.  Reference
// forms are the Eisenstein reductions (whose eigenvalues are closed-form) and
// the discriminant form; witnesses and combination coefficients asserted here
// were derived by hand from the defining formulas before the implementations
// ran.

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "kats/corpus.hpp"
#include "kats/newform.hpp"
#include "test_util.hpp"

using namespace kats;

namespace {

ModularForm e4_mod7(size_t prec) {
  Field F = Field::make(7, 1);
  return katz_eisenstein(4, DirichletCharacter::trivial(1, F),
                         DirichletCharacter::trivial(1, F), 1, prec)
      .form;
}

ModularForm eis_mod(uint64_t p, unsigned k, size_t prec) {
  Field F = Field::make(p, 1);
  return katz_eisenstein(k, DirichletCharacter::trivial(1, F),
                         DirichletCharacter::trivial(1, F), 1, prec)
      .form;
}

// Check that the membership coefficients really reconstruct the candidate.
void check_reconstruction(const ModularForm& F, const OldSpaceBasis& basis,
                          const MembershipResult& res) {
  REQUIRE(res.coeffs.size() == basis.gens.size());
  for (size_t n = 0; n <= res.certified_precision; ++n) {
    FieldElement acc = F.expansion().field().zero();
    for (size_t i = 0; i < basis.gens.size(); ++i)
      acc = acc + res.coeffs[i] * basis.gens[i].form.coeff(n);
    REQUIRE(acc == F.coeff(n));
  }
}

}  // namespace

TEST_CASE("sturm_bound arithmetic") {
  CHECK(sturm_bound(1, 4) == 2);    // ceil(4/12) + 1
  CHECK(sturm_bound(1, 12) == 2);
  CHECK(sturm_bound(11, 2) == 3);   // 264/132 = 2, then + 1
  CHECK(sturm_bound(12, 3) == 7);   // 432/72 = 6, then + 1
  CHECK(sturm_bound(12, 12) == 25);
  CHECK(sturm_bound(2, 4) == 2);
  // Monotone in both arguments.
  for (uint64_t M : {1ull, 2ull, 6ull, 11ull, 12ull})
    for (int64_t k = 1; k <= 20; ++k) {
      CHECK(sturm_bound(M, k) <= sturm_bound(M, k + 1));
      CHECK(sturm_bound(M, k) <= sturm_bound(2 * M, k));
    }
  // Saturates instead of overflowing.
  CHECK(sturm_bound(uint64_t(1) << 40, int64_t(1) << 40) == (uint64_t(1) << 62));
  REQUIRE_RAISES(errc::usage_error, sturm_bound(0, 4));
  REQUIRE_RAISES(errc::usage_error, sturm_bound(4, -1));
}

TEST_CASE("weight words enumerate exactly the reachable weights") {
  // Independent enumeration: k p^j + s(p-1) = kprime over j, s >= 0.
  for (uint64_t p : {3ull, 5ull, 7ull}) {
    Field F = Field::make(p, 1);
    for (int64_t k = 1; k <= 6; ++k) {
      QExpansion q(F, 4);
      q.set(1, F.one());
      ModularForm f(q, 1, k, DirichletCharacter::trivial(1, F));
      int64_t kp_max = static_cast<int64_t>(p * p) * k + 4 * static_cast<int64_t>(p - 1);
      for (int64_t kprime = k; kprime <= kp_max; ++kprime) {
        std::vector<unsigned> expect;
        for (unsigned j = 0;; ++j) {
          Int w = Int(k) * int_pow(Int(p), j);
          if (w > kprime) break;
          if ((Int(kprime) - w) % (p - 1) == 0) expect.push_back(j);
        }
        OldSpaceBasis basis = weight_old_generators(f, kprime);
        std::vector<unsigned> got;
        for (const auto& g : basis.gens) {
          got.push_back(g.j);
          CHECK(g.form.weight() == kprime);
          CHECK(g.form.level() == 1);
          CHECK(g.d == 1);
        }
        CHECK(got == expect);
      }
    }
  }
  // The generator expansions are the Frobenius iterates.
  ModularForm e = e4_mod7(10);
  OldSpaceBasis b28 = weight_old_generators(e, 28);
  REQUIRE(b28.gens.size() == 2);
  CHECK(QExpansion::agree(b28.gens[0].form.expansion(), e.expansion()));
  CHECK(QExpansion::agree(b28.gens[1].form.expansion(), frobenius(e).expansion()));
  CHECK(weight_old_generators(e, 5).gens.empty());
  QExpansion z(e.expansion().field(), 3);
  ModularForm w0(z, 1, 0, DirichletCharacter::trivial(1, e.expansion().field()));
  REQUIRE_RAISES(errc::usage_error, weight_old_generators(w0, 6));
}

TEST_CASE("level old generators are the divisor stretches") {
  ModularForm e = e4_mod7(12);
  OldSpaceBasis b = level_old_generators(e, 6);
  REQUIRE(b.gens.size() == 4);
  std::vector<uint64_t> ds;
  for (const auto& g : b.gens) {
    ds.push_back(g.d);
    CHECK(g.form.level() == 6);
    CHECK(g.form.weight() == 4);
    CHECK(g.j == 0);
  }
  CHECK(ds == std::vector<uint64_t>{1, 2, 3, 6});
  CHECK(b.gens[2].form.coeff(3) == e.coeff(1));
  CHECK(b.gens[2].form.coeff(4).is_zero());
  REQUIRE_RAISES(errc::bad_level, level_old_generators(e, 7 * 6));
  ModularForm at2 = degeneracy_Bd(e, 1, 2);
  REQUIRE_RAISES(errc::bad_level, level_old_generators(at2, 5));

  OldSpaceBasis comb = combined_old_generators(e, 2, 28);
  REQUIRE(comb.gens.size() == 4);
  CHECK(comb.gens[0].d == 1);
  CHECK(comb.gens[0].j == 0);
  CHECK(comb.gens[1].j == 1);
  CHECK(comb.gens[2].d == 2);
  CHECK(comb.gens[2].j == 0);
  CHECK(comb.gens[3].d == 2);
  CHECK(comb.gens[3].j == 1);
  for (const auto& g : comb.gens) {
    CHECK(g.form.level() == 2);
    CHECK(g.form.weight() == 28);
  }
}

TEST_CASE("membership verdicts with certification") {
  Field F7 = Field::make(7, 1);
  ModularForm delta = corpus_get("delta", 7, 30);

  // F = 2 B_1(delta) + 5 B_3(delta) at level 12: a certified member.
  OldSpaceBasis basis = level_old_generators(delta, 12);
  QExpansion comb = basis.gens[0].form.expansion().truncated(30).scaled(F7.from_integer(2)) +
                    basis.gens[2].form.expansion().truncated(30).scaled(F7.from_integer(5));
  ModularForm F(comb, 12, 12, DirichletCharacter::trivial(1, F7));
  MembershipResult res = membership(F, basis);
  CHECK(res.verdict == Verdict::member);
  CHECK(res.sturm == 25);
  CHECK(res.certified_precision == 30);
  REQUIRE(res.coeffs.size() == 6);
  CHECK(res.coeffs[0] == F7.from_integer(2));
  CHECK(res.coeffs[1].is_zero());
  CHECK(res.coeffs[2] == F7.from_integer(5));
  CHECK(res.labels[2] == std::pair<uint64_t, unsigned>{3, 0});
  check_reconstruction(F, basis, res);

  // Below the Sturm bound the verdict is only up-to-precision.
  ModularForm delta20 = corpus_get("delta", 7, 20);
  OldSpaceBasis basis20 = level_old_generators(delta20, 12);
  ModularForm F20(comb.truncated(20), 12, 12, DirichletCharacter::trivial(1, F7));
  MembershipResult res20 = membership(F20, basis20);
  CHECK(res20.verdict == Verdict::member_up_to_precision);
  CHECK(res20.certified_precision == 20);
  CHECK(res20.coeffs[0] == F7.from_integer(2));
  check_reconstruction(F20, basis20, res20);

  // Perturbing a_11 (tau(11) is the only contribution there) is caught with
  // the exact witness.
  QExpansion bad = degeneracy_Bd(delta20, 1, 12).expansion();
  bad.set(11, bad.coeff(11) + F7.one());
  ModularForm Fbad(bad, 12, 12, DirichletCharacter::trivial(1, F7));
  MembershipResult rbad = membership(Fbad, basis20);
  CHECK(rbad.verdict == Verdict::non_member);
  REQUIRE(rbad.witness.has_value());
  CHECK(*rbad.witness == 11);
  CHECK(rbad.coeffs.empty());

  // Metadata mismatches are refused outright.
  ModularForm wrong_level(comb, 6, 12, DirichletCharacter::trivial(1, F7));
  REQUIRE_RAISES(errc::mixed_metadata, membership(wrong_level, basis));
  ModularForm wrong_weight(comb, 12, 10, DirichletCharacter::trivial(1, F7));
  REQUIRE_RAISES(errc::mixed_metadata, membership(wrong_weight, basis));

  // Empty basis: only the zero form belongs.
  OldSpaceBasis empty{1, 4, {}};
  ModularForm zero(QExpansion(F7, 10), 1, 4, DirichletCharacter::trivial(1, F7));
  MembershipResult rz = membership(zero, empty);
  CHECK(rz.verdict == Verdict::member);
  CHECK(rz.coeffs.empty());
  MembershipResult rnz = membership(e4_mod7(10), empty);
  CHECK(rnz.verdict == Verdict::non_member);
  CHECK(*rnz.witness == 0);
}

TEST_CASE("lemma31_kill strips Euler factors at bad primes") {
  Field F = Field::make(7, 1);
  DirichletCharacter chi4 = DirichletCharacter::parse("chi(4;3:[6])", F);
  DirichletCharacter chi3 = DirichletCharacter::parse("chi(3;2:[6])", F);
  ModularForm f = katz_eisenstein(2, chi4, chi3, 1, 60).form;  // level 12
  REQUIRE(is_eigen_upto(f, 60).ok);

  ModularForm g = lemma31_kill(f, {2});
  CHECK(g.level() == 24);
  CHECK(g.prec() == 30);
  CHECK(g.weight() == 2);
  CHECK(g.character() == f.character());
  CHECK(g.coeff(2).is_zero());
  CHECK(is_eigen_upto(g, g.prec()).ok);
  CHECK(g.coeff(5) == f.coeff(5));  // good eigenvalues survive
  CHECK(g.coeff(1).is_one());

  ModularForm h = lemma31_kill(f, {3, 2, 2});  // dedup and sort
  CHECK(h.level() == 72);
  CHECK(h.prec() == 20);
  CHECK(h.coeff(2).is_zero());
  CHECK(h.coeff(3).is_zero());
  CHECK(is_eigen_upto(h, h.prec()).ok);
  // Both Euler factors removed, including the inclusion-exclusion cross term:
  // a_6 - a_2 a_3 - a_3 a_2 + a_2 a_3.
  CHECK(h.coeff(6) == f.coeff(6) - f.coeff(2) * f.coeff(3));
  CHECK(h.coeff(6).is_zero());  // a_6 = a_2 a_3 for this eigenform

  CHECK(QExpansion::agree(lemma31_kill(f, {}).expansion(), f.expansion()));
  REQUIRE_RAISES(errc::s_not_dividing_level, lemma31_kill(f, {5}));
  REQUIRE_RAISES(errc::s_not_dividing_level, lemma31_kill(f, {4}));
  QExpansion bad = f.expansion();
  bad.set(10, bad.coeff(10) + F.one());
  REQUIRE_RAISES(errc::not_eigenform, lemma31_kill(f.with_expansion(bad), {2}));
  REQUIRE_RAISES(errc::precision_underflow,
                 lemma31_kill(f.with_expansion(f.expansion().truncated(2)), {3}));
}

TEST_CASE("theta kernel decomposition inverts Frobenius and Hasse factors") {
  ModularForm e = e4_mod7(10);
  // Pure Frobenius image: r = 0, weight divides back down.
  ModularForm fr = frobenius(e);
  ThetaKernelDecomposition d0 = theta_kernel_decompose(fr);
  CHECK(d0.r == 0);
  CHECK(d0.g.weight() == 4);
  CHECK(d0.g.level() == 1);
  CHECK(QExpansion::agree(d0.g.expansion(), e.expansion()));

  // With Hasse factors: weight 46 = 3*(7-1) + 7*4 forces r = 3.
  ModularForm mixed = fr.with_metadata(1, 46);
  ThetaKernelDecomposition d3 = theta_kernel_decompose(mixed);
  CHECK(d3.r == 3);
  CHECK(d3.g.weight() == 4);
  CHECK(QExpansion::agree(d3.g.expansion(), e.expansion()));

  // Support off multiples of p is rejected.
  REQUIRE_RAISES(errc::theta_nonzero, theta_kernel_decompose(e));
  // Zero form of tiny weight: the Hasse factors cannot be peeled off.
  Field F = e.expansion().field();
  ModularForm z(QExpansion(F, 14), 1, 3, DirichletCharacter::trivial(1, F));
  REQUIRE_RAISES(errc::negative_weight, theta_kernel_decompose(z));
  // theta followed by decomposition round-trips theta-stable forms:
  // theta(e) has no constant term and support everywhere, so instead check
  // that frobenius . decompose is the identity on a second example.
  ModularForm delta = corpus_get("delta", 7, 8);
  ThetaKernelDecomposition dd = theta_kernel_decompose(frobenius(delta));
  CHECK(dd.r == 0);
  CHECK(QExpansion::agree(dd.g.expansion(), delta.expansion()));
}

TEST_CASE("check_prop24 reports the three comparisons") {
  ModularForm e = e4_mod7(25);
  ModularForm h2 = hasse_mult(e, 2);
  Prop24Report r = check_prop24(h2, e);
  CHECK(r.weight_congruent);
  CHECK(r.characters_equal);
  CHECK(r.expansions_agree);
  CHECK(r.compared_precision == 25);
  REQUIRE(r.hasse_steps.has_value());
  CHECK(*r.hasse_steps == 2);
  CHECK(*check_prop24(e, h2).hasse_steps == -2);

  Prop24Report bad_w = check_prop24(e.with_metadata(1, 5), e);
  CHECK(!bad_w.weight_congruent);
  CHECK(!bad_w.hasse_steps.has_value());

  QExpansion q = e.expansion();
  q.set(3, q.coeff(3) + e.expansion().field().one());
  Prop24Report bad_e = check_prop24(e.with_expansion(q), e);
  CHECK(bad_e.weight_congruent);
  CHECK(!bad_e.expansions_agree);
  CHECK(!bad_e.hasse_steps.has_value());

  // p = 2: all weights are congruent mod p - 1 = 1.
  ModularForm d2 = corpus_get("delta", 2, 9);
  Prop24Report r2 = check_prop24(d2.with_metadata(1, 14), d2);
  CHECK(r2.weight_congruent);
  CHECK(*r2.hasse_steps == 2);

  Field F5 = Field::make(5, 1);
  ModularForm other(QExpansion(F5, 3), 1, 4, DirichletCharacter::trivial(1, F5));
  REQUIRE_RAISES(errc::field_mismatch, check_prop24(e, other));
}

TEST_CASE("eigensystem comparison") {
  // Weight 4 and weight 10 Eisenstein series mod 7 have identical
  // eigensystems (the exponents differ by p - 1 = 6).
  ModularForm e4 = e4_mod7(60);
  ModularForm e10 = eis_mod(7, 10, 60);
  CompareResult same = compare_eigensystems(e4, e10, {}, 60);
  CHECK(same.equal);
  CHECK(!same.divergence.has_value());
  CHECK(same.table.size() == primes_up_to(60).size());

  // Weight 4 vs weight 8 diverge immediately: sigma_3(2) = 2, sigma_7(2) = 3
  // mod 7.  (Weight 6 has no reduction: its constant term -1/504 is not
  // 7-integral.)
  ModularForm e8 = eis_mod(7, 8, 60);
  CompareResult diff = compare_eigensystems(e4, e8, {}, 60);
  CHECK(!diff.equal);
  REQUIRE(diff.divergence.has_value());
  CHECK(*diff.divergence == 2);
  REQUIRE(!diff.table.empty());
  auto [l0, a0, b0] = diff.table.back();
  CHECK(l0 == 2);
  CHECK(a0 == e4.expansion().field().from_integer(2));
  CHECK(b0 == e4.expansion().field().from_integer(3));

  // Excluding the first divergence exposes the next one (a_3: 0 vs 4).
  CompareResult diff2 = compare_eigensystems(e4, e8, {2}, 60);
  CHECK(*diff2.divergence == 3);

  QExpansion q = e4.expansion();
  q.set(6, q.coeff(6) + e4.expansion().field().one());
  REQUIRE_RAISES(errc::not_eigenform,
                 compare_eigensystems(e4.with_expansion(q), e10, {}, 40));
  Field F5 = Field::make(5, 1);
  QExpansion one5(F5, 10);
  one5.set(1, F5.one());
  ModularForm f5(one5, 1, 4, DirichletCharacter::trivial(1, F5));
  REQUIRE_RAISES(errc::field_mismatch, compare_eigensystems(e4, f5, {}, 10));
}

TEST_CASE("oldform_eigenform_at_l performs root surgery") {
  ModularForm e = e4_mod7(40);
  Field F = e.expansion().field();
  // Hecke polynomial at 2: x^2 - 2x + 8 = (x - 1)^2 mod 7.
  ModularForm g = oldform_eigenform_at_l(e, 2, F.one());
  CHECK(g.level() == 2);
  CHECK(g.weight() == 4);
  CHECK(g.coeff(2) == F.one());
  CHECK(g.coeff(3) == e.coeff(3));
  CHECK(g.coeff(4) == e.coeff(4) - (e.coeff(2) - F.one()) * e.coeff(2));
  CHECK(is_eigen_upto(g, 20).ok);

  // At 3 the polynomial is x^2 + 27 = x^2 - 1: both roots give eigenforms.
  for (int64_t root : {1, 6}) {
    ModularForm h = oldform_eigenform_at_l(e, 3, F.from_integer(root));
    CHECK(h.coeff(3) == F.from_integer(root));
    CHECK(h.level() == 3);
    CHECK(is_eigen_upto(h, 13).ok);
  }
  REQUIRE_RAISES(errc::not_a_root, oldform_eigenform_at_l(e, 2, F.from_integer(3)));
  REQUIRE_RAISES(errc::bad_prime, oldform_eigenform_at_l(e, 7, F.one()));
  REQUIRE_RAISES(errc::bad_prime, oldform_eigenform_at_l(e, 4, F.one()));
  REQUIRE_RAISES(errc::bad_prime, oldform_eigenform_at_l(g, 2, F.one()));
  REQUIRE_RAISES(errc::precision_underflow,
                 oldform_eigenform_at_l(e.with_expansion(e.expansion().truncated(1)),
                                        2, F.one()));
  Field F5 = Field::make(5, 1);
  REQUIRE_RAISES(errc::field_mismatch, oldform_eigenform_at_l(e, 2, F5.one()));
}

TEST_CASE("lemma45_construct builds twisted Eisenstein eigenforms") {
  Field F = Field::make(7, 1);
  DirichletCharacter triv = DirichletCharacter::trivial(1, F);
  DirichletCharacter chi4 = DirichletCharacter::parse("chi(4;3:[6])", F);
  DirichletCharacter chi3 = DirichletCharacter::parse("chi(3;2:[6])", F);

  // Case (i): nontrivial second character.
  Lemma45Result r1 = lemma45_construct(Lemma45Case::i, 2, 2, chi4, chi3, 42);
  CHECK(r1.form.level() == 12);
  CHECK(r1.form.weight() == 2 + 2 * 8);  // two theta twists
  CHECK(r1.rep.a == 2);
  CHECK(r1.rep.b == 3);  // 2 - 1 + 2
  CHECK(is_eigen_upto(r1.form, 20).ok);
  ModularForm base = katz_eisenstein(2, chi4, chi3, 1, 42).form;
  CHECK(QExpansion::agree(r1.form.expansion(), theta_power(base, 2).expansion()));

  // Case (iii): both trivial, weight away from 2.
  Lemma45Result r3 = lemma45_construct(Lemma45Case::iii, 0, 4, triv, triv, 30);
  CHECK(QExpansion::agree(r3.form.expansion(), e4_mod7(30).expansion()));
  CHECK(r3.rep.a == 0);
  CHECK(r3.rep.b == 3);

  // Case (iv): nontrivial first character only.
  Lemma45Result r4 = lemma45_construct(Lemma45Case::iv, 1, 3, chi4, triv, 30);
  CHECK(r4.form.level() == 4);
  CHECK(r4.form.coeff(0).is_zero());  // theta killed the constant term 5
  CHECK(r4.rep.b == (3 - 1 + 1) % 6);
  CHECK(is_eigen_upto(r4.form, 15).ok);

  // Case (ii): weight 2 at level 1 escapes to weight p^2 + 1 (p >= 5).
  Field F5 = Field::make(5, 1);
  DirichletCharacter triv5 = DirichletCharacter::trivial(1, F5);
  Lemma45Result r2 = lemma45_construct(Lemma45Case::ii, 0, 2, triv5, triv5, 30);
  CHECK(r2.form.weight() == 26);
  CHECK(r2.form.level() == 1);
  // c0 = -B_26/52 = -8553103/312 = 1 mod 5.
  CHECK(r2.form.coeff(0).is_one());
  CHECK(is_eigen_upto(r2.form, 15).ok);
  CHECK(r2.rep.b == (26 - 1) % 4);
  Lemma45Result r2t = lemma45_construct(Lemma45Case::ii, 1, 2, triv5, triv5, 30);
  CHECK(r2t.form.weight() == 26 + 6);
  CHECK(r2t.rep.a == 1);
  CHECK(r2t.rep.b == 26 % 4);

  // Hypothesis guards.
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::i, 1, 2, chi4, triv, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::ii, 0, 3, triv5, triv5, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::ii, 0, 2, triv, chi4, 10));
  Field F3 = Field::make(3, 1);
  DirichletCharacter triv3 = DirichletCharacter::trivial(1, F3);
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::ii, 0, 2, triv3, triv3, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::iii, 0, 2, triv, triv, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::iv, 0, 3, triv, chi4, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::iv, 0, 2, chi4, chi3, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::iii, 7, 4, triv, triv, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::iii, 0, 9, triv, triv, 10));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 lemma45_construct(Lemma45Case::iii, 0, 0, triv, triv, 10));
  // Case (iii) over F_5 at weight 4 hits the non-integral constant term.
  REQUIRE_RAISES(errc::not_p_integral,
                 lemma45_construct(Lemma45Case::iii, 0, 4, triv5, triv5, 10));
  REQUIRE_RAISES(errc::field_mismatch,
                 lemma45_construct(Lemma45Case::iii, 0, 4, triv, triv5, 10));
}

TEST_CASE("theorem13_decompose certifies two-stage membership") {
  ModularForm f = e4_mod7(120);
  Field F = f.expansion().field();

  SECTION("level stabilization at 2") {
    ModularForm Fc = oldform_eigenform_at_l(f, 2, F.one());
    Theorem13Certificate cert = theorem13_decompose(Fc, f);
    REQUIRE(cert.beta.size() == 1);
    CHECK(cert.beta[0].first == 0);
    CHECK(cert.beta[0].second.is_one());
    CHECK(QExpansion::agree(cert.F1.expansion(), f.expansion()));
    CHECK(cert.tp_multiplicative);
    CHECK(cert.tp_recursion);
    CHECK(cert.eigen_compat.equal);
    CHECK(cert.level_membership.verdict == Verdict::member);
    REQUIRE(cert.level_membership.coeffs.size() == 2);
    CHECK(cert.level_membership.coeffs[0].is_one());
    CHECK(cert.level_membership.coeffs[1] == F.from_integer(-1));  // -(a_2 - 1)
  }

  SECTION("weight raising with a Frobenius component") {
    ModularForm Fc = hasse_mult(f, 4);
    QExpansion q = Fc.expansion();
    ModularForm fr = frobenius(f);  // weight 28, precision 840
    for (size_t n = 0; n <= q.prec(); ++n)
      q.set(n, q.coeff(n) + F.from_integer(3) * fr.coeff(n));
    Fc = ModularForm(q, 1, 28, f.character());
    Theorem13Certificate cert = theorem13_decompose(Fc, f);
    REQUIRE(cert.beta.size() == 2);
    CHECK(cert.beta[0] == std::pair<unsigned, FieldElement>{0, F.one()});
    CHECK(cert.beta[1] == std::pair<unsigned, FieldElement>{1, F.from_integer(3)});
    CHECK(QExpansion::agree(cert.F1.expansion(), Fc.expansion()));
    CHECK(cert.level_membership.verdict == Verdict::member);
    // The weight-28 three-term rule fails for this combination (the scale
    // l^{k'-1} vanishes at l = p); recorded softly, not raised.
    CHECK(cert.tp_multiplicative);
    CHECK(!cert.tp_recursion);
    REQUIRE(cert.tp_rec_witness.has_value());
    CHECK(*cert.tp_rec_witness == 2);
  }

  SECTION("stage 1 failures") {
    // Divergent eigensystem: delta * E_4 is the weight-16 newform, whose
    // a_2 = 216 = 6 mod 7 differs from sigma_3(2) = 2.
    ModularForm delta = corpus_get("delta", 7, 60);
    QExpansion prod(F, 60);
    for (size_t n = 0; n <= 60; ++n) {
      FieldElement c = F.zero();
      for (size_t i = 0; i <= n; ++i) c = c + delta.coeff(i) * f.coeff(n - i);
      prod.set(n, c);
    }
    ModularForm f16(prod, 1, 16, f.character());
    REQUIRE(is_eigen_upto(f16, 40).ok);
    REQUIRE_RAISES(errc::stage1_fail, theorem13_decompose(f16, f));
    // No weight word: 8 = 4 mod 6 fails, so nothing connects weight 4 to
    // weight 8.  The candidate is a synthetic multiplicative sequence that
    // matches sigma_3 at every prime but obeys the weight-8 Hecke recursion,
    // so it passes the eigenform screen.
    QExpansion syn(F, 60);
    syn.set(0, F.zero());
    syn.set(1, F.one());
    for (size_t n = 2; n <= 60; ++n) {
      size_t l = 2;
      while (n % l != 0) ++l;
      size_t e = 0, rest = n;
      while (rest % l == 0) rest /= l, ++e;
      if (rest > 1) {
        size_t pe = n / rest;
        syn.set(n, syn.coeff(pe) * syn.coeff(rest));
      } else if (e == 1) {
        syn.set(n, f.coeff(l));
      } else {
        FieldElement scale = F.from_integer(static_cast<int64_t>(l)).pow(7);
        syn.set(n, syn.coeff(l) * syn.coeff(n / l) -
                       scale * syn.coeff(n / l / l));
      }
    }
    ModularForm fake8(syn, 1, 8, f.character());
    REQUIRE(is_eigen_upto(fake8, 60).ok);
    REQUIRE_RAISES(errc::stage1_fail, theorem13_decompose(fake8, f));
    // A p-power coefficient outside every admissible word.
    ModularForm Fc = hasse_mult(f, 4);
    QExpansion q = Fc.expansion().truncated(90);
    ModularForm fr = frobenius(f);
    for (size_t n = 0; n <= q.prec(); ++n)
      q.set(n, q.coeff(n) + F.from_integer(3) * fr.coeff(n));
    q.set(49, q.coeff(49) + F.one());
    REQUIRE_RAISES(errc::stage1_fail,
                   theorem13_decompose(ModularForm(q, 1, 28, f.character()), f));
  }

  SECTION("stage 2 failure with witness") {
    ModularForm Fc = oldform_eigenform_at_l(f, 2, F.one());
    QExpansion q = Fc.expansion().truncated(11);
    q.set(4, q.coeff(4) + F.one());
    REQUIRE_RAISES(errc::stage2_fail,
                   theorem13_decompose(ModularForm(q, 2, 4, f.character()), f));
  }

  SECTION("input guards") {
    REQUIRE_RAISES(errc::not_normalizable, theorem13_decompose(frobenius(f), f));
    ModularForm at3 = degeneracy_Bd(f, 1, 3);
    ModularForm at2 = oldform_eigenform_at_l(f, 2, F.one());
    REQUIRE_RAISES(errc::level_not_divisible, theorem13_decompose(at2, at3));
  }
}

TEST_CASE("check_cor37 classifies eigenvalue relations by prime") {
  ModularForm f = e4_mod7(40);
  Field F = f.expansion().field();
  ModularForm g = oldform_eigenform_at_l(f, 2, F.one());

  Cor37Report rep = check_cor37(g, f);
  CHECK(rep.all_satisfied);
  CHECK(rep.bound == 40);  // min of the two precisions
  for (const Cor37Line& line : rep.lines) {
    if (line.l == 2) {
      CHECK(std::string(line.case_label) == "iii");
      CHECK(line.satisfied);
      CHECK(line.iii_with_weight_F);
      CHECK(line.iii_with_weight_f);
      CHECK(line.a == F.one());
      CHECK(line.b == F.from_integer(2));
    } else if (line.l == 7) {
      CHECK(std::string(line.case_label) == "iii");  // l = p
      CHECK(line.satisfied);
    } else {
      CHECK(std::string(line.case_label) == "i");
      CHECK(line.satisfied);
      CHECK(line.a == line.b);
    }
  }

  // Case (ii): the prime divides both the seed level and the quotient.
  ModularForm G4 = g.with_metadata(4, 4);
  Cor37Report rep2 = check_cor37(G4, g);
  CHECK(rep2.all_satisfied);
  bool saw_ii = false;
  for (const Cor37Line& line : rep2.lines)
    if (line.l == 2) {
      saw_ii = true;
      CHECK(std::string(line.case_label) == "ii");
      CHECK(line.satisfied);  // equal branch
    }
  CHECK(saw_ii);
  // Zero branch of case (ii).
  QExpansion qz = g.expansion();
  qz.set(2, F.zero());
  Cor37Report rep3 = check_cor37(g.with_expansion(qz).with_metadata(4, 4), g);
  for (const Cor37Line& line : rep3.lines)
    if (line.l == 2) CHECK(line.satisfied);
  // Violated branch of case (ii).
  qz.set(2, F.from_integer(3));
  Cor37Report rep4 = check_cor37(g.with_expansion(qz).with_metadata(4, 4), g);
  CHECK(!rep4.all_satisfied);
  for (const Cor37Line& line : rep4.lines)
    if (line.l == 2) CHECK(!line.satisfied);

  // Case (i) violation.
  QExpansion q5 = g.expansion();
  q5.set(5, q5.coeff(5) + F.one());
  Cor37Report rep5 = check_cor37(g.with_expansion(q5), f);
  CHECK(!rep5.all_satisfied);
  for (const Cor37Line& line : rep5.lines)
    if (line.l == 5) {
      CHECK(std::string(line.case_label) == "i");
      CHECK(!line.satisfied);
    }

  // Bound trims the table.
  Cor37Report rep6 = check_cor37(g, f, 3);
  CHECK(rep6.lines.size() == 2);
  CHECK(rep6.bound == 3);

  REQUIRE_RAISES(errc::level_not_divisible, check_cor37(g, degeneracy_Bd(f, 1, 3)));
  Field F5 = Field::make(5, 1);
  QExpansion one5(F5, 10);
  one5.set(1, F5.one());
  REQUIRE_RAISES(errc::field_mismatch,
                 check_cor37(g, ModularForm(one5, 1, 4, DirichletCharacter::trivial(1, F5))));
}

TEST_CASE("companion pairs and the level-raising trichotomy") {
  // Weight 4 mod 7 is self-companion: p + 1 - k = 4 and
  // n^4 sigma_3(n) = n sigma_3(n) mod 7.
  ModularForm e = e4_mod7(40);
  Field F = e.expansion().field();
  CompanionReport rep = companion_check(e, e);
  CHECK(rep.identity_checked == 40);
  CHECK(!rep.has_trichotomy);

  // Distinct weights mod 11: E_4 and E_8.
  ModularForm a = eis_mod(11, 4, 30);
  ModularForm b = eis_mod(11, 8, 30);
  CompanionReport rep11 = companion_check(a, b);
  CHECK(rep11.identity_checked == 30);

  // The identity is enforced coefficient by coefficient.
  QExpansion q = b.expansion();
  q.set(9, q.coeff(9) + b.expansion().field().one());
  REQUIRE_RAISES(errc::identity_fail, companion_check(a, b.with_expansion(q)));

  // Hypothesis guards.
  REQUIRE_RAISES(errc::hypothesis_violation, companion_check(a, b.with_metadata(1, 7)));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 companion_check(a.with_metadata(1, 1), b.with_metadata(1, 11)));
  REQUIRE_RAISES(errc::hypothesis_violation,
                 companion_check(e.with_metadata(1, 8), e.with_metadata(1, 0)));
  QExpansion qe(F, 10);
  qe.set(1, F.one());  // a_7 = 0: not ordinary
  ModularForm thin(qe, 1, 4, DirichletCharacter::trivial(1, F));
  REQUIRE_RAISES(errc::hypothesis_violation, companion_check(thin, thin));
  REQUIRE_RAISES(errc::mixed_metadata, companion_check(e, degeneracy_Bd(e, 1, 2)));

  // Trichotomy against the level-1 seed: the stabilized pair at level 2.
  ModularForm F2 = oldform_eigenform_at_l(e, 2, F.one());
  CompanionReport tri = companion_check(F2, F2, &e);
  CHECK(tri.has_trichotomy);
  CHECK(tri.trichotomy_all);
  bool saw2 = false, saw7 = false;
  for (const CompanionLine& line : tri.lines) {
    if (line.l == 2) {
      saw2 = true;
      CHECK(std::string(line.case_label) == "ii/iii");
      CHECK(!line.ok_equal);  // 2^4 b_2 = 2, but 2 c_2 = 4
      CHECK(line.ok_quad);    // 2*1*(8-2) + 2 = 14 = 0 mod 7
      CHECK(line.satisfied);
    } else if (line.l == 7) {
      saw7 = true;
      CHECK(std::string(line.case_label) == "none");
      CHECK(line.satisfied);
    } else {
      CHECK(std::string(line.case_label) == "i");
      CHECK(line.ok_equal);
    }
  }
  CHECK(saw2);
  CHECK(saw7);
  ModularForm seed3 = degeneracy_Bd(e, 1, 3);
  REQUIRE_RAISES(errc::level_not_divisible, companion_check(F2, F2, &seed3));
}
