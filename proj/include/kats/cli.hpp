#pragma once
// Command surface: subcommand dispatch over the library, file-based form
// ingestion, and deterministic key=value reports.  Exit codes follow the
// 0/1/2 contract: 0 = constructed/verified, 1 = a checked property failed
// (with a witness in the report), 2 = usage or precondition error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "kats/characters.hpp"
#include "kats/corpus.hpp"
#include "kats/eisenstein.hpp"
#include "kats/errors.hpp"
#include "kats/form_io.hpp"
#include "kats/gf.hpp"
#include "kats/newform.hpp"
#include "kats/numeric.hpp"
#include "kats/qseries.hpp"
#include "kats/report.hpp"

namespace kats {

namespace clidetail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::usage_error, "cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ModularForm load_form(const std::string& path) { return parse_form(slurp(path)); }

inline void emit_text(const std::string& text, const std::string& outfile,
                      std::ostream& fallback) {
  if (outfile.empty()) {
    fallback << text;
    return;
  }
  std::ofstream o(outfile, std::ios::binary);
  if (!o) raise(errc::usage_error, "cannot open output file '" + outfile + "'");
  o << text;
}

// "7" or "49 = 7^2" style tokens; -p P is shorthand for --field P.
inline Field field_from_args(const std::string& spec, uint64_t prime) {
  if (!spec.empty()) {
    auto caret = spec.find('^');
    if (caret == std::string::npos) return Field::make(iodetail::parse_u64(spec), 1);
    uint64_t p = iodetail::parse_u64(spec.substr(0, caret));
    uint64_t d = iodetail::parse_u64(spec.substr(caret + 1));
    if (d == 0) raise(errc::usage_error, "field degree must be positive");
    return Field::make(p, static_cast<unsigned>(d));
  }
  if (prime != 0) return Field::make(prime, 1);
  raise(errc::usage_error, "a coefficient field is required (--field p^d or -p P)");
}

inline DirichletCharacter parse_char_arg(const std::string& tok, const Field& F) {
  if (tok.empty() || tok == "triv") return DirichletCharacter::trivial(1, F);
  return DirichletCharacter::parse(tok, F);
}

inline std::vector<uint64_t> parse_list_u64(const std::string& csv) {
  std::vector<uint64_t> out;
  std::string piece;
  std::istringstream ss(csv);
  while (std::getline(ss, piece, ','))
    if (!piece.empty()) out.push_back(iodetail::parse_u64(piece));
  return out;
}

// Zero-padded index so report keys sort numerically.
inline std::string pad6(uint64_t n) {
  std::string s = std::to_string(n);
  return s.size() >= 6 ? s : std::string(6 - s.size(), '0') + s;
}

inline void put_form_meta(Report& r, const ModularForm& f) {
  r.put("field", f.expansion().field());
  r.put("level", f.level());
  r.put("weight", f.weight());
  r.put("prec", f.prec());
  r.put("char", f.character());
  r.put("cuspidal", f.flags().cuspidal);
  r.put("normalized", f.flags().normalized);
}

// Form-producing subcommands: text mode emits the form file alone; report
// mode prints metadata first and sends the form to --out (or appends it
// after a blank line).
inline int finish_form(const ModularForm& f, const std::string& format,
                       const std::string& outfile, std::ostream& out,
                       Report extra = {}) {
  std::string text = serialize_form(f);
  if (format == "report") {
    put_form_meta(extra, f);
    out << extra;
    if (!outfile.empty())
      emit_text(text, outfile, out);
    else
      out << '\n' << text;
  } else {
    emit_text(text, outfile, out);
  }
  return 0;
}

}  // namespace clidetail

inline int run_command(std::vector<std::string> args, std::ostream& out,
                       std::ostream& err) {
  using namespace clidetail;

  CLI::App app{"exact arithmetic for mod-p modular forms as truncated q-expansions"};
  app.name("kats");
  app.require_subcommand(0, 1);

  // Shared option storage; exactly one subcommand parses per invocation.
  std::vector<std::string> in_files;
  std::string out_file, format = "text", field_spec;
  std::string chi1 = "triv", chi2 = "triv";
  uint64_t prime = 0, prec = 0;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--in", in_files, "input form file (repeatable where two inputs are needed)");
    s->add_option("--out", out_file, "write the primary output to this file");
    s->add_option("--format", format, "output style")
        ->check(CLI::IsMember({"text", "report"}));
    s->add_option("--field", field_spec, "coefficient field, p or p^d");
    s->add_option("-p,--prime", prime, "prime-field shorthand for --field");
    return s->add_option("--prec", prec, "truncation precision");
  };

  auto* c_eis = app.add_subcommand("eisenstein", "build a mod-p Eisenstein series");
  int64_t eis_k = 0;
  uint64_t eis_t = 1;
  bool eis_exact = false;
  add_common(c_eis)->required();
  c_eis->add_option("-k,--weight", eis_k, "weight")->required();
  c_eis->add_option("--chi1", chi1, "first character ('triv' or chi(N;g:v,...))");
  c_eis->add_option("--chi2", chi2, "second character");
  c_eis->add_option("-t,--stretch", eis_t, "stretch factor (q -> q^t)");
  c_eis->add_flag("--exact", eis_exact, "print the exact cyclotomic expansion instead");

  auto* c_hecke = app.add_subcommand("hecke", "apply the Hecke operator T_n");
  uint64_t hk_n = 0;
  add_common(c_hecke);
  c_hecke->add_option("-n,--index", hk_n, "operator index")->required();

  auto* c_theta = app.add_subcommand("theta", "apply the theta derivation");
  unsigned th_times = 1;
  add_common(c_theta);
  c_theta->add_option("--times", th_times, "number of applications");

  auto* c_frob = app.add_subcommand("frobenius", "substitute q -> q^p");
  add_common(c_frob);

  auto* c_degen = app.add_subcommand("degeneracy", "apply the degeneracy map q -> q^d");
  uint64_t dg_d = 0, dg_M = 0;
  add_common(c_degen);
  c_degen->add_option("-d,--stretch", dg_d, "stretch divisor")->required();
  c_degen->add_option("-M,--level", dg_M, "target level")->required();

  auto* c_kill = app.add_subcommand("kill", "zero out eigenvalues at primes dividing the level");
  std::string kill_set;
  add_common(c_kill);
  c_kill->add_option("--set", kill_set, "comma-separated primes dividing the level")->required();

  auto* c_dtheta = app.add_subcommand("decompose-theta", "invert a theta-kernel form as A^r g(q^p)");
  add_common(c_dtheta);

  auto* c_old = app.add_subcommand("oldspace", "list old-space generators");
  uint64_t os_M = 0;
  int64_t os_k = 0;
  add_common(c_old);
  auto* os_optM = c_old->add_option("-M,--level", os_M, "target level");
  auto* os_optK = c_old->add_option("-k,--weight", os_k, "target weight");

  auto* c_member = app.add_subcommand("member", "test membership in an old space");
  std::string mem_newform;
  uint64_t mem_M = 0;
  int64_t mem_k = 0;
  add_common(c_member);
  c_member->add_option("--newform", mem_newform, "seed form file")->required();
  auto* mem_optM = c_member->add_option("-M,--level", mem_M, "target level (default: candidate's)");
  auto* mem_optK = c_member->add_option("-k,--weight", mem_k, "target weight (default: candidate's)");

  auto* c_decomp = app.add_subcommand("decompose", "two-stage old-space decomposition certificate");
  std::string dec_newform;
  add_common(c_decomp);
  c_decomp->add_option("--newform", dec_newform, "seed form file")->required();

  auto* c_cor37 = app.add_subcommand("check-cor37", "classify eigenvalues against a seed newform");
  std::string c37_newform;
  uint64_t c37_bound = 0;
  add_common(c_cor37);
  c_cor37->add_option("--newform", c37_newform, "seed form file")->required();
  c_cor37->add_option("--bound", c37_bound, "largest prime to classify");

  auto* c_cor47 = app.add_subcommand("check-cor47", "verify companion-form identities");
  std::string c47_companion, c47_newform;
  add_common(c_cor47);
  c_cor47->add_option("--companion", c47_companion, "companion form file")->required();
  c_cor47->add_option("--newform", c47_newform, "optional comparison form file");

  auto* c_p24 = app.add_subcommand("check-prop24", "compare weight congruence and characters");
  add_common(c_p24);

  auto* c_cmp = app.add_subcommand("compare", "compare two eigensystems prime by prime");
  std::string cmp_bad;
  uint64_t cmp_bound = 0;
  add_common(c_cmp);
  c_cmp->add_option("--bad", cmp_bad, "comma-separated primes to skip");
  c_cmp->add_option("--bound", cmp_bound, "largest prime to compare");

  auto* c_l45 = app.add_subcommand("lemma45", "build a twisted Eisenstein eigenform with representation data");
  std::string l45_case;
  unsigned l45_a = 0;
  int64_t l45_k = 0;
  add_common(c_l45)->required();
  c_l45->add_option("--case", l45_case, "hypothesis regime: i, ii, iii, or iv")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "iii", "iv"}));
  c_l45->add_option("-a,--twist", l45_a, "theta-twist exponent");
  c_l45->add_option("-k,--weight", l45_k, "weight")->required();
  c_l45->add_option("--chi1", chi1, "first character");
  c_l45->add_option("--chi2", chi2, "second character");

  auto* c_corpus = app.add_subcommand("corpus", "reduce a built-in integer expansion mod p");
  std::string corp_name;
  add_common(c_corpus)->required();
  c_corpus->add_option("--name", corp_name, "entry: delta, E4, E6, E8, E10, E14")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  auto need_in = [&](size_t n) {
    if (in_files.size() != n)
      raise(errc::usage_error, "expected exactly " + std::to_string(n) +
                                   " --in file(s), got " + std::to_string(in_files.size()));
  };

  try {
    if (*c_eis) {
      if (eis_k < 1) raise(errc::usage_error, "weight must be >= 1");
      Field F = field_from_args(field_spec, prime);
      DirichletCharacter e1 = parse_char_arg(chi1, F);
      DirichletCharacter e2 = parse_char_arg(chi2, F);
      if (eis_exact) {
        EisensteinSpec spec(static_cast<unsigned>(eis_k), e1.lift(), e2.lift(), eis_t);
        std::vector<CycloRational> exact = eisenstein_qexp(spec, prec);
        Report r;
        r.put("k", eis_k);
        r.put("t", eis_t);
        r.put("level", spec.level());
        for (size_t n = 0; n < exact.size(); ++n) r.put("c." + pad6(n), exact[n]);
        emit_text(r.str(), out_file, out);
        return 0;
      }
      EisensteinForm ef = katz_eisenstein(static_cast<unsigned>(eis_k), e1, e2, eis_t, prec);
      Report extra;
      extra.put("rep.a", ef.rep.a);
      extra.put("rep.b", ef.rep.b);
      extra.put("rep.eps", ef.rep.eps);
      extra.put("rep.epsp", ef.rep.epsp);
      return finish_form(ef.form, format, out_file, out, std::move(extra));
    }

    if (*c_hecke) {
      need_in(1);
      return finish_form(hecke_Tn(load_form(in_files[0]), hk_n), format, out_file, out);
    }

    if (*c_theta) {
      need_in(1);
      return finish_form(theta_power(load_form(in_files[0]), th_times), format, out_file, out);
    }

    if (*c_frob) {
      need_in(1);
      return finish_form(frobenius(load_form(in_files[0])), format, out_file, out);
    }

    if (*c_degen) {
      need_in(1);
      return finish_form(degeneracy_Bd(load_form(in_files[0]), dg_d, dg_M), format,
                         out_file, out);
    }

    if (*c_kill) {
      need_in(1);
      return finish_form(lemma31_kill(load_form(in_files[0]), parse_list_u64(kill_set)),
                         format, out_file, out);
    }

    if (*c_dtheta) {
      need_in(1);
      ThetaKernelDecomposition dec = theta_kernel_decompose(load_form(in_files[0]));
      Report r;
      r.put("r", dec.r);
      put_form_meta(r, dec.g);
      out << r;
      if (!out_file.empty())
        emit_text(serialize_form(dec.g), out_file, out);
      else
        out << '\n' << serialize_form(dec.g);
      return 0;
    }

    if (*c_old) {
      need_in(1);
      ModularForm f = load_form(in_files[0]);
      OldSpaceBasis basis;
      if (os_optM->count() && os_optK->count())
        basis = combined_old_generators(f, os_M, os_k);
      else if (os_optK->count())
        basis = weight_old_generators(f, os_k);
      else if (os_optM->count())
        basis = level_old_generators(f, os_M);
      else
        raise(errc::usage_error, "oldspace needs -M, -k, or both");
      Report r;
      r.put("count", basis.gens.size());
      r.put("level", basis.level);
      r.put("weight", basis.weight);
      for (size_t i = 0; i < basis.gens.size(); ++i) {
        const std::string key = "gen." + pad6(i);
        r.put(key + ".d", basis.gens[i].d);
        r.put(key + ".j", basis.gens[i].j);
        r.put(key + ".prec", basis.gens[i].form.prec());
      }
      emit_text(r.str(), out_file, out);
      return 0;
    }

    if (*c_member) {
      need_in(1);
      ModularForm F = load_form(in_files[0]);
      ModularForm f = load_form(mem_newform);
      uint64_t M = mem_optM->count() ? mem_M : F.level();
      int64_t kp = mem_optK->count() ? mem_k : F.weight();
      MembershipResult res = membership(F, combined_old_generators(f, M, kp));
      Report r;
      r.put("verdict", verdict_name(res.verdict));
      r.put("certified_precision", res.certified_precision);
      r.put("sturm", res.sturm);
      if (res.witness) r.put("witness", *res.witness);
      for (size_t i = 0; i < res.coeffs.size(); ++i) {
        const std::string key = "gen." + pad6(i);
        r.put(key + ".d", res.labels[i].first);
        r.put(key + ".j", res.labels[i].second);
        r.put(key + ".coeff", res.coeffs[i]);
      }
      emit_text(r.str(), out_file, out);
      return res.verdict == Verdict::non_member ? 1 : 0;
    }

    if (*c_decomp) {
      need_in(1);
      ModularForm F = load_form(in_files[0]);
      ModularForm f = load_form(dec_newform);
      Theorem13Certificate cert = theorem13_decompose(F, f);
      Report r;
      r.put("eigen.compared", cert.eigen_compat.table.size());
      r.put("eigen.equal", cert.eigen_compat.equal);
      for (const auto& [j, c] : cert.beta) r.put("beta." + pad6(j), c);
      r.put("tp.multiplicative", cert.tp_multiplicative);
      if (cert.tp_mult_witness) r.put("tp.multiplicative.witness", *cert.tp_mult_witness);
      r.put("tp.recursion", cert.tp_recursion);
      if (cert.tp_rec_witness) r.put("tp.recursion.witness", *cert.tp_rec_witness);
      const MembershipResult& mem = cert.level_membership;
      r.put("membership.verdict", verdict_name(mem.verdict));
      for (size_t i = 0; i < mem.coeffs.size(); ++i) {
        const std::string key = "membership.gen." + pad6(i);
        r.put(key + ".d", mem.labels[i].first);
        r.put(key + ".coeff", mem.coeffs[i]);
      }
      r.put("certified_precision", cert.certified_precision);
      r.put("sturm", mem.sturm);
      if (!out_file.empty()) emit_text(serialize_form(cert.F1), out_file, out);
      out << r;
      return 0;
    }

    if (*c_cor37) {
      need_in(1);
      ModularForm F = load_form(in_files[0]);
      ModularForm f = load_form(c37_newform);
      Cor37Report rep = check_cor37(F, f, c37_bound);
      Report r;
      r.put("all", rep.all_satisfied);
      r.put("bound", rep.bound);
      for (const Cor37Line& line : rep.lines) {
        const std::string key = "l." + pad6(line.l);
        r.put(key + ".case", line.case_label);
        r.put(key + ".ok", line.satisfied);
        r.put(key + ".a", line.a);
        r.put(key + ".b", line.b);
        if (std::string(line.case_label) == "iii") {
          r.put(key + ".quad_weight_F", line.iii_with_weight_F);
          r.put(key + ".quad_weight_f", line.iii_with_weight_f);
        }
      }
      emit_text(r.str(), out_file, out);
      return rep.all_satisfied ? 0 : 1;
    }

    if (*c_cor47) {
      need_in(1);
      ModularForm F = load_form(in_files[0]);
      ModularForm G = load_form(c47_companion);
      std::optional<ModularForm> seed;
      if (!c47_newform.empty()) seed = load_form(c47_newform);
      CompanionReport rep = companion_check(F, G, seed ? &*seed : nullptr);
      Report r;
      r.put("identity_checked", rep.identity_checked);
      if (rep.has_trichotomy) {
        r.put("trichotomy.all", rep.trichotomy_all);
        for (const CompanionLine& line : rep.lines) {
          const std::string key = "l." + pad6(line.l);
          r.put(key + ".case", line.case_label);
          r.put(key + ".ok", line.satisfied);
          if (std::string(line.case_label) == "ii/iii") {
            r.put(key + ".ok_equal", line.ok_equal);
            r.put(key + ".ok_quad", line.ok_quad);
          }
        }
      }
      emit_text(r.str(), out_file, out);
      return (rep.has_trichotomy && !rep.trichotomy_all) ? 1 : 0;
    }

    if (*c_p24) {
      need_in(2);
      Prop24Report rep = check_prop24(load_form(in_files[0]), load_form(in_files[1]));
      Report r;
      r.put("weight_congruent", rep.weight_congruent);
      r.put("characters_equal", rep.characters_equal);
      r.put("expansions_agree", rep.expansions_agree);
      r.put("compared_precision", rep.compared_precision);
      if (rep.hasse_steps) r.put("hasse_steps", *rep.hasse_steps);
      emit_text(r.str(), out_file, out);
      return rep.weight_congruent && rep.characters_equal ? 0 : 1;
    }

    if (*c_cmp) {
      need_in(2);
      ModularForm a = load_form(in_files[0]);
      ModularForm b = load_form(in_files[1]);
      uint64_t bound = cmp_bound ? cmp_bound : UINT64_MAX;
      CompareResult res = compare_eigensystems(a, b, parse_list_u64(cmp_bad), bound);
      Report r;
      r.put("equal", res.equal);
      if (res.divergence) r.put("divergence", *res.divergence);
      for (const auto& [l, af, bg] : res.table) {
        const std::string key = "l." + pad6(l);
        r.put(key + ".f", af);
        r.put(key + ".g", bg);
      }
      emit_text(r.str(), out_file, out);
      return res.equal ? 0 : 1;
    }

    if (*c_l45) {
      if (l45_k < 1) raise(errc::usage_error, "weight must be >= 1");
      Field F = field_from_args(field_spec, prime);
      DirichletCharacter e1 = parse_char_arg(chi1, F);
      DirichletCharacter e2 = parse_char_arg(chi2, F);
      Lemma45Case c = l45_case == "i"     ? Lemma45Case::i
                      : l45_case == "ii"  ? Lemma45Case::ii
                      : l45_case == "iii" ? Lemma45Case::iii
                                          : Lemma45Case::iv;
      Lemma45Result res =
          lemma45_construct(c, l45_a, static_cast<unsigned>(l45_k), e1, e2, prec);
      Report extra;
      extra.put("case", l45_case);
      extra.put("rep.a", res.rep.a);
      extra.put("rep.b", res.rep.b);
      extra.put("rep.eps", res.rep.eps);
      extra.put("rep.epsp", res.rep.epsp);
      return finish_form(res.form, format, out_file, out, std::move(extra));
    }

    if (*c_corpus) {
      uint64_t p = prime;
      if (!field_spec.empty()) {
        Field F = field_from_args(field_spec, prime);
        if (F.degree() != 1)
          raise(errc::usage_error, "corpus entries reduce over prime fields");
        p = F.characteristic();
      }
      if (p == 0) raise(errc::usage_error, "corpus needs a prime (-p P)");
      return finish_form(corpus_get(corp_name, p, prec), format, out_file, out);
    }
  } catch (const error& e) {
    if (errc_is_checked_failure(e.code())) {
      Report r;
      r.put("error", errc_name(e.code()));
      r.put("message", e.what());
      if (e.has_witness()) r.put("witness", e.witness());
      out << r;
      return 1;
    }
    err << errc_name(e.code()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  err << app.help();
  return 2;
}

}  // namespace kats
