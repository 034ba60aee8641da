#pragma once

// Plain-text persistence for modular forms. The format is line oriented and
// round-trips exactly:
//
//   p=7 d=1 modulus=0,1
//   N=4 k=3 char=chi(4;3:[6]) flags=normalized
//   prec=12
//   a1=[1]
//   a2=[3]
//
// Coefficient lines carry only the nonzero coefficients, in ascending order.
// "flags=-" marks an empty flag set. The modulus line is redundant (the
// modulus is determined by p and d) and is verified on parse.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kats/characters.hpp"
#include "kats/errors.hpp"
#include "kats/gf.hpp"
#include "kats/qseries.hpp"

namespace kats {

namespace iodetail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// key=value tokens separated by single spaces; values contain no spaces.
inline std::map<std::string, std::string> kv_line(const std::string& line) {
  std::map<std::string, std::string> out;
  for (const std::string& tok : split(line, ' ')) {
    if (tok.empty()) continue;
    size_t eq = tok.find('=');
    if (eq == std::string::npos) raise(errc::parse_error, "expected key=value, got '" + tok + "'");
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

inline const std::string& need(const std::map<std::string, std::string>& kv,
                               const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) raise(errc::parse_error, "missing field '" + key + "'");
  return it->second;
}

inline uint64_t parse_u64(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    raise(errc::parse_error, "bad integer '" + s + "'");
  return std::stoull(s);
}

inline int64_t parse_i64(const std::string& s) {
  if (!s.empty() && s[0] == '-') return -static_cast<int64_t>(parse_u64(s.substr(1)));
  return static_cast<int64_t>(parse_u64(s));
}

}  // namespace iodetail

inline std::string serialize_form(const ModularForm& f) {
  const Field& F = f.field();
  std::ostringstream out;
  out << "p=" << F.characteristic() << " d=" << F.degree() << " modulus=";
  const auto& mod = F.modulus();
  for (size_t i = 0; i < mod.size(); ++i) out << (i ? "," : "") << mod[i];
  out << "\n";
  out << "N=" << f.level() << " k=" << f.weight() << " char=" << f.character().to_string()
      << " flags=";
  std::vector<std::string> flags;
  if (f.flags().cuspidal) flags.push_back("cuspidal");
  if (f.flags().normalized) flags.push_back("normalized");
  if (f.flags().asserted_newform) flags.push_back("newform");
  if (f.flags().asserted_minimal_weight) flags.push_back("minimal-weight");
  if (flags.empty()) out << "-";
  for (size_t i = 0; i < flags.size(); ++i) out << (i ? "," : "") << flags[i];
  out << "\n";
  out << "prec=" << f.prec() << "\n";
  for (size_t n = 0; n <= f.prec(); ++n)
    if (!f.coeff(n).is_zero()) out << "a" << n << "=" << f.coeff(n).to_string() << "\n";
  return out.str();
}

inline ModularForm parse_form(const std::string& text) {
  using namespace iodetail;
  std::vector<std::string> lines;
  for (const std::string& raw : split(text, '\n')) {
    std::string line = strip(raw);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() < 3) raise(errc::parse_error, "form file needs at least three lines");

  auto head = kv_line(lines[0]);
  uint64_t p = parse_u64(need(head, "p"));
  uint64_t d = parse_u64(need(head, "d"));
  Field F = Field::make(p, static_cast<unsigned>(d));
  std::string mod_str;
  for (size_t i = 0; i < F.modulus().size(); ++i)
    mod_str += (i ? "," : "") + std::to_string(F.modulus()[i]);
  if (need(head, "modulus") != mod_str)
    raise(errc::parse_error, "modulus line does not match the canonical modulus for p, d");

  auto meta = kv_line(lines[1]);
  uint64_t N = parse_u64(need(meta, "N"));
  int64_t k = parse_i64(need(meta, "k"));
  DirichletCharacter chi = DirichletCharacter::parse(need(meta, "char"), F);
  FormFlags flags;
  std::string fl = need(meta, "flags");
  if (fl != "-") {
    for (const std::string& name : split(fl, ',')) {
      if (name == "cuspidal" || name == "normalized") continue;  // recomputed
      if (name == "newform")
        flags.asserted_newform = true;
      else if (name == "minimal-weight")
        flags.asserted_minimal_weight = true;
      else
        raise(errc::parse_error, "unknown flag '" + name + "'");
    }
  }

  auto pm = kv_line(lines[2]);
  uint64_t prec = parse_u64(need(pm, "prec"));
  QExpansion q(F, prec);
  for (size_t i = 3; i < lines.size(); ++i) {
    auto kv = kv_line(lines[i]);
    if (kv.size() != 1) raise(errc::parse_error, "expected one coefficient per line");
    const auto& [key, val] = *kv.begin();
    if (key.size() < 2 || key[0] != 'a')
      raise(errc::parse_error, "expected coefficient line, got '" + lines[i] + "'");
    uint64_t n = parse_u64(key.substr(1));
    if (n > prec) raise(errc::parse_error, "coefficient index " + std::to_string(n) +
                                               " beyond declared precision");
    q.set(n, FieldElement::parse(val, F));
  }
  return ModularForm(std::move(q), N, k, std::move(chi), flags);
}

}  // namespace kats
