#include "malseq/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "malseq/error.hpp"

namespace malseq {

namespace {

constexpr std::string_view kHexDigits = "0123456789abcdef";

int hex_index(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw CorpusError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string_view to_string(Label label) { return label == Label::virus ? "virus" : "worm"; }

Label parse_label(std::string_view text) {
  if (text == "virus") return Label::virus;
  if (text == "worm") return Label::worm;
  throw CorpusError("unknown label '" + std::string(text) + "'");
}

std::string_view to_string(RepId id) {
  switch (id) {
    case RepId::R1: return "R1";
    case RepId::R2: return "R2";
    case RepId::R3: return "R3";
  }
  return "?";
}

RepId parse_rep_id(std::string_view text) {
  if (text == "R1" || text == "r1") return RepId::R1;
  if (text == "R2" || text == "r2") return RepId::R2;
  if (text == "R3" || text == "r3") return RepId::R3;
  throw CorpusError("unknown representation '" + std::string(text) + "'");
}

RepresentationTable::RepresentationTable(RepId id, std::string_view residues_in_hex_order) : id_(id) {
  inverse_.fill(-1);
  for (std::size_t i = 0; i < 16; ++i) {
    const char r = residues_in_hex_order[i];
    residues_[i] = r;
    inverse_[static_cast<unsigned char>(r)] = static_cast<signed char>(i);
  }
}

const RepresentationTable& RepresentationTable::get(RepId id) {
  // Residues listed in hex order 0,1,...,9,a,...,f.
  static const RepresentationTable r1(RepId::R1, "LACDEFGHIKMNPQRS");
  static const RepresentationTable r2(RepId::R2, "HSRQPNMLKIGFEDCA");
  static const RepresentationTable r3(RepId::R3, "MADEFGHIKLNPQRSC");
  switch (id) {
    case RepId::R1: return r1;
    case RepId::R2: return r2;
    case RepId::R3: return r3;
  }
  throw CorpusError("unknown representation");
}

bool RepresentationTable::has_hex(char hex) const { return hex_index(hex) >= 0; }

bool RepresentationTable::has_residue(char residue) const {
  return inverse_[static_cast<unsigned char>(residue)] >= 0;
}

char RepresentationTable::encode(char hex) const {
  const int i = hex_index(hex);
  if (i < 0) throw CorpusError(std::string("not a hex symbol: '") + hex + "'");
  return residues_[static_cast<std::size_t>(i)];
}

char RepresentationTable::decode(char residue) const {
  const int i = inverse_[static_cast<unsigned char>(residue)];
  if (i < 0) {
    throw CorpusError(std::string("letter '") + residue + "' is not in representation " +
                      std::string(to_string(id_)));
  }
  return kHexDigits[static_cast<std::size_t>(i)];
}

std::vector<HexSignature> parse_corpus(std::string_view text) {
  std::vector<HexSignature> out;
  std::unordered_set<std::string> names;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      fail_line(line_no, "expected 'name,label,hexdigits'");
    }
    HexSignature sig;
    sig.name = std::string(trim(line.substr(0, c1)));
    const auto label = trim(line.substr(c1 + 1, c2 - c1 - 1));
    const auto digits = trim(line.substr(c2 + 1));
    if (sig.name.empty()) fail_line(line_no, "empty name");
    if (label == "virus") {
      sig.label = Label::virus;
    } else if (label == "worm") {
      sig.label = Label::worm;
    } else {
      fail_line(line_no, "unknown label '" + std::string(label) + "'");
    }
    if (digits.empty()) fail_line(line_no, "empty signature");
    sig.digits.reserve(digits.size());
    for (char c : digits) {
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (hex_index(lower) < 0) fail_line(line_no, std::string("non-hex symbol '") + c + "'");
      sig.digits.push_back(lower);
    }
    if (!names.insert(sig.name).second) fail_line(line_no, "duplicate name '" + sig.name + "'");
    out.push_back(std::move(sig));
  }
  return out;
}

std::string write_corpus(const std::vector<HexSignature>& corpus) {
  std::string out;
  for (const auto& sig : corpus) {
    out += sig.name;
    out += ',';
    out += to_string(sig.label);
    out += ',';
    out += sig.digits;
    out += '\n';
  }
  return out;
}

std::vector<HexSignature> load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open corpus file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

std::string encode_hex(std::string_view hex, const RepresentationTable& rep) {
  std::string out;
  out.reserve(hex.size());
  for (char c : hex) out.push_back(rep.encode(c));
  return out;
}

ResidueSequence encode_signature(const HexSignature& sig, const RepresentationTable& rep) {
  return ResidueSequence{sig.name, sig.label, rep.id(), encode_hex(sig.digits, rep)};
}

std::vector<ResidueSequence> encode_corpus(const std::vector<HexSignature>& corpus, RepId rep) {
  const auto& table = RepresentationTable::get(rep);
  std::vector<ResidueSequence> out;
  out.reserve(corpus.size());
  for (const auto& sig : corpus) out.push_back(encode_signature(sig, table));
  return out;
}

std::string decode_residues(std::string_view letters, const RepresentationTable& rep, bool drop_gaps) {
  std::string out;
  out.reserve(letters.size());
  for (char c : letters) {
    if (c == kSingleGap || c == kDoubleGap) {
      if (!drop_gaps) throw CorpusError(std::string("gap letter '") + c + "' present; decode with drop_gaps");
      continue;
    }
    out.push_back(rep.decode(c));
  }
  return out;
}

std::string_view numeric_alphabet() { return "ACDEFGHIKLMNPQRSYW"; }

double numeric_value(char letter) {
  const auto pos = numeric_alphabet().find(letter);
  if (pos == std::string_view::npos) throw CorpusError(std::string("no numeric value for letter '") + letter + "'");
  // Exact decimal ladder 0.10, 0.15, ..., 0.95.
  return static_cast<double>(10 + 5 * pos) / 100.0;
}

std::vector<double> to_numeric(std::string_view letters) {
  std::vector<double> out;
  out.reserve(letters.size());
  for (char c : letters) out.push_back(numeric_value(c));
  return out;
}

}  // namespace malseq
