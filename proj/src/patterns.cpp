#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "malseq/error.hpp"
#include "malseq/rules.hpp"

namespace malseq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void append_element(std::string& out, std::string_view letters) {
  if (letters.size() == 1) {
    out += letters;
  } else {
    out += '[';
    out += letters;
    out += ']';
  }
}

// Splits "AB[CD]E" into {"A", "B", "CD", "E"}.
std::vector<std::string> split_bracketed(std::string_view text, const char* what) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == ']') throw RulesError(std::string(what) + ": unmatched ']'");
    if (c != '[') {
      out.emplace_back(1, c);
      continue;
    }
    const auto close = text.find(']', i + 1);
    if (close == std::string_view::npos) throw RulesError(std::string(what) + ": unterminated '['");
    std::string alt;
    for (char a : text.substr(i + 1, close - i - 1)) {
      if (std::isspace(static_cast<unsigned char>(a))) continue;
      if (a == '[') throw RulesError(std::string(what) + ": nested '['");
      if (alt.find(a) == std::string::npos) alt.push_back(a);
    }
    if (alt.size() < 2) throw RulesError(std::string(what) + ": brackets need at least two alternatives");
    out.push_back(std::move(alt));
    i = close;
  }
  return out;
}

}  // namespace

std::string format_ruleset(const RuleSet& rs) {
  std::string out;
  for (const auto& rule : rs.rules) {
    out += to_string(rule.target);
    out += ':';
    for (std::size_t k = 0; k < rule.conditions.size(); ++k) {
      out += k == 0 ? " pos" : ", pos";
      out += std::to_string(rule.conditions[k].attribute + 1);
      out += '=';
      out += rule.conditions[k].letter;
    }
    out += '\n';
  }
  return out;
}

RuleSet parse_ruleset(std::string_view text) {
  RuleSet rs;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& what) {
      throw RulesError("rule line " + std::to_string(line_no) + ": " + what);
    };
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) fail("expected 'class: posN=X, ...'");
    Rule rule;
    const auto label = trim(line.substr(0, colon));
    if (label == "virus") {
      rule.target = Label::virus;
    } else if (label == "worm") {
      rule.target = Label::worm;
    } else {
      fail("unknown class '" + std::string(label) + "'");
    }
    std::string_view rest = line.substr(colon + 1);
    while (!trim(rest).empty()) {
      const auto comma = rest.find(',');
      std::string_view cond = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = cond.find('=');
      if (eq == std::string_view::npos) fail("condition without '='");
      std::string_view pos = trim(cond.substr(0, eq));
      const std::string_view letter = trim(cond.substr(eq + 1));
      // A bare number is read as a position.
      if (pos.starts_with("pos")) pos.remove_prefix(3);
      std::size_t n = 0;
      if (pos.empty() || !std::all_of(pos.begin(), pos.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        fail("bad position '" + std::string(pos) + "'");
      }
      n = std::stoul(std::string(pos));
      if (n == 0) fail("positions start at 1");
      if (letter.size() != 1) fail("condition value must be one letter");
      rule.conditions.push_back({n - 1, letter.front()});
    }
    for (std::size_t a = 0; a < rule.conditions.size(); ++a) {
      for (std::size_t b = a + 1; b < rule.conditions.size(); ++b) {
        if (rule.conditions[a].attribute == rule.conditions[b].attribute &&
            rule.conditions[a].letter != rule.conditions[b].letter) {
          fail("contradictory conditions on pos" + std::to_string(rule.conditions[a].attribute + 1));
        }
      }
    }
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

std::optional<WildcardPattern> rules_to_pattern(const RuleSet& rs, Label target) {
  const auto rules = rs.for_class(target);
  if (rules.empty()) throw RulesError("no rules for class '" + std::string(to_string(target)) + "'");
  std::map<std::size_t, std::set<char>> pooled;
  for (const Rule* r : rules) {
    for (const auto& c : r->conditions) {
      if (is_gap_letter(c.letter)) continue;
      pooled[c.attribute].insert(c.letter);
    }
  }
  if (pooled.empty()) return std::nullopt;
  WildcardPattern p;
  for (const auto& [attr, letters] : pooled) p.elements.push_back({attr, std::string(letters.begin(), letters.end())});
  return p;
}

std::string pattern_letters(const WildcardPattern& p) {
  std::string out;
  for (const auto& e : p.elements) append_element(out, e.letters);
  return out;
}

std::string pattern_display(const WildcardPattern& p) {
  std::string out = "..";
  for (std::size_t k = 0; k < p.elements.size(); ++k) {
    if (k > 0 && p.elements[k].attribute != p.elements[k - 1].attribute + 1) out += "..";
    append_element(out, p.elements[k].letters);
  }
  out += "..";
  return out;
}

WildcardPattern parse_pattern_letters(std::string_view text) {
  WildcardPattern p;
  std::size_t pos = 0;
  for (auto& letters : split_bracketed(text, "pattern")) {
    for (char c : letters) {
      if (!std::isupper(static_cast<unsigned char>(c))) throw RulesError(std::string("pattern letter '") + c + "' is not a residue");
      if (c == kSingleGap || c == kDoubleGap) throw RulesError("patterns never contain gap letters");
    }
    p.elements.push_back({pos++, std::move(letters)});
  }
  return p;
}

MetaSignature pattern_to_meta_signature(const WildcardPattern& p, const RepresentationTable& rep) {
  MetaSignature sig;
  sig.rep = rep.id();
  for (const auto& e : p.elements) {
    std::string hex;
    for (char c : e.letters) {
      if (!rep.has_residue(c)) {
        throw RulesError(std::string("letter '") + c + "' is not in representation " + std::string(to_string(rep.id())));
      }
      hex.push_back(rep.decode(c));
    }
    sig.elements.push_back(std::move(hex));
  }
  return sig;
}

std::string to_string(const MetaSignature& sig) {
  std::string out;
  for (const auto& e : sig.elements) append_element(out, e);
  return out;
}

MetaSignature parse_meta_signature(std::string_view text, RepId rep) {
  MetaSignature sig;
  sig.rep = rep;
  for (auto& e : split_bracketed(text, "meta-signature")) {
    for (char& c : e) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (!std::isxdigit(static_cast<unsigned char>(c))) throw RulesError(std::string("non-hex symbol '") + c + "' in meta-signature");
    }
    sig.elements.push_back(std::move(e));
  }
  return sig;
}

std::vector<std::size_t> scan_meta_signature(std::string_view stream, const MetaSignature& sig) {
  std::string hex(stream);
  for (char& c : hex) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!std::isxdigit(static_cast<unsigned char>(c))) throw RulesError(std::string("non-hex symbol '") + c + "' in stream");
  }
  std::vector<std::size_t> out;
  const std::size_t k = sig.elements.size();
  if (k == 0 || hex.size() < k) return out;
  for (std::size_t off = 0; off + k <= hex.size(); ++off) {
    bool ok = true;
    for (std::size_t e = 0; e < k && ok; ++e) ok = sig.elements[e].find(hex[off + e]) != std::string::npos;
    if (ok) out.push_back(off);
  }
  return out;
}

namespace {

// Single letters and bracketed alternative sets.
std::vector<std::string> pattern_elements(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c != '[') {
      out.emplace_back(1, c);
      continue;
    }
    const auto close = text.find(']', i);
    if (close == std::string_view::npos) throw RulesError("unterminated '[' in '" + std::string(text) + "'");
    out.emplace_back(text.substr(i, close - i + 1));
    i = close;
  }
  return out;
}

}  // namespace

std::string conjoin_meta_signatures(const std::vector<std::string>& parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) {
    const auto next = pattern_elements(p);
    // Neighbouring parts share their longest suffix/prefix overlap; no part
    // is swallowed whole.
    std::size_t overlap = 0;
    const std::size_t limit = std::min(out.size(), next.size());
    for (std::size_t k = limit == 0 ? 0 : limit - 1; k > 0; --k) {
      if (std::equal(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(k),
                     out.end() - static_cast<std::ptrdiff_t>(k))) {
        overlap = k;
        break;
      }
    }
    out.insert(out.end(), next.begin() + static_cast<std::ptrdiff_t>(overlap), next.end());
  }
  std::string joined;
  for (const auto& e : out) joined += e;
  return joined;
}

}  // namespace malseq
