#pragma once

// Modular (PRISM) rule induction and the path from rules to hexadecimal
// meta-signatures.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "malseq/corpus.hpp"
#include "malseq/ml.hpp"

namespace malseq {

struct Condition {
  std::size_t attribute = 0;  // 0-based; printed as pos<attribute + 1>
  char letter = 'A';

  bool operator==(const Condition&) const = default;
};

struct Rule {
  Label target = Label::virus;
  std::vector<Condition> conditions;  // in the order they were added

  bool covers(std::string_view instance) const;
  bool operator==(const Rule&) const = default;
};

struct RuleSet {
  std::vector<Rule> rules;  // virus rules first, each class in induction order

  std::vector<const Rule*> for_class(Label label) const;
  bool operator==(const RuleSet&) const = default;
};

/// Cendrowska's covering algorithm. Each rule greedily adds the condition
/// with the best precision p/t over the instances it still covers (ties:
/// larger p, lower position, then letter) until it covers only its class or
/// no condition narrows it further.
RuleSet prism_induce(const Dataset& train);

/// `virus: pos36=A, pos21=D` one rule per line.
std::string format_ruleset(const RuleSet& rs);
RuleSet parse_ruleset(std::string_view text);

/// Ordered residues with "any number of any residue" between elements.
struct WildcardPattern {
  struct Element {
    std::size_t attribute = 0;
    std::string letters;  // one letter, or several alternatives

    bool operator==(const Element&) const = default;
  };
  std::vector<Element> elements;  // strictly ascending attributes

  bool operator==(const WildcardPattern&) const = default;
};

/// Pools every condition of the class's rules, drops gap letters, orders by
/// position and merges same-position letters into alphabetical alternatives.
/// Returns nullopt when only gap conditions were found; throws when the
/// class has no rules at all.
std::optional<WildcardPattern> rules_to_pattern(const RuleSet& rs, Label target);

/// Letters only, alternatives bracketed: "ANDELA[AP]A".
std::string pattern_letters(const WildcardPattern& p);

/// With wildcards: "..A..ND..E.."; neighbouring positions are written
/// without a wildcard between them.
std::string pattern_display(const WildcardPattern& p);

/// Parses the letters-only form; element positions are consecutive.
WildcardPattern parse_pattern_letters(std::string_view text);

struct MetaSignature {
  RepId rep = RepId::R1;
  std::vector<std::string> elements;  // one hex symbol, or >= 2 alternatives

  bool operator==(const MetaSignature&) const = default;
};

MetaSignature pattern_to_meta_signature(const WildcardPattern& p, const RepresentationTable& rep);

/// Bracket syntax, e.g. "1b3401[1c]1".
std::string to_string(const MetaSignature& sig);
MetaSignature parse_meta_signature(std::string_view text, RepId rep = RepId::R1);

/// Offsets where the elements match consecutively; overlapping matches are
/// all reported.
std::vector<std::size_t> scan_meta_signature(std::string_view stream, const MetaSignature& sig);

/// Joins letters-only patterns in order. Where the end of the sequence so far
/// equals the start of the next part, the shared elements are written once
/// (longest such overlap, shorter than either side).
std::string conjoin_meta_signatures(const std::vector<std::string>& parts);

}  // namespace malseq
