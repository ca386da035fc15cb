#include <doctest.h>

#include "malseq/error.hpp"
#include "malseq/rules.hpp"
#include "oracles.hpp"

using namespace malseq;

namespace {

Dataset categorical(const std::vector<std::string>& rows, const std::vector<int>& labels) {
  std::vector<ResidueSequence> seqs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    seqs.push_back({"s" + std::to_string(i), labels[i] ? Label::worm : Label::virus, RepId::R1, rows[i]});
  }
  return build_dataset(seqs, false);
}

RuleSet rules_of(Label target, const std::vector<std::vector<std::pair<std::size_t, char>>>& rules) {
  RuleSet rs;
  for (const auto& r : rules) {
    Rule rule;
    rule.target = target;
    for (const auto& [pos, letter] : r) rule.conditions.push_back({pos - 1, letter});
    rs.rules.push_back(rule);
  }
  return rs;
}

}  // namespace

TEST_SUITE("rules") {
  TEST_CASE("separable attribute gives one rule per class") {
    const auto d = categorical({"AC", "AD", "CC", "CD"}, {0, 0, 1, 1});
    const auto rs = prism_induce(d);
    const auto virus = rs.for_class(Label::virus);
    REQUIRE(virus.size() == 1);
    REQUIRE(virus[0]->conditions.size() == 1);
    CHECK(virus[0]->conditions[0] == Condition{0, 'A'});
    const auto worm = rs.for_class(Label::worm);
    REQUIRE(worm.size() == 1);
    CHECK(worm[0]->conditions[0] == Condition{0, 'C'});
    CHECK(format_ruleset(rs) == "virus: pos1=A\nworm: pos1=C\n");
  }

  TEST_CASE("precision beats coverage") {
    // pos1=A has precision 3/4, pos2=C has 2/2.
    const auto d = categorical({"AC", "AC", "AD", "AE", "DD", "DE"}, {0, 0, 0, 1, 1, 1});
    const auto rs = prism_induce(d);
    REQUIRE_FALSE(rs.rules.empty());
    CHECK(rs.rules[0].target == Label::virus);
    CHECK(rs.rules[0].conditions == std::vector<Condition>{{1, 'C'}});
  }

  TEST_CASE("ties prefer larger p, then earlier position, then letter") {
    // Both pos1=A and pos2=A cover exactly the two virus rows.
    const auto d = categorical({"AA", "AA", "CC"}, {0, 0, 1});
    CHECK(prism_induce(d).rules[0].conditions == std::vector<Condition>{{0, 'A'}});
    // pos1=A is 1/1 and pos2=C is 2/2: equal precision, larger p wins.
    const auto e = categorical({"AC", "DC", "DD"}, {0, 0, 1});
    CHECK(prism_induce(e).rules[0].conditions == std::vector<Condition>{{1, 'C'}});
  }

  TEST_CASE("random consistent datasets: precision 1 and full coverage") {
    Rng rng(17);
    for (int k = 0; k < 25; ++k) {
      std::vector<std::string> rows;
      std::vector<int> labels;
      std::map<std::string, int> seen;
      while (rows.size() < 20) {
        std::string r;
        for (int a = 0; a < 4; ++a) r += "ACDW"[rng.below(4)];
        const int l = static_cast<int>(rng.below(2));
        if (seen.count(r)) continue;
        seen[r] = l;
        rows.push_back(r);
        labels.push_back(l);
      }
      if (std::count(labels.begin(), labels.end(), 0) == 0 || std::count(labels.begin(), labels.end(), 1) == 0) {
        continue;
      }
      const auto d = categorical(rows, labels);
      const auto rs = prism_induce(d);
      for (const auto& r : rs.rules) {
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (r.covers(d.categorical[i])) CHECK(d.labels[i] == r.target);
        }
      }
      for (std::size_t i = 0; i < d.size(); ++i) {
        bool covered = false;
        for (const Rule* r : rs.for_class(d.labels[i])) covered = covered || r->covers(d.categorical[i]);
        CHECK(covered);
      }
      CHECK(parse_ruleset(format_ruleset(rs)) == rs);
    }
  }

  TEST_CASE("prism errors") {
    CHECK_THROWS_AS(prism_induce(categorical({"A", "C"}, {0, 0})), RulesError);
    std::vector<ResidueSequence> seqs{{"a", Label::virus, RepId::R1, "A"}, {"b", Label::worm, RepId::R1, "C"}};
    CHECK_THROWS_AS(prism_induce(build_dataset(seqs, true)), RulesError);
  }

  TEST_CASE("ruleset text") {
    const auto rs = parse_ruleset("virus: pos36=A, pos21=D\nworm: 51=H\n");
    REQUIRE(rs.rules.size() == 2);
    CHECK(rs.rules[0].conditions == std::vector<Condition>{{35, 'A'}, {20, 'D'}});
    CHECK(rs.rules[1].conditions == std::vector<Condition>{{50, 'H'}});
    CHECK(format_ruleset(rs) == "virus: pos36=A, pos21=D\nworm: pos51=H\n");
    CHECK_THROWS_AS(parse_ruleset("trojan: pos1=A\n"), RulesError);
    CHECK_THROWS_AS(parse_ruleset("virus: pos1=A, pos1=C\n"), RulesError);
    CHECK_THROWS_AS(parse_ruleset("virus: posx=A\n"), RulesError);
  }

  TEST_CASE("rules to pattern") {
    const auto r3 = rules_of(Label::virus, {{{65, 'F'}}, {{12, 'A'}, {13, 'A'}}});
    const auto p = rules_to_pattern(r3, Label::virus);
    REQUIRE(p);
    REQUIRE(p->elements.size() == 3);
    CHECK(p->elements[0].attribute == 11);
    CHECK(p->elements[1].attribute == 12);
    CHECK(p->elements[2].attribute == 64);
    CHECK(pattern_letters(*p) == "AAF");
    CHECK(pattern_display(*p) == "..AA..F..");

    const auto alt = rules_to_pattern(rules_of(Label::virus, {{{36, 'P'}}, {{36, 'A'}, {40, 'Y'}}}), Label::virus);
    REQUIRE(alt);
    REQUIRE(alt->elements.size() == 1);
    CHECK(alt->elements[0].letters == "AP");
    CHECK(pattern_letters(*alt) == "[AP]");

    CHECK_FALSE(rules_to_pattern(rules_of(Label::worm, {{{5, 'W'}}}), Label::worm).has_value());
    CHECK_THROWS_AS(rules_to_pattern(rules_of(Label::worm, {{{5, 'A'}}}), Label::virus), RulesError);

    // Positions strictly ascending and no gap letters survive.
    Rng rng(23);
    for (int k = 0; k < 50; ++k) {
      std::vector<std::vector<std::pair<std::size_t, char>>> rules;
      for (std::size_t r = 0; r < 1 + rng.below(4); ++r) {
        std::vector<std::pair<std::size_t, char>> conds;
        for (std::size_t c = 0; c < 1 + rng.below(4); ++c) conds.push_back({1 + rng.below(30), "ACWY"[rng.below(4)]});
        rules.push_back(conds);
      }
      const auto q = rules_to_pattern(rules_of(Label::virus, rules), Label::virus);
      if (!q) continue;
      for (std::size_t e = 0; e < q->elements.size(); ++e) {
        if (e > 0) CHECK(q->elements[e].attribute > q->elements[e - 1].attribute);
        CHECK(q->elements[e].letters.find_first_of("WY") == std::string::npos);
      }
    }
  }

  TEST_CASE("meta-signatures from the worked patterns") {
    const auto& r1 = RepresentationTable::get(RepId::R1);
    const auto& r3 = RepresentationTable::get(RepId::R3);
    CHECK(to_string(pattern_to_meta_signature(parse_pattern_letters("ANDELA[AP]A"), r1)) == "1b3401[1c]1");
    CHECK(to_string(pattern_to_meta_signature(parse_pattern_letters("LCI[LD]RHLS[GR]S[LM][DP]"), r1)) ==
          "028[03]e70f[6e]f[0a][3c]");
    CHECK(to_string(pattern_to_meta_signature(parse_pattern_letters("AAF"), r3)) == "114");
    CHECK(to_string(pattern_to_meta_signature(parse_pattern_letters("AI[LM]MNA[HM]"), r3)) == "17[90]0a1[60]");
    CHECK_THROWS_AS(parse_pattern_letters("A[W]"), RulesError);
    CHECK_THROWS_AS(parse_pattern_letters("A[C"), RulesError);
    CHECK_THROWS_AS(pattern_to_meta_signature(parse_pattern_letters("B"), r1), Error);

    const auto sig = parse_meta_signature("1b3401[1c]1");
    CHECK(sig.elements.size() == 8);
    CHECK(sig.elements[7] == "1");
    CHECK(sig.elements[6] == "1c");
    CHECK(to_string(sig) == "1b3401[1c]1");
  }

  TEST_CASE("scanning") {
    CHECK(scan_meta_signature("0114f", parse_meta_signature("114")) == std::vector<std::size_t>{1});
    CHECK(scan_meta_signature("1c41", parse_meta_signature("1[1c]4")) == std::vector<std::size_t>{0});
    CHECK(scan_meta_signature("000", parse_meta_signature("114")).empty());
    CHECK(scan_meta_signature("1111", parse_meta_signature("11")) == std::vector<std::size_t>{0, 1, 2});
    CHECK_THROWS_AS(scan_meta_signature("11x", parse_meta_signature("1")), RulesError);

    Rng rng(29);
    for (int k = 0; k < 200; ++k) {
      std::string stream;
      for (std::size_t i = 0; i < rng.below(40); ++i) stream += "0123"[rng.below(4)];
      std::vector<std::string> elements;
      for (std::size_t e = 0; e < 1 + rng.below(3); ++e) {
        std::string set(1, "0123"[rng.below(4)]);
        if (rng.chance(0.3)) {
          const char other = "0123"[rng.below(4)];
          if (other != set[0]) set += other;
        }
        elements.push_back(set);
      }
      MetaSignature sig;
      sig.elements = elements;
      CHECK(scan_meta_signature(stream, sig) == oracle::brute_scan(stream, elements));
    }
  }

  TEST_CASE("conjoining") {
    const std::string r1v = "ANDELA[AP]A", r1w = "LCI[LD]RHLS[GR]S[LM][DP]", r3v = "AAF", r3w = "AI[LM]MNA[HM]";
    CHECK(conjoin_meta_signatures({r1v, r1w, r3v, r3w}) == "ANDELA[AP]ALCI[LD]RHLS[GR]S[LM][DP]AAFAI[LM]MNA[HM]");
    CHECK(conjoin_meta_signatures({r1v, r3v, r1w, r3w}) == "ANDELA[AP]AAFLCI[LD]RHLS[GR]S[LM][DP]AI[LM]MNA[HM]");
    CHECK(conjoin_meta_signatures({r3w}) == r3w);
    CHECK(conjoin_meta_signatures({"AC", "CD"}) == "ACD");
    CHECK(conjoin_meta_signatures({"A[LM]", "[LM]C"}) == "A[LM]C");
    CHECK(conjoin_meta_signatures({"A", "A"}) == "AA");  // a part is never swallowed whole
    CHECK(conjoin_meta_signatures({"A[L]", "[LM]"}) == "A[L][LM]");
  }
}
