#include <doctest.h>

#include <numeric>

#include "malseq/align.hpp"
#include "malseq/error.hpp"
#include "oracles.hpp"

using namespace malseq;

namespace {

std::string random_letters(Rng& rng, std::string_view alphabet, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
  return s;
}

std::vector<ResidueSequence> as_rows(const std::vector<std::string>& letters, Label label = Label::virus) {
  std::vector<ResidueSequence> out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    out.push_back({std::string(to_string(label)) + std::to_string(i), label, RepId::R1, letters[i]});
  }
  return out;
}

void check_msa(const std::vector<std::string>& rows, const std::vector<std::string>& inputs, char gap) {
  REQUIRE(rows.size() == inputs.size());
  std::size_t longest = 0;
  for (const auto& s : inputs) longest = std::max(longest, s.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].size() == rows[0].size());
    CHECK(strip_letter(rows[i], gap) == inputs[i]);
  }
  CHECK(rows[0].size() >= longest);
}

const std::string kR1 = "ACDEFGHIKLMNPQRS";

}  // namespace

TEST_SUITE("align") {
  TEST_CASE("matrices") {
    const auto id = load_matrix(MatrixName::identity);
    CHECK(id.score('A', 'A') == 1);
    CHECK(id.score('A', 'C') == 0);
    CHECK(id.score('W', 'W') == 1);
    CHECK(id.score('Y', 'W') == 0);
    CHECK(id.size() == 18);
    const auto b = load_matrix(MatrixName::blosum62);
    CHECK(b.score('W', 'W') == 11);
    CHECK(b.score('A', 'A') == 4);
    CHECK(b.score('W', 'C') == -2);
    const auto g = load_matrix(MatrixName::gonnet250);
    CHECK(g.score('W', 'W') == doctest::Approx(14.2));
    CHECK(g.score('A', 'A') == doctest::Approx(2.4));
    for (const auto* m : {&id, &b, &g}) {
      for (char x : m->alphabet()) {
        for (char y : m->alphabet()) CHECK(m->score(x, y) == m->score(y, x));
      }
      for (char c : kR1) CHECK(m->contains(c));
      CHECK(m->contains('W'));
    }
    CHECK(parse_matrix_name("blosum62") == MatrixName::blosum62);
    CHECK_THROWS_AS(parse_matrix_name("pam250"), AlignError);
    CHECK(default_gaps(MatrixName::identity).open == 1.0);
    CHECK(default_gaps(MatrixName::blosum62).open == 10.0);
    CHECK(default_gaps(MatrixName::gonnet250).extend == 0.5);
  }

  TEST_CASE("matrix parser rejects bad tables") {
    CHECK_NOTHROW(parse_matrix("t", "# c\n  A C\nA 1 0\nC 0 1\n"));
    CHECK_THROWS_AS(parse_matrix("t", "  A C\nA 1 2\nC 0 1\n"), AlignError);  // asymmetric
    CHECK_THROWS_AS(parse_matrix("t", "  A C\nA 1 0\n"), AlignError);          // missing row
    CHECK_THROWS_AS(parse_matrix("t", "  A C\nA 1 0\nD 0 1\n"), AlignError);   // label mismatch
    CHECK_THROWS_AS(parse_matrix("t", "  A A\nA 1 0\nA 0 1\n"), AlignError);   // duplicate
    CHECK_THROWS_AS(load_matrix(MatrixName::identity).score('A', 'B'), AlignError);
  }

  TEST_CASE("pairwise worked examples") {
    const auto id = load_matrix(MatrixName::identity);
    const GapPenalties g{1, 1};
    auto r = nw_align("AA", "AA", id, g);
    CHECK(r.row_a == "AA");
    CHECK(r.row_b == "AA");
    CHECK(r.score == 2);
    r = nw_align("ACD", "AD", id, g);
    CHECK(r.row_a == "ACD");
    CHECK(r.row_b == "A-D");
    CHECK(r.score == 0);
    r = nw_align("A", "", id, g);
    CHECK(r.row_a == "A");
    CHECK(r.row_b == "-");
    CHECK(r.score == -2);
    r = nw_align("", "", id, g);
    CHECK(r.row_a.empty());
    CHECK(r.score == 0);
    CHECK_THROWS_AS(nw_align("AB", "A", id, g), AlignError);
  }

  TEST_CASE("pairwise matches exhaustive enumeration") {
    Rng rng(21);
    const auto id = load_matrix(MatrixName::identity);
    const auto bl = load_matrix(MatrixName::blosum62);
    for (int k = 0; k < 60; ++k) {
      const std::string a = random_letters(rng, kR1, rng.below(7));
      const std::string b = random_letters(rng, kR1, rng.below(7));
      for (const auto* m : {&id, &bl}) {
        for (GapPenalties g : {GapPenalties{1, 0.5}, GapPenalties{10, 0.5}, GapPenalties{0, 0}}) {
          const auto r = nw_align(a, b, *m, g);
          const double best = oracle::best_alignment_score(
              a.size(), b.size(), [&](std::size_t i, std::size_t j) { return m->score(a[i], b[j]); }, g.open,
              g.extend);
          CHECK(r.score == best);
          // Reported rows achieve the reported score and strip back to the inputs.
          CHECK(oracle::score_rows(r.row_a, r.row_b, [&](char x, char y) { return m->score(x, y); }, g.open,
                                   g.extend) == r.score);
          CHECK(strip_letter(r.row_a, '-') == a);
          CHECK(strip_letter(r.row_b, '-') == b);
          for (std::size_t c = 0; c < r.row_a.size(); ++c) CHECK_FALSE((r.row_a[c] == '-' && r.row_b[c] == '-'));
          CHECK(nw_align(b, a, *m, g).score == r.score);
        }
      }
    }
  }

  TEST_CASE("distances") {
    const auto id = load_matrix(MatrixName::identity);
    const GapPenalties g = default_gaps(MatrixName::identity);
    const auto d = distance_matrix({"ACDE", "ACDE", "AAAA", "CCCC", "AACC", "AAGG"}, id, g);
    CHECK(d(0, 1) == 0.0);
    CHECK(d(2, 3) == 1.0);
    CHECK(d(4, 5) == 0.5);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d(i, i) == 0.0);
      for (std::size_t j = 0; j < d.size(); ++j) {
        CHECK(d(i, j) == d(j, i));
        CHECK(d(i, j) >= 0.0);
        CHECK(d(i, j) <= 1.0);
      }
    }
    CHECK_THROWS_AS(distance_matrix({"A"}, id, g), AlignError);
  }

  TEST_CASE("distance matrix does not depend on jobs") {
    Rng rng(8);
    std::vector<std::string> seqs;
    for (int i = 0; i < 12; ++i) seqs.push_back(random_letters(rng, kR1, 5 + rng.below(20)));
    const auto m = load_matrix(MatrixName::blosum62);
    const auto a = distance_matrix(seqs, m, default_gaps(MatrixName::blosum62), 1);
    const auto b = distance_matrix(seqs, m, default_gaps(MatrixName::blosum62), 4);
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      for (std::size_t j = 0; j < seqs.size(); ++j) CHECK(a(i, j) == b(i, j));
    }
  }

  TEST_CASE("guide tree examples") {
    DistanceMatrix two(2);
    two.set(0, 1, 0.4);
    auto t = build_guide_tree(two);
    CHECK(t.nodes.size() == 3);
    CHECK(t.weights == std::vector<double>{1.0, 1.0});

    DistanceMatrix three(3);
    three.set(0, 1, 0.2);
    three.set(0, 2, 0.8);
    three.set(1, 2, 0.8);
    t = build_guide_tree(three);
    const auto order = t.merge_order();
    REQUIRE(order.size() == 2);
    CHECK(order[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(t.weights[2] > t.weights[0]);
    CHECK(t.weights[0] == doctest::Approx(t.weights[1]));
    CHECK(std::accumulate(t.weights.begin(), t.weights.end(), 0.0) == doctest::Approx(3.0));
    // Heights: {0,1} at 0.1, root at 0.4. Raw weights 0.1 + 0.3/2 and 0.4.
    CHECK(t.nodes[3].height == doctest::Approx(0.1));
    CHECK(t.nodes[4].height == doctest::Approx(0.4));
    CHECK(t.weights[2] / t.weights[0] == doctest::Approx(0.4 / 0.25));

    DistanceMatrix flat(5);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) flat.set(i, j, 0.5);
    }
    t = build_guide_tree(flat);
    for (double w : t.weights) CHECK(w == doctest::Approx(1.0));
    CHECK(t.leaves_under(t.root()).size() == 5);
  }

  TEST_CASE("guide tree topology is scale invariant") {
    Rng rng(31);
    for (int k = 0; k < 40; ++k) {
      const std::size_t n = 2 + rng.below(10);
      DistanceMatrix d(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, static_cast<double>(rng.below(20)) / 20.0);
      }
      const auto base = build_guide_tree(d);
      for (double scale : {0.5, 2.0, 4.0, 0.25}) {
        DistanceMatrix s(n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, d(i, j) * scale);
        }
        const auto t = build_guide_tree(s);
        CHECK(t.merge_order() == base.merge_order());
        for (std::size_t i = 0; i < n; ++i) CHECK(t.weights[i] == doctest::Approx(base.weights[i]));
      }
      CHECK(std::accumulate(base.weights.begin(), base.weights.end(), 0.0) == doctest::Approx(double(n)));
      for (double w : base.weights) CHECK(w > 0.0);
    }
  }

  TEST_CASE("progressive alignment examples") {
    const auto id = load_matrix(MatrixName::identity);
    const GapPenalties g = default_gaps(MatrixName::identity);
    auto run = [&](const std::vector<std::string>& seqs) {
      return progressive_msa(seqs, id, g, build_guide_tree(distance_matrix(seqs, id, g)));
    };
    const auto pair = run({"ACDEF", "ADEF"});
    const auto nw = nw_align("ACDEF", "ADEF", id, g);
    CHECK(pair == std::vector<std::string>{nw.row_a, nw.row_b});

    const auto same = run({"KLMN", "KLMN", "KLMN"});
    CHECK(same == std::vector<std::string>{"KLMN", "KLMN", "KLMN"});

    const auto three = run({"ACD", "AD", "ACD"});
    CHECK(three[0] == "ACD");
    CHECK(three[2] == "ACD");
    CHECK(three[1] == "A-D");
  }

  TEST_CASE("progressive alignment structure on random inputs") {
    Rng rng(41);
    for (MatrixName name : {MatrixName::identity, MatrixName::blosum62, MatrixName::gonnet250}) {
      const auto m = load_matrix(name);
      const auto g = default_gaps(name);
      for (int k = 0; k < 10; ++k) {
        std::vector<std::string> seqs;
        const std::size_t n = 2 + rng.below(8);
        for (std::size_t i = 0; i < n; ++i) seqs.push_back(random_letters(rng, kR1, 1 + rng.below(25)));
        const auto rows = progressive_msa(seqs, m, g, build_guide_tree(distance_matrix(seqs, m, g)));
        check_msa(rows, seqs, '-');
        // Never an all-gap column.
        for (std::size_t c = 0; c < rows[0].size(); ++c) {
          bool residue = false;
          for (const auto& r : rows) residue = residue || r[c] != '-';
          CHECK(residue);
        }
      }
    }
  }

  TEST_CASE("consistency alignment") {
    const auto bl = load_matrix(MatrixName::blosum62);
    const auto g = default_gaps(MatrixName::blosum62);
    // Two sequences: the library adds nothing.
    const auto two = consistency_msa({"ACDEFGH", "ACEFGH"}, bl, g);
    const auto nw = nw_align("ACDEFGH", "ACEFGH", bl, g);
    CHECK(two == std::vector<std::string>{nw.row_a, nw.row_b});

    // Gapless agreeing pairwise alignments give the progressive result.
    const std::vector<std::string> agree{"ACDE", "ACDF", "ACNE"};
    const auto tree = build_guide_tree(distance_matrix(agree, bl, g));
    CHECK(consistency_msa(agree, bl, g) == progressive_msa(agree, bl, g, tree));
    CHECK(consistency_msa(agree, bl, g) == agree);

    Rng rng(51);
    std::vector<std::string> seqs;
    for (int i = 0; i < 7; ++i) seqs.push_back(random_letters(rng, kR1, 3 + rng.below(15)));
    const auto primary = build_primary_library(seqs, bl, g);
    const auto ext = extend_library(primary.library, seqs);
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      for (std::size_t j = i + 1; j < seqs.size(); ++j) {
        for (const auto& e : ext.entries(i, j)) {
          CHECK(ext.weight(i, e.p, j, e.q) == ext.weight(j, e.q, i, e.p));
          CHECK(e.weight >= primary.library.weight(i, e.p, j, e.q));
        }
      }
    }
    check_msa(consistency_msa(seqs, bl, g), seqs, '-');
    CHECK(consistency_msa(seqs, bl, g, 3) == consistency_msa(seqs, bl, g, 1));
    CHECK(extend_library(primary.library, seqs, 3).entries(0, 1).size() == ext.entries(0, 1).size());
  }

  TEST_CASE("triplet extension by hand") {
    // Library over three one-residue sequences: w01=10, w12=20, w02=0.
    ConsistencyLibrary lib(3);
    lib.entries(0, 1).push_back({0, 0, 10.0});
    lib.entries(1, 2).push_back({0, 0, 20.0});
    const auto ext = extend_library(lib, {"A", "A", "A"});
    CHECK(ext.weight(0, 0, 2, 0) == 10.0);  // min(10, 20) through sequence 1
    CHECK(ext.weight(0, 0, 1, 0) == 10.0);  // no relay: w02 is 0
    CHECK(ext.weight(2, 0, 1, 0) == 20.0);
  }

  TEST_CASE("single alignment") {
    const auto id = load_matrix(MatrixName::identity);
    const auto g = default_gaps(MatrixName::identity);
    const auto one = single_align(as_rows({"ACDE"}), id, g);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0].letters == "ACDE");
    CHECK(one.gap_letter == 'W');

    const std::vector<std::string> toy{"ACDEF", "ADEF", "ACDF"};
    const auto msa = single_align(as_rows(toy), id, g);
    auto expected = progressive_msa(toy, id, g, build_guide_tree(distance_matrix(toy, id, g)));
    for (auto& r : expected) std::replace(r.begin(), r.end(), '-', 'W');
    for (std::size_t i = 0; i < toy.size(); ++i) {
      CHECK(msa.rows[i].letters == expected[i]);
      CHECK(strip_letter(msa.rows[i].letters, 'W') == toy[i]);
      CHECK(msa.rows[i].id == as_rows(toy)[i].id);
    }
    const auto tb = single_align(as_rows(toy), load_matrix(MatrixName::blosum62), default_gaps(MatrixName::blosum62),
                                 {MsaMethod::consistency, 1});
    for (std::size_t i = 0; i < toy.size(); ++i) CHECK(strip_letter(tb.rows[i].letters, 'W') == toy[i]);

    CHECK_THROWS_AS(single_align({}, id, g), AlignError);
    auto mixed = as_rows({"ACD", "ACD"});
    mixed[1].rep = RepId::R2;
    CHECK_THROWS_AS(single_align(mixed, id, g), AlignError);
    CHECK_THROWS_AS(single_align(as_rows({"ACW"}), id, g), AlignError);
  }

  TEST_CASE("double alignment") {
    const auto id = load_matrix(MatrixName::identity);
    const auto g = default_gaps(MatrixName::identity);
    const auto a = single_align(as_rows({"KLMN"}), id, g);
    const auto b = single_align(as_rows({"KLMN"}, Label::worm), id, g);
    const auto same = double_align(a, b, id, g);
    CHECK(same.gap_letter == 'Y');
    for (const auto& r : same.rows) CHECK(r.letters == "KLMN");

    const std::vector<std::string> va{"ACDEFG", "ACEFG"}, wb{"PQRS", "PQS"};
    const auto sa = single_align(as_rows(va), id, g);
    const auto sb = single_align(as_rows(wb, Label::worm), id, g);
    const auto d = double_align(sa, sb, id, g);
    REQUIRE(d.rows.size() == 4);
    CHECK(d.length() >= std::max(sa.length(), sb.length()));
    const std::vector<std::string> originals{va[0], va[1], wb[0], wb[1]};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(d.rows[i].letters.size() == d.length());
      const std::string w_coded = strip_letter(d.rows[i].letters, 'Y');
      CHECK(w_coded == (i < 2 ? sa.rows[i] : sb.rows[i - 2]).letters);
      CHECK(strip_letter(w_coded, 'W') == originals[i]);
    }
    CHECK(d.rows[0].label == Label::virus);
    CHECK(d.rows[3].label == Label::worm);

    auto other = sb;
    for (auto& r : other.rows) r.rep = RepId::R3;
    CHECK_THROWS_AS(double_align(sa, other, id, g), AlignError);
  }

  TEST_CASE("consensus") {
    MultipleAlignment m;
    m.rows = as_rows({"AC", "AC"});
    auto c = consensus_of(m);
    CHECK(c.majority == "AC");
    CHECK(c.frequency(0, 'A') == 1.0);
    CHECK(c.frequency(1, 'C') == 1.0);

    m.rows = as_rows({"AW", "AC"});
    c = consensus_of(m);
    CHECK(c.frequency(1, 'C') == 0.5);
    CHECK(c.frequency(1, 'W') == 0.0);
    CHECK(c.majority == "AC");

    m.rows = as_rows({"AW", "CW"});
    c = consensus_of(m);
    CHECK(c.majority == "AW");  // tie A/C goes to A; all-gap column shows the gap

    Rng rng(61);
    m.rows = as_rows({random_letters(rng, "ACDW", 30), random_letters(rng, "ACDW", 30), random_letters(rng, "ACDY", 30)});
    c = consensus_of(m);
    for (std::size_t col = 0; col < c.length(); ++col) {
      double total = 0;
      for (const auto& [letter, n] : c.counts[col]) total += c.frequency(col, letter);
      CHECK(total <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("abbreviated consensus") {
    CHECK(required_count(60, 0.15) == 9);
    CHECK(required_count(10, 0.15) == 2);
    CHECK(required_count(20, 0.15) == 3);
    CHECK(required_count(10, 1.0) == 10);
    CHECK(required_count(3, 0.01) == 1);
    CHECK_THROWS_AS(required_count(10, 0.0), AlignError);
    CHECK_THROWS_AS(required_count(10, 1.5), AlignError);

    // n = 10; column 0 is A everywhere, column 1 has A:2 C:2 D:6, column 2 is
    // spread thin (A:1 C:1 ...), column 3 is mostly gap.
    std::vector<std::string> rows{"AAAW", "AAAW", "ACCW", "ACDW", "ADEW", "ADFW", "ADGW", "ADHW", "ADIW", "ADKA"};
    MultipleAlignment m;
    m.rows = as_rows(rows);
    const auto abbr = abbreviate_consensus(consensus_of(m), 0.15);
    REQUIRE(abbr.size() == 3);
    CHECK(abbr[0].column == 0);
    CHECK(abbr[0].letters == "A");
    CHECK(abbr[1].letters == "ACD");
    CHECK(abbr[2].column == 2);
    CHECK(abbr[2].letters == "A");
    CHECK(format_abbreviated(abbr) == "A[ACD]A");
  }
}
