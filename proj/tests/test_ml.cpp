#include <doctest.h>

#include <cmath>
#include <set>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"
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

Dataset numeric(const std::vector<std::string>& rows, const std::vector<int>& labels) {
  std::vector<ResidueSequence> seqs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    seqs.push_back({"s" + std::to_string(i), labels[i] ? Label::worm : Label::virus, RepId::R1, rows[i]});
  }
  return build_dataset(seqs, true);
}

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t width, std::string_view alphabet) {
  std::vector<std::string> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::string r;
    for (std::size_t k = 0; k < width; ++k) r += alphabet[rng.below(alphabet.size())];
    rows.push_back(r);
    labels.push_back(static_cast<int>(i % 2));
  }
  return categorical(rows, labels);
}

double rel_error(double a, double b) { return std::fabs(a - b) / std::max(1e-7, std::fabs(a) + std::fabs(b)); }

}  // namespace

TEST_SUITE("ml") {
  TEST_CASE("dataset construction") {
    const auto d = categorical({"ACD", "AWY"}, {0, 1});
    CHECK(d.width() == 3);
    CHECK(d.size() == 2);
    CHECK(d.attributes == std::vector<std::string>{"pos1", "pos2", "pos3"});
    CHECK(d.labels[1] == Label::worm);
    CHECK(d.count(Label::virus) == 1);

    const auto n = numeric({"AW"}, {0});
    CHECK(n.is_numeric);
    CHECK(n.numeric[0] == std::vector<double>{0.1, 0.95});

    CHECK_THROWS_AS(categorical({"ACD", "AC"}, {0, 1}), MlError);
    CHECK(dataset_to_csv(d) == "pos1,pos2,pos3,label\nA,C,D,0\nA,W,Y,1\n");

    std::vector<ResidueSequence> ragged{{"a", Label::virus, RepId::R1, "ACD"}, {"b", Label::worm, RepId::R1, "A"}};
    const auto padded = pad_rows(ragged);
    CHECK(padded[1].letters == "AYY");
    CHECK(padded[0].letters == "ACD");

    const std::vector<std::size_t> pick{1};
    const auto sub = d.subset(pick);
    CHECK(sub.size() == 1);
    CHECK(sub.categorical[0] == "AWY");
  }

  TEST_CASE("accuracy formula") {
    CHECK(accuracy(ConfusionMatrix{30, 30, 0, 0}) == 1.0);
    CHECK(accuracy(ConfusionMatrix{0, 0, 5, 5}) == 0.0);
    CHECK(accuracy(ConfusionMatrix{3, 2, 1, 4}) == 0.5);
    CHECK_THROWS_AS(accuracy(ConfusionMatrix{}), MlError);
    ConfusionMatrix cm;
    cm.add(Label::worm, Label::worm);
    cm.add(Label::virus, Label::worm);
    cm.add(Label::worm, Label::virus);
    cm.add(Label::virus, Label::virus);
    CHECK(cm == ConfusionMatrix{1, 1, 1, 1});
  }

  TEST_CASE("naive bayes") {
    // Separable single attribute.
    const auto sep = categorical({"A", "A", "C", "C"}, {1, 1, 0, 0});
    const auto m = train_naive_bayes(sep);
    CHECK(m.predict("A") == Label::worm);
    CHECK(m.predict("C") == Label::virus);

    // Uninformative attribute with equal priors: a tie, which goes to virus.
    const auto flat = categorical({"A", "C", "A", "C"}, {0, 0, 1, 1});
    const auto f = train_naive_bayes(flat);
    CHECK(f.posterior("A")[0] == doctest::Approx(0.5));
    CHECK(f.predict("A") == Label::virus);

    // By hand: virus {A}, worm {A, B}. P(A|v) = 2/3, P(A|w) = 1/2, priors 1/3, 2/3.
    const auto toy = categorical({"A", "A", "D"}, {0, 1, 1});
    const auto t = train_naive_bayes(toy);
    CHECK(t.posterior("A")[0] == doctest::Approx(0.4));
    CHECK(t.posterior("D")[0] == doctest::Approx(0.25));
    // Unseen values are skipped, leaving the priors.
    CHECK(t.posterior("K")[0] == doctest::Approx(1.0 / 3.0));

    Rng rng(3);
    const auto r = random_dataset(rng, 30, 6, "ACDE");
    const auto rm = train_naive_bayes(r);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const auto p = rm.posterior(r.categorical[i]);
      CHECK(p[0] + p[1] == doctest::Approx(1.0));
    }
    // Conditionals per class sum to one over the seen values.
    for (const auto& cond : rm.log_conditional) {
      double s0 = 0, s1 = 0;
      for (const auto& [v, lp] : cond) {
        s0 += std::exp(lp[0]);
        s1 += std::exp(lp[1]);
      }
      CHECK(s0 == doctest::Approx(1.0));
      CHECK(s1 == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(train_naive_bayes(categorical({"A", "C"}, {0, 0})), MlError);
  }

  TEST_CASE("oner") {
    const auto d = categorical({"AA", "CA", "AC", "CC"}, {0, 0, 1, 1});
    const auto m = train_oner(d);
    CHECK(m.attribute == 1);
    CHECK(m.training_errors == 0);
    CHECK(m.predict("CA") == Label::virus);
    CHECK(m.predict("AC") == Label::worm);

    // pos1 makes 2 errors, pos2 makes 1.
    const auto six = categorical({"AA", "AA", "AC", "CC", "CC", "CA"}, {0, 0, 0, 1, 1, 1});
    const auto s = train_oner(six);
    CHECK(s.attribute == 0);
    CHECK(s.training_errors == 0);
    const auto six2 = categorical({"AA", "AA", "CD", "AD", "CD", "CD"}, {0, 0, 0, 1, 1, 1});
    const auto s2 = train_oner(six2);
    CHECK(s2.attribute == 1);
    CHECK(s2.training_errors == 1);

    // Unseen value falls back to the overall majority.
    const auto maj = categorical({"A", "A", "C"}, {1, 1, 0});
    CHECK(train_oner(maj).predict("K") == Label::worm);

    // Uninformative: error = minority count.
    const auto u = categorical({"A", "A", "A", "A", "A"}, {0, 0, 0, 1, 1});
    CHECK(train_oner(u).training_errors == 2);

    // Exhaustive check that the chosen attribute minimises training errors.
    Rng rng(4);
    for (int k = 0; k < 30; ++k) {
      const auto r = random_dataset(rng, 20, 5, "ACD");
      const auto o = train_oner(r);
      std::size_t best = r.size() + 1, arg = 0;
      for (std::size_t a = 0; a < r.width(); ++a) {
        std::map<char, std::array<std::size_t, 2>> counts;
        for (std::size_t i = 0; i < r.size(); ++i) ++counts[r.categorical[i][a]][static_cast<int>(r.labels[i])];
        std::size_t errors = 0;
        for (const auto& [v, c] : counts) errors += std::min(c[0], c[1]);
        if (errors < best) {
          best = errors;
          arg = a;
        }
      }
      CHECK(o.training_errors == best);
      CHECK(o.attribute == arg);
    }
  }

  TEST_CASE("information measures") {
    const std::vector<std::size_t> half{2, 2};
    CHECK(entropy(half) == doctest::Approx(1.0));
    const std::vector<std::size_t> pure{4, 0};
    CHECK(entropy(pure) == 0.0);
    const std::vector<std::size_t> skew{1, 3};
    CHECK(entropy(skew) == doctest::Approx(oracle::entropy2(1, 3)));

    const auto d = categorical({"AA", "AC", "CA", "CC"}, {0, 0, 1, 1});
    const std::vector<std::size_t> all{0, 1, 2, 3};
    CHECK(information_gain(d, all, 0) == doctest::Approx(1.0));
    CHECK(information_gain(d, all, 1) == doctest::Approx(0.0));
    CHECK(split_information(d, all, 0) == doctest::Approx(1.0));
    CHECK(gain_ratio(d, all, 0) == doctest::Approx(1.0));
  }

  TEST_CASE("c45 tree") {
    const auto d = categorical({"AA", "AC", "CA", "CC"}, {0, 0, 1, 1});
    const auto t = train_c45(d, 1);
    CHECK(t.depth() == 1);
    CHECK(t.nodes[0].attribute == 0);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(t.predict(d.categorical[i]) == d.labels[i]);

    const auto same = categorical({"AC", "AC", "AC"}, {1, 0, 1});
    const auto leaf = train_c45(same);
    CHECK(leaf.nodes.size() == 1);
    CHECK(leaf.nodes[0].label == Label::worm);

    // Root choice equals the argmax of gain ratio among admissible attributes.
    Rng rng(12);
    for (int k = 0; k < 30; ++k) {
      const auto r = random_dataset(rng, 24, 5, "ACD");
      const auto tree = train_c45(r, 2);
      std::vector<std::size_t> rows(r.size());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      int arg = -1;
      double best = 0;
      for (std::size_t a = 0; a < r.width(); ++a) {
        std::map<char, std::size_t> sizes;
        for (auto i : rows) ++sizes[r.categorical[i][a]];
        std::size_t big = 0;
        for (const auto& [v, n] : sizes) big += n >= 2;
        const double g = information_gain(r, rows, a);
        if (big < 2 || g <= 1e-12) continue;
        const double ratio = g / split_information(r, rows, a);
        if (arg < 0 || ratio > best) {
          arg = static_cast<int>(a);
          best = ratio;
        }
      }
      CHECK(tree.nodes[0].attribute == arg);
    }

    // A pure binary split beats every other binary attribute.
    for (int k = 0; k < 30; ++k) {
      std::vector<std::string> rows;
      std::vector<int> labels;
      for (int i = 0; i < 16; ++i) {
        const int label = i % 2;
        std::string row;
        row += label ? 'A' : 'C';
        for (int a = 0; a < 4; ++a) row += rng.chance(0.5) ? 'A' : 'C';
        rows.push_back(row);
        labels.push_back(label);
      }
      const auto b = categorical(rows, labels);
      std::vector<std::size_t> all_rows(b.size());
      for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
      for (std::size_t a = 1; a < b.width(); ++a) CHECK(gain_ratio(b, all_rows, 0) >= gain_ratio(b, all_rows, a));
      CHECK(train_c45(b).nodes[0].attribute == 0);
    }

    // Unseen values stop at the node majority.
    CHECK(t.predict("KA") == t.nodes[0].label);
  }

  TEST_CASE("mlp gradient matches finite differences") {
    Rng rng(77);
    for (int k = 0; k < 5; ++k) {
      MlpModel m = init_mlp(4, 3, 100 + k);
      for (auto& w : m.hidden_weights) w = rng.uniform(-1, 1);
      for (auto& w : m.output_weights) w = rng.uniform(-1, 1);
      std::vector<double> x(4);
      for (auto& v : x) v = rng.uniform(0.1, 0.95);
      const double target = k % 2;
      const auto g = mlp_gradient(m, x, target);
      const double eps = 1e-5;
      for (std::size_t i = 0; i < m.hidden_weights.size(); ++i) {
        MlpModel p = m, q = m;
        p.hidden_weights[i] += eps;
        q.hidden_weights[i] -= eps;
        const double fd = (mlp_loss(p, x, target) - mlp_loss(q, x, target)) / (2 * eps);
        CHECK(rel_error(fd, g.hidden_weights[i]) < 1e-4);
      }
      for (std::size_t i = 0; i < m.output_weights.size(); ++i) {
        MlpModel p = m, q = m;
        p.output_weights[i] += eps;
        q.output_weights[i] -= eps;
        const double fd = (mlp_loss(p, x, target) - mlp_loss(q, x, target)) / (2 * eps);
        CHECK(rel_error(fd, g.output_weights[i]) < 1e-4);
      }
    }
  }

  TEST_CASE("mlp training") {
    std::vector<std::string> rows;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
      rows.push_back(i % 2 ? "W" : "A");
      labels.push_back(i % 2);
    }
    const auto d = numeric(rows, labels);
    const auto m = train_mlp(d);
    CHECK(m.hidden == 72);
    CHECK(m.inputs == 1);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(m.predict(d.numeric[i]) == d.labels[i]);
    const auto again = train_mlp(d);
    CHECK(again.hidden_weights == m.hidden_weights);
    CHECK(again.output_weights == m.output_weights);
    MlpParams other;
    other.seed = 2;
    CHECK(train_mlp(d, other).hidden_weights != m.hidden_weights);

    const auto init = init_mlp(5, 72, 1);
    for (double w : init.hidden_weights) CHECK(std::fabs(w) <= 0.05);
    CHECK_THROWS_AS(train_mlp(categorical({"A", "C"}, {0, 1})), MlError);
  }

  TEST_CASE("splits") {
    Rng rng(5);
    std::vector<std::string> rows(120, "A");
    std::vector<int> labels;
    for (int i = 0; i < 120; ++i) labels.push_back(i < 60 ? 0 : 1);
    const auto d = categorical(rows, labels);

    const auto h = split_dataset(d, Regime::holdout_66_34, 1);
    REQUIRE(h.folds.size() == 1);
    CHECK(h.folds[0].train.size() == 79);
    CHECK(h.folds[0].test.size() == 41);
    const auto hd = d.subset(h.folds[0].train);
    CHECK(std::max(hd.count(Label::virus), hd.count(Label::worm)) - std::min(hd.count(Label::virus), hd.count(Label::worm)) <= 1);

    const auto k = split_dataset(d, Regime::kfold_10, 1);
    REQUIRE(k.folds.size() == 10);
    std::set<std::size_t> seen;
    for (const auto& f : k.folds) {
      CHECK(f.test.size() == 12);
      CHECK(f.train.size() == 108);
      CHECK(d.subset(f.test).count(Label::virus) == 6);
      for (auto i : f.test) CHECK(seen.insert(i).second);
    }
    CHECK(seen.size() == 120);
    CHECK(split_dataset(d, Regime::kfold_10, 1).folds[3].test == k.folds[3].test);
    CHECK(split_dataset(d, Regime::kfold_10, 2).folds[3].test != k.folds[3].test);

    // Uneven sizes: folds differ by at most one, class ratios within one.
    for (int n : {23, 37, 51}) {
      std::vector<std::string> r(n, "A");
      std::vector<int> l;
      for (int i = 0; i < n; ++i) l.push_back(i % 3 == 0);
      const auto u = categorical(r, l);
      const auto s = split_dataset(u, Regime::kfold_10, 9);
      std::size_t lo = n, hi = 0, wlo = n, whi = 0;
      for (const auto& f : s.folds) {
        lo = std::min(lo, f.test.size());
        hi = std::max(hi, f.test.size());
        const auto w = u.subset(f.test).count(Label::worm);
        wlo = std::min(wlo, w);
        whi = std::max(whi, w);
      }
      CHECK(hi - lo <= 1);
      CHECK(whi - wlo <= 1);
    }

    // A class too small to appear in every fold gives warnings, not errors.
    std::vector<std::string> r(12, "A");
    std::vector<int> l(12, 0);
    l[0] = 1;
    const auto s = split_dataset(categorical(r, l), Regime::kfold_10, 1);
    CHECK_FALSE(s.warnings.empty());
    CHECK_THROWS_AS(split_dataset(categorical({"A", "A", "A"}, {0, 1, 0}), Regime::kfold_10, 1), MlError);
  }

  TEST_CASE("regime harness") {
    std::vector<std::string> rows;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
      rows.push_back(i % 2 ? "AC" : "CA");
      labels.push_back(i % 2);
    }
    const auto d = categorical(rows, labels);
    for (Classifier c : {Classifier::naive_bayes, Classifier::oner, Classifier::c45}) {
      for (Regime g : {Regime::holdout_66_34, Regime::kfold_10}) {
        const auto r = run_regime(c, d, g, 3);
        CHECK(r.accuracy == 1.0);
        CHECK(r.confusion.total() == (g == Regime::kfold_10 ? 40u : 14u));
        const auto again = run_regime(c, d, g, 3, 4);
        CHECK(again.fold_accuracies == r.fold_accuracies);
      }
    }
    const auto nd = numeric(rows, labels);
    const auto r = run_regime(Classifier::mlp, nd, Regime::holdout_66_34, 3);
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
    CHECK(parse_classifier("j48") == Classifier::c45);
    CHECK(parse_regime("kfold") == Regime::kfold_10);
    CHECK_THROWS_AS(parse_classifier("svm"), MlError);
    CHECK(to_string(Regime::holdout_66_34) == "holdout_66_34");
  }
}
