#include <algorithm>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"
#include "malseq/parallel.hpp"
#include "malseq/rng.hpp"

namespace malseq {

std::string_view to_string(Classifier c) {
  switch (c) {
    case Classifier::naive_bayes: return "naive_bayes";
    case Classifier::oner: return "oner";
    case Classifier::c45: return "c45";
    case Classifier::mlp: return "mlp";
  }
  return "?";
}

std::string_view to_string(Regime r) { return r == Regime::holdout_66_34 ? "holdout_66_34" : "kfold_10"; }

Classifier parse_classifier(std::string_view text) {
  if (text == "naive_bayes" || text == "nb") return Classifier::naive_bayes;
  if (text == "oner") return Classifier::oner;
  if (text == "c45" || text == "j48") return Classifier::c45;
  if (text == "mlp") return Classifier::mlp;
  throw MlError("unknown classifier '" + std::string(text) + "'");
}

Regime parse_regime(std::string_view text) {
  if (text == "holdout_66_34" || text == "holdout") return Regime::holdout_66_34;
  if (text == "kfold_10" || text == "kfold") return Regime::kfold_10;
  throw MlError("unknown regime '" + std::string(text) + "'");
}

Label predict_one(const TrainedModel& model, const Dataset& d, std::size_t row) {
  return std::visit(
      [&](const auto& m) -> Label {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MlpModel>) {
          if (!d.is_numeric) throw MlError("the perceptron predicts from numeric datasets");
          return m.predict(d.numeric[row]);
        } else {
          if (d.is_numeric) throw MlError("categorical model given a numeric dataset");
          return m.predict(d.categorical[row]);
        }
      },
      model);
}

std::vector<Label> predict(const TrainedModel& model, const Dataset& d) {
  std::vector<Label> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(predict_one(model, d, i));
  return out;
}

Evaluation evaluate(const TrainedModel& model, const Dataset& test) {
  if (test.size() == 0) throw MlError("evaluation on an empty test set");
  Evaluation e;
  for (std::size_t i = 0; i < test.size(); ++i) e.confusion.add(test.labels[i], predict_one(model, test, i));
  e.accuracy = accuracy(e.confusion);
  return e;
}

namespace {

std::array<std::vector<std::size_t>, 2> shuffled_by_class(const Dataset& d, Rng& rng) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < d.size(); ++i) by_class[static_cast<std::size_t>(d.labels[i])].push_back(i);
  for (auto& v : by_class) rng.shuffle(std::span<std::size_t>(v));
  return by_class;
}

void warn_missing(const Fold& f, const Dataset& d, std::size_t fold, std::vector<std::string>& warnings) {
  for (Label l : kLabels) {
    auto has = [&](const std::vector<std::size_t>& idx) {
      return std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return d.labels[i] == l; });
    };
    if (!has(f.train)) {
      warnings.push_back("fold " + std::to_string(fold + 1) + ": no " + std::string(to_string(l)) + " in training");
    }
    if (!has(f.test)) {
      warnings.push_back("fold " + std::to_string(fold + 1) + ": no " + std::string(to_string(l)) + " in test");
    }
  }
}

}  // namespace

Splits split_dataset(const Dataset& d, Regime regime, std::uint64_t seed) {
  const std::size_t n = d.size();
  if (n < 2) throw MlError("need at least two instances to split");
  Rng rng(derive_seed(seed, "split"));
  auto by_class = shuffled_by_class(d, rng);
  Splits out;

  if (regime == Regime::holdout_66_34) {
    const std::size_t n_train = n * 66 / 100;
    // Per-class quotas by largest remainder; a tie favours virus.
    std::array<std::size_t, 2> quota{};
    std::array<std::size_t, 2> rem{};
    for (std::size_t c = 0; c < 2; ++c) {
      quota[c] = n_train * by_class[c].size() / n;
      rem[c] = n_train * by_class[c].size() % n;
    }
    if (quota[0] + quota[1] < n_train) ++quota[rem[1] > rem[0] ? 1 : 0];
    Fold f;
    for (std::size_t c = 0; c < 2; ++c) {
      for (std::size_t k = 0; k < by_class[c].size(); ++k) (k < quota[c] ? f.train : f.test).push_back(by_class[c][k]);
    }
    std::sort(f.train.begin(), f.train.end());
    std::sort(f.test.begin(), f.test.end());
    warn_missing(f, d, 0, out.warnings);
    out.folds.push_back(std::move(f));
    return out;
  }

  constexpr std::size_t kFolds = 10;
  if (n < kFolds) throw MlError("10-fold cross-validation needs at least 10 instances");
  std::vector<std::size_t> fold_of(n);
  std::size_t position = 0;
  for (const auto& cls : by_class) {
    for (std::size_t i : cls) fold_of[i] = position++ % kFolds;
  }
  out.folds.resize(kFolds);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < kFolds; ++f) (fold_of[i] == f ? out.folds[f].test : out.folds[f].train).push_back(i);
  }
  for (std::size_t f = 0; f < kFolds; ++f) warn_missing(out.folds[f], d, f, out.warnings);
  return out;
}

TrainedModel train_classifier(Classifier c, const Dataset& train, std::uint64_t seed) {
  switch (c) {
    case Classifier::naive_bayes: return train_naive_bayes(train);
    case Classifier::oner: return train_oner(train);
    case Classifier::c45: return train_c45(train);
    case Classifier::mlp: {
      MlpParams p;
      p.seed = seed;
      return train_mlp(train, p);
    }
  }
  throw MlError("unknown classifier");
}

RegimeResult run_regime(Classifier c, const Dataset& d, Regime regime, std::uint64_t seed, std::size_t jobs) {
  const Splits splits = split_dataset(d, regime, seed);
  const std::size_t k = splits.folds.size();
  std::vector<Evaluation> evals(k);
  parallel_for(k, jobs, [&](std::size_t f) {
    const Fold& fold = splits.folds[f];
    const Dataset train = d.subset(fold.train);
    const Dataset test = d.subset(fold.test);
    const auto model = train_classifier(c, train, derive_seed(seed, "train-fold-" + std::to_string(f)));
    evals[f] = evaluate(model, test);
  });
  RegimeResult out;
  out.warnings = splits.warnings;
  double sum = 0.0;
  for (const auto& e : evals) {
    out.confusion += e.confusion;
    out.fold_accuracies.push_back(e.accuracy);
    sum += e.accuracy;
  }
  out.accuracy = sum / static_cast<double>(k);
  return out;
}

}  // namespace malseq
