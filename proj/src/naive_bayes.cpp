#include <cmath>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"

namespace malseq {

namespace {

void require_categorical(const Dataset& d, const char* who) {
  if (d.is_numeric) throw MlError(std::string(who) + " needs a categorical dataset");
  if (d.size() == 0) throw MlError(std::string(who) + ": empty training set");
}

}  // namespace

NaiveBayesModel train_naive_bayes(const Dataset& train, double smoothing) {
  require_categorical(train, "naive Bayes");
  const std::array<std::size_t, 2> class_n{train.count(Label::virus), train.count(Label::worm)};
  if (class_n[0] == 0 || class_n[1] == 0) throw MlError("naive Bayes: a class has no training instances");

  NaiveBayesModel model;
  model.smoothing = smoothing;
  const double n = static_cast<double>(train.size());
  for (std::size_t c = 0; c < 2; ++c) model.log_prior[c] = std::log(static_cast<double>(class_n[c]) / n);

  model.log_conditional.resize(train.width());
  for (std::size_t a = 0; a < train.width(); ++a) {
    std::map<char, std::array<std::size_t, 2>> counts;
    for (std::size_t i = 0; i < train.size(); ++i) {
      ++counts[train.categorical[i][a]][static_cast<std::size_t>(train.labels[i])];
    }
    const double values = static_cast<double>(counts.size());
    auto& cond = model.log_conditional[a];
    for (const auto& [v, cnt] : counts) {
      std::array<double, 2> lp{};
      for (std::size_t c = 0; c < 2; ++c) {
        lp[c] = std::log((static_cast<double>(cnt[c]) + smoothing) /
                         (static_cast<double>(class_n[c]) + smoothing * values));
      }
      cond.emplace(v, lp);
    }
  }
  return model;
}

std::array<double, 2> NaiveBayesModel::posterior(std::string_view instance) const {
  if (instance.size() != log_conditional.size()) throw MlError("instance arity does not match the model");
  std::array<double, 2> score = log_prior;
  for (std::size_t a = 0; a < instance.size(); ++a) {
    const auto it = log_conditional[a].find(instance[a]);
    if (it == log_conditional[a].end()) continue;
    score[0] += it->second[0];
    score[1] += it->second[1];
  }
  const double top = std::max(score[0], score[1]);
  const double e0 = std::exp(score[0] - top);
  const double e1 = std::exp(score[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

Label NaiveBayesModel::predict(std::string_view instance) const {
  const auto p = posterior(instance);
  return p[1] > p[0] ? Label::worm : Label::virus;
}

}  // namespace malseq
