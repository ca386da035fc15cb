#include <map>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"

namespace malseq {

namespace {

Label majority(const std::array<std::size_t, 2>& counts) {
  return counts[1] > counts[0] ? Label::worm : Label::virus;
}

}  // namespace

OneRModel train_oner(const Dataset& train) {
  if (train.is_numeric) throw MlError("OneR needs a categorical dataset");
  if (train.size() == 0 || train.width() == 0) throw MlError("OneR: empty training set");

  OneRModel best;
  best.default_class = majority({train.count(Label::virus), train.count(Label::worm)});
  bool have_best = false;
  for (std::size_t a = 0; a < train.width(); ++a) {
    std::map<char, std::array<std::size_t, 2>> counts;
    for (std::size_t i = 0; i < train.size(); ++i) {
      ++counts[train.categorical[i][a]][static_cast<std::size_t>(train.labels[i])];
    }
    OneRModel candidate;
    candidate.width = train.width();
    candidate.attribute = a;
    candidate.default_class = best.default_class;
    for (const auto& [v, cnt] : counts) {
      const Label l = majority(cnt);
      candidate.rule.emplace(v, l);
      candidate.training_errors += cnt[l == Label::virus ? 1 : 0];
    }
    // Strictly fewer errors, so ties keep the lowest position.
    if (!have_best || candidate.training_errors < best.training_errors) {
      best = std::move(candidate);
      have_best = true;
    }
  }
  return best;
}

Label OneRModel::predict(std::string_view instance) const {
  if (instance.size() != width) throw MlError("instance arity does not match the model");
  const auto it = rule.find(instance[attribute]);
  return it == rule.end() ? default_class : it->second;
}

}  // namespace malseq
