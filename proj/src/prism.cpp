#include <algorithm>
#include <map>

#include "malseq/error.hpp"
#include "malseq/rules.hpp"

namespace malseq {

bool Rule::covers(std::string_view instance) const {
  return std::all_of(conditions.begin(), conditions.end(), [&](const Condition& c) {
    return c.attribute < instance.size() && instance[c.attribute] == c.letter;
  });
}

std::vector<const Rule*> RuleSet::for_class(Label label) const {
  std::vector<const Rule*> out;
  for (const auto& r : rules) {
    if (r.target == label) out.push_back(&r);
  }
  return out;
}

namespace {

struct Candidate {
  std::size_t attribute = 0;
  char letter = 0;
  std::size_t p = 0;  // covered instances of the target class
  std::size_t t = 0;  // covered instances

  // Higher precision, then larger p; equal candidates keep the earlier one,
  // which is the lower position and then the lower letter.
  bool beats(const Candidate& o) const {
    const auto lhs = p * o.t;
    const auto rhs = o.p * t;
    if (lhs != rhs) return lhs > rhs;
    return p > o.p;
  }
};

Rule grow_rule(const Dataset& d, Label target, const std::vector<std::size_t>& pool) {
  Rule rule;
  rule.target = target;
  std::vector<std::size_t> covered = pool;
  std::vector<bool> used(d.width(), false);
  auto impure = [&] {
    return std::any_of(covered.begin(), covered.end(), [&](std::size_t i) { return d.labels[i] != target; });
  };
  while (impure()) {
    bool found = false;
    Candidate best;
    for (std::size_t a = 0; a < d.width(); ++a) {
      if (used[a]) continue;
      std::map<char, std::array<std::size_t, 2>> counts;  // {p, t}
      for (std::size_t i : covered) {
        auto& c = counts[d.categorical[i][a]];
        c[0] += d.labels[i] == target;
        ++c[1];
      }
      for (const auto& [letter, c] : counts) {
        // A condition must keep some target instance and narrow the cover.
        if (c[0] == 0 || c[1] == covered.size()) continue;
        const Candidate cand{a, letter, c[0], c[1]};
        if (!found || cand.beats(best)) {
          best = cand;
          found = true;
        }
      }
    }
    if (!found) break;
    rule.conditions.push_back({best.attribute, best.letter});
    used[best.attribute] = true;
    std::erase_if(covered, [&](std::size_t i) { return d.categorical[i][best.attribute] != best.letter; });
  }
  return rule;
}

}  // namespace

RuleSet prism_induce(const Dataset& train) {
  if (train.is_numeric) throw RulesError("PRISM needs a categorical dataset");
  for (Label l : kLabels) {
    if (train.count(l) == 0) throw RulesError("PRISM: class '" + std::string(to_string(l)) + "' has no instances");
  }
  RuleSet out;
  for (Label target : kLabels) {
    std::vector<std::size_t> pool(train.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    auto has_target = [&] {
      return std::any_of(pool.begin(), pool.end(), [&](std::size_t i) { return train.labels[i] == target; });
    };
    while (has_target()) {
      Rule rule = grow_rule(train, target, pool);
      std::erase_if(pool, [&](std::size_t i) {
        return train.labels[i] == target && rule.covers(train.categorical[i]);
      });
      out.rules.push_back(std::move(rule));
    }
  }
  return out;
}

}  // namespace malseq
