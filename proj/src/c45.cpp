#include <algorithm>
#include <cmath>
#include <map>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"

namespace malseq {

namespace {

using Counts = std::array<std::size_t, 2>;

std::map<char, Counts> value_counts(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute) {
  std::map<char, Counts> out;
  for (std::size_t i : rows) ++out[d.categorical[i][attribute]][static_cast<std::size_t>(d.labels[i])];
  return out;
}

Counts class_counts(const Dataset& d, std::span<const std::size_t> rows) {
  Counts c{};
  for (std::size_t i : rows) ++c[static_cast<std::size_t>(d.labels[i])];
  return c;
}

Label majority(const Counts& c) { return c[1] > c[0] ? Label::worm : Label::virus; }

double entropy_of(const Counts& c) { return entropy(std::span<const std::size_t>(c)); }

struct Builder {
  const Dataset& data;
  std::size_t min_leaf;
  TreeModel& tree;

  std::size_t grow(const std::vector<std::size_t>& rows, std::vector<bool>& used) {
    const Counts here = class_counts(data, rows);
    const std::size_t id = tree.nodes.size();
    tree.nodes.push_back({});
    tree.nodes[id].label = majority(here);
    tree.nodes[id].instances = rows.size();
    if (here[0] == 0 || here[1] == 0 || rows.size() < 2 * min_leaf) return id;

    int best_attr = -1;
    double best_ratio = 0.0;
    for (std::size_t a = 0; a < data.width(); ++a) {
      if (used[a]) continue;
      const auto branches = value_counts(data, rows, a);
      std::size_t big = 0;
      for (const auto& [v, c] : branches) big += (c[0] + c[1] >= min_leaf);
      if (big < 2) continue;
      const double gain = information_gain(data, rows, a);
      if (gain <= 1e-12) continue;
      const double ratio = gain / split_information(data, rows, a);
      if (best_attr < 0 || ratio > best_ratio) {
        best_attr = static_cast<int>(a);
        best_ratio = ratio;
      }
    }
    if (best_attr < 0) return id;

    const auto attr = static_cast<std::size_t>(best_attr);
    std::map<char, std::vector<std::size_t>> parts;
    for (std::size_t i : rows) parts[data.categorical[i][attr]].push_back(i);
    tree.nodes[id].attribute = best_attr;
    used[attr] = true;
    for (const auto& [v, sub] : parts) {
      const std::size_t child = grow(sub, used);
      tree.nodes[id].children.emplace(v, child);
    }
    used[attr] = false;
    return id;
  }
};

}  // namespace

double entropy(std::span<const std::size_t> class_counts) {
  std::size_t total = 0;
  for (std::size_t c : class_counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute) {
  if (rows.empty()) return 0.0;
  const double n = static_cast<double>(rows.size());
  double remainder = 0.0;
  for (const auto& [v, c] : value_counts(d, rows, attribute)) {
    remainder += static_cast<double>(c[0] + c[1]) / n * entropy_of(c);
  }
  return entropy_of(class_counts(d, rows)) - remainder;
}

double split_information(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute) {
  std::vector<std::size_t> sizes;
  for (const auto& [v, c] : value_counts(d, rows, attribute)) sizes.push_back(c[0] + c[1]);
  return entropy(sizes);
}

double gain_ratio(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute) {
  const double si = split_information(d, rows, attribute);
  if (si <= 0.0) return 0.0;
  return information_gain(d, rows, attribute) / si;
}

TreeModel train_c45(const Dataset& train, std::size_t min_leaf) {
  if (train.is_numeric) throw MlError("the decision tree needs a categorical dataset");
  if (train.size() == 0) throw MlError("decision tree: empty training set");
  TreeModel tree;
  tree.width = train.width();
  std::vector<std::size_t> rows(train.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::vector<bool> used(train.width(), false);
  Builder{train, std::max<std::size_t>(1, min_leaf), tree}.grow(rows, used);
  return tree;
}

Label TreeModel::predict(std::string_view instance) const {
  if (instance.size() != width) throw MlError("instance arity does not match the model");
  std::size_t k = 0;
  for (;;) {
    const Node& node = nodes[k];
    if (node.is_leaf()) return node.label;
    const auto it = node.children.find(instance[static_cast<std::size_t>(node.attribute)]);
    if (it == node.children.end()) return node.label;
    k = it->second;
  }
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {  // children always follow their parent
    deepest = std::max(deepest, level[k]);
    for (const auto& [v, child] : nodes[k].children) level[child] = level[k] + 1;
  }
  return deepest;
}

}  // namespace malseq
