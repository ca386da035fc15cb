#include <algorithm>

#include "malseq/align.hpp"
#include "malseq/error.hpp"

namespace malseq {

std::vector<std::size_t> GuideTree::leaves_under(std::size_t node) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    if (nodes[k].is_leaf()) {
      out.push_back(k);
    } else {
      stack.push_back(static_cast<std::size_t>(nodes[k].right));
      stack.push_back(static_cast<std::size_t>(nodes[k].left));
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> GuideTree::merge_order() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = leaf_count; k < nodes.size(); ++k) {
    out.emplace_back(static_cast<std::size_t>(nodes[k].left), static_cast<std::size_t>(nodes[k].right));
  }
  return out;
}

GuideTree build_guide_tree(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 2) throw AlignError("guide tree needs at least two sequences");
  const std::size_t total = 2 * n - 1;

  GuideTree tree;
  tree.leaf_count = n;
  tree.nodes.resize(n);
  std::vector<std::size_t> size(total, 1);
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * total + j] = d(i, j);
  }

  // Active clusters stay sorted by node id, so the first minimum found is
  // the lowest-index pair.
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = dist[active[0] * total + active[1]];
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double v = dist[active[x] * total + active[y]];
        if (v < best) {
          best = v;
          best_a = x;
          best_b = y;
        }
      }
    }
    const std::size_t a = active[best_a];
    const std::size_t b = active[best_b];
    const std::size_t k = tree.nodes.size();

    GuideTree::Node node;
    node.left = static_cast<int>(a);
    node.right = static_cast<int>(b);
    node.height = best / 2.0;
    tree.nodes[a].branch_length = std::max(0.0, node.height - tree.nodes[a].height);
    tree.nodes[b].branch_length = std::max(0.0, node.height - tree.nodes[b].height);
    tree.nodes.push_back(node);
    size[k] = size[a] + size[b];

    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
    for (std::size_t x : active) {
      const double v = (dist[a * total + x] * static_cast<double>(size[a]) +
                        dist[b * total + x] * static_cast<double>(size[b])) /
                       static_cast<double>(size[k]);
      dist[k * total + x] = v;
      dist[x * total + k] = v;
    }
    active.push_back(k);
  }

  // Each branch's length is shared among the leaves below it; a leaf's
  // weight is the sum of its shares along the path to the root.
  std::vector<int> parent(total, -1);
  for (std::size_t k = n; k < total; ++k) {
    parent[static_cast<std::size_t>(tree.nodes[k].left)] = static_cast<int>(k);
    parent[static_cast<std::size_t>(tree.nodes[k].right)] = static_cast<int>(k);
  }
  tree.weights.assign(n, 0.0);
  double sum = 0.0;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    double w = 0.0;
    for (std::size_t k = leaf; parent[k] >= 0; k = static_cast<std::size_t>(parent[k])) {
      w += tree.nodes[k].branch_length / static_cast<double>(size[k]);
    }
    tree.weights[leaf] = w;
    sum += w;
  }
  for (auto& w : tree.weights) w = sum > 0.0 ? w * static_cast<double>(n) / sum : 1.0;
  return tree;
}

}  // namespace malseq
