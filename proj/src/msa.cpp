#include "malseq/error.hpp"
#include "profile.hpp"

namespace malseq {

namespace detail {

Profile merge_profiles(const Profile& a, const Profile& b, const DpPath& path) {
  Profile out;
  out.members = a.members;
  out.members.insert(out.members.end(), b.members.begin(), b.members.end());
  out.rows.assign(out.members.size(), std::string{});
  for (auto& r : out.rows) r.reserve(path.ops.size());

  std::size_t i = 0, j = 0;
  const std::size_t na = a.rows.size();
  for (AlignOp op : path.ops) {
    const bool take_a = op != AlignOp::gap_in_a;
    const bool take_b = op != AlignOp::gap_in_b;
    for (std::size_t r = 0; r < na; ++r) out.rows[r].push_back(take_a ? a.rows[r][i] : kRawGap);
    for (std::size_t r = 0; r < b.rows.size(); ++r) out.rows[na + r].push_back(take_b ? b.rows[r][j] : kRawGap);
    if (take_a) ++i;
    if (take_b) ++j;
  }
  return out;
}

void check_tree_matches(const std::vector<std::string>& seqs, const GuideTree& tree) {
  if (tree.leaf_count != seqs.size() || tree.nodes.size() != 2 * seqs.size() - 1) {
    throw AlignError("guide tree has " + std::to_string(tree.leaf_count) + " leaves for " +
                     std::to_string(seqs.size()) + " sequences");
  }
}

}  // namespace detail

namespace {

// Per-column weighted letter totals of a profile.
struct ColumnStats {
  std::size_t alphabet = 0;
  std::vector<double> dense;                                  // length x alphabet
  std::vector<std::vector<std::pair<std::uint8_t, double>>> sparse;  // non-zero entries per column
  double total_weight = 0.0;
};

ColumnStats column_stats(const detail::Profile& p, const SubstitutionMatrix& m, const std::vector<double>& weights) {
  ColumnStats s;
  s.alphabet = m.size();
  const std::size_t len = p.length();
  s.dense.assign(len * s.alphabet, 0.0);
  s.sparse.resize(len);
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const double w = weights[p.members[r]];
    s.total_weight += w;
    const std::string& row = p.rows[r];
    for (std::size_t c = 0; c < len; ++c) {
      if (row[c] == kRawGap) continue;
      s.dense[c * s.alphabet + static_cast<std::size_t>(m.index_of(row[c]))] += w;
    }
  }
  for (std::size_t c = 0; c < len; ++c) {
    for (std::size_t x = 0; x < s.alphabet; ++x) {
      const double v = s.dense[c * s.alphabet + x];
      if (v != 0.0) s.sparse[c].emplace_back(static_cast<std::uint8_t>(x), v);
    }
  }
  return s;
}

// Weighted average of residue-pair scores over all row pairs; pairs with a
// gap contribute zero.
ScoreGrid profile_grid(const detail::Profile& a, const detail::Profile& b, const SubstitutionMatrix& m,
                       const std::vector<double>& weights) {
  const ColumnStats sa = column_stats(a, m, weights);
  const ColumnStats sb = column_stats(b, m, weights);
  const std::size_t k = m.size();
  const std::size_t la = a.length();
  const std::size_t lb = b.length();

  // Fold A's letter mix through the matrix once per column.
  std::vector<double> folded(la * k, 0.0);
  for (std::size_t c = 0; c < la; ++c) {
    for (const auto& [x, wx] : sa.sparse[c]) {
      for (std::size_t y = 0; y < k; ++y) folded[c * k + y] += wx * m.score_at(x, y);
    }
  }
  const double norm = sa.total_weight * sb.total_weight;
  ScoreGrid grid(la, lb);
  for (std::size_t i = 0; i < la; ++i) {
    const double* row = &folded[i * k];
    for (std::size_t j = 0; j < lb; ++j) {
      double s = 0.0;
      for (const auto& [y, wy] : sb.sparse[j]) s += row[y] * wy;
      grid.at(i, j) = norm > 0.0 ? s / norm : 0.0;
    }
  }
  return grid;
}

}  // namespace

std::vector<std::string> progressive_msa(const std::vector<std::string>& seqs, const SubstitutionMatrix& m,
                                         GapPenalties g, const GuideTree& tree) {
  if (seqs.size() == 1) return seqs;
  detail::check_tree_matches(seqs, tree);
  for (const auto& s : seqs) (void)m.indices(s);
  return detail::align_along_tree(seqs, tree, g, [&](const detail::Profile& a, const detail::Profile& b) {
    return profile_grid(a, b, m, tree.weights);
  });
}

}  // namespace malseq
