#pragma once

// Internal: profiles shared by the progressive aligners.

#include <string>
#include <vector>

#include "malseq/align.hpp"

namespace malseq::detail {

struct Profile {
  std::vector<std::size_t> members;  // input sequence indices, row order
  std::vector<std::string> rows;     // '-' marks gaps

  std::size_t length() const { return rows.empty() ? 0 : rows.front().size(); }
};

/// Applies a DP path to two profiles. Columns are never removed, so a gap
/// placed in a profile stays in every later merge.
Profile merge_profiles(const Profile& a, const Profile& b, const DpPath& path);

/// Walks the tree in merge order, scoring each pair of profiles with
/// `score_grid(a, b)` and aligning with `gaps`. Returns rows in input order.
template <typename GridFn>
std::vector<std::string> align_along_tree(const std::vector<std::string>& seqs, const GuideTree& tree,
                                          GapPenalties gaps, GridFn&& score_grid) {
  std::vector<Profile> profiles(tree.nodes.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) profiles[i] = Profile{{i}, {seqs[i]}};
  std::size_t k = tree.leaf_count;
  for (const auto& [left, right] : tree.merge_order()) {
    const ScoreGrid grid = score_grid(profiles[left], profiles[right]);
    profiles[k] = merge_profiles(profiles[left], profiles[right], affine_global(grid, gaps));
    profiles[left] = {};
    profiles[right] = {};
    ++k;
  }
  const Profile& root = profiles[tree.root()];
  std::vector<std::string> out(seqs.size());
  for (std::size_t r = 0; r < root.members.size(); ++r) out[root.members[r]] = root.rows[r];
  return out;
}

void check_tree_matches(const std::vector<std::string>& seqs, const GuideTree& tree);

}  // namespace malseq::detail
