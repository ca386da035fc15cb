#include <algorithm>
#include <unordered_map>

#include "malseq/error.hpp"
#include "malseq/parallel.hpp"
#include "profile.hpp"

namespace malseq {

std::size_t ConsistencyLibrary::slot(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j || j >= n_) throw AlignError("library has no self or out-of-range pairs");
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double ConsistencyLibrary::weight(std::size_t i, std::size_t p, std::size_t j, std::size_t q) const {
  if (i > j) {
    std::swap(i, j);
    std::swap(p, q);
  }
  const auto& e = entries(i, j);
  const auto it = std::lower_bound(e.begin(), e.end(), std::pair{p, q}, [](const Entry& x, const auto& key) {
    return std::pair<std::size_t, std::size_t>{x.p, x.q} < key;
  });
  if (it == e.end() || it->p != p || it->q != q) return 0.0;
  return it->weight;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

constexpr double kZeroGapCost = 0.0;

}  // namespace

PrimaryLibrary build_primary_library(const std::vector<std::string>& seqs, const SubstitutionMatrix& m,
                                     GapPenalties g, std::size_t jobs) {
  const std::size_t n = seqs.size();
  if (n < 2) throw AlignError("consistency library needs at least two sequences");
  const auto pairs = all_pairs(n);
  PrimaryLibrary out{ConsistencyLibrary(n), DistanceMatrix(n), std::vector<PairwiseAlignment>(pairs.size())};
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    out.alignments[k] = nw_align(seqs[i], seqs[j], m, g);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const PairwiseAlignment& aln = out.alignments[k];
    const double d = alignment_distance(aln);
    out.distances.set(i, j, d);
    const double w = 100.0 * (1.0 - d);
    auto& entries = out.library.entries(i, j);
    std::uint32_t p = 0, q = 0;
    for (std::size_t c = 0; c < aln.row_a.size(); ++c) {
      const bool ra = aln.row_a[c] != kRawGap;
      const bool rb = aln.row_b[c] != kRawGap;
      if (ra && rb) entries.push_back({p, q, w});
      p += ra;
      q += rb;
    }
  }
  return out;
}

ConsistencyLibrary extend_library(const ConsistencyLibrary& primary, const std::vector<std::string>& seqs,
                                  std::size_t jobs) {
  const std::size_t n = primary.size();
  if (seqs.size() != n) throw AlignError("library and sequence counts differ");

  // partner[i * n + k][p]: residue of k paired with residue p of i, or -1.
  std::vector<std::vector<int>> partner(n * n);
  std::vector<double> pair_weight(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      partner[i * n + k].assign(seqs[i].size(), -1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (const auto& e : primary.entries(i, k)) {
        partner[i * n + k][e.p] = static_cast<int>(e.q);
        partner[k * n + i][e.q] = static_cast<int>(e.p);
        pair_weight[i * n + k] = pair_weight[k * n + i] = e.weight;
      }
    }
  }

  ConsistencyLibrary out(n);
  const auto pairs = all_pairs(n);
  parallel_for(pairs.size(), jobs, [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    std::unordered_map<std::uint64_t, double> acc;
    auto key = [](std::uint64_t p, std::uint64_t q) { return (p << 32) | q; };
    for (const auto& e : primary.entries(i, j)) acc[key(e.p, e.q)] += e.weight;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const double relay = std::min(pair_weight[i * n + k], pair_weight[k * n + j]);
      const auto& ik = partner[i * n + k];
      const auto& kj = partner[k * n + j];
      for (std::size_t p = 0; p < ik.size(); ++p) {
        const int r = ik[p];
        if (r < 0) continue;
        const int q = kj[static_cast<std::size_t>(r)];
        if (q < 0) continue;
        acc[key(p, static_cast<std::uint64_t>(q))] += relay;
      }
    }
    auto& entries = out.entries(i, j);
    entries.reserve(acc.size());
    for (const auto& [k, w] : acc) {
      entries.push_back({static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k & 0xffffffffu), w});
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& x, const auto& y) { return x.p != y.p ? x.p < y.p : x.q < y.q; });
  });
  return out;
}

namespace {

std::vector<std::vector<int>> residue_columns(const detail::Profile& p) {
  std::vector<std::vector<int>> out(p.rows.size());
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const std::string& row = p.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != kRawGap) out[r].push_back(static_cast<int>(c));
    }
  }
  return out;
}

ScoreGrid library_grid(const detail::Profile& a, const detail::Profile& b, const ConsistencyLibrary& lib,
                       const std::vector<double>& weights) {
  ScoreGrid grid(a.length(), b.length());
  const auto cols_a = residue_columns(a);
  const auto cols_b = residue_columns(b);
  double wa = 0.0, wb = 0.0;
  for (std::size_t x : a.members) wa += weights[x];
  for (std::size_t y : b.members) wb += weights[y];
  for (std::size_t r = 0; r < a.members.size(); ++r) {
    for (std::size_t s = 0; s < b.members.size(); ++s) {
      const std::size_t i = a.members[r];
      const std::size_t j = b.members[s];
      const double w = weights[i] * weights[j];
      for (const auto& e : lib.entries(i, j)) {
        const std::size_t pi = i < j ? e.p : e.q;
        const std::size_t pj = i < j ? e.q : e.p;
        grid.at(static_cast<std::size_t>(cols_a[r][pi]), static_cast<std::size_t>(cols_b[s][pj])) += w * e.weight;
      }
    }
  }
  const double norm = wa * wb;
  if (norm > 0.0) {
    for (auto& v : grid.values) v /= norm;
  }
  return grid;
}

}  // namespace

std::vector<std::string> library_progressive_msa(const std::vector<std::string>& seqs,
                                                 const ConsistencyLibrary& library, const GuideTree& tree) {
  if (seqs.size() == 1) return seqs;
  detail::check_tree_matches(seqs, tree);
  // Library weights are non-negative rewards; gaps are free and only the
  // traceback tie-break decides between equally supported alignments.
  return detail::align_along_tree(seqs, tree, GapPenalties{kZeroGapCost, kZeroGapCost},
                                  [&](const detail::Profile& a, const detail::Profile& b) {
                                    return library_grid(a, b, library, tree.weights);
                                  });
}

std::vector<std::string> consistency_msa(const std::vector<std::string>& seqs, const SubstitutionMatrix& m,
                                         GapPenalties g, std::size_t jobs) {
  if (seqs.empty()) throw AlignError("nothing to align");
  if (seqs.size() == 1) return seqs;
  PrimaryLibrary primary = build_primary_library(seqs, m, g, jobs);
  if (seqs.size() == 2) {
    // With no third sequence the library is exactly this one alignment.
    return {primary.alignments[0].row_a, primary.alignments[0].row_b};
  }
  const ConsistencyLibrary extended = extend_library(primary.library, seqs, jobs);
  return library_progressive_msa(seqs, extended, build_guide_tree(primary.distances));
}

}  // namespace malseq
