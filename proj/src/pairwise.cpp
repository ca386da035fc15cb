#include <algorithm>
#include <limits>

#include "malseq/align.hpp"
#include "malseq/error.hpp"
#include "malseq/parallel.hpp"

namespace malseq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum State : std::uint8_t { kM = 0, kX = 1, kY = 2 };

// Index of the maximum of (m, x, y); ties resolve in that order.
inline std::uint8_t argmax3(double m, double x, double y, double& best) {
  std::uint8_t arg = kM;
  best = m;
  if (x > best) {
    best = x;
    arg = kX;
  }
  if (y > best) {
    best = y;
    arg = kY;
  }
  return arg;
}

}  // namespace

DpPath affine_global(const ScoreGrid& grid, GapPenalties gaps) {
  const std::size_t n = grid.rows;
  const std::size_t m = grid.cols;
  const std::size_t w = m + 1;
  const double open = gaps.open + gaps.extend;
  const double ext = gaps.extend;

  std::vector<double> M((n + 1) * w, kNegInf), X((n + 1) * w, kNegInf), Y((n + 1) * w, kNegInf);
  std::vector<std::uint8_t> from_m((n + 1) * w), from_x((n + 1) * w), from_y((n + 1) * w);
  M[0] = 0.0;

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      const std::size_t c = i * w + j;
      double best;
      if (i > 0 && j > 0) {
        const std::size_t d = c - w - 1;
        from_m[c] = argmax3(M[d], X[d], Y[d], best);
        M[c] = best + grid.at(i - 1, j - 1);
      }
      if (i > 0) {
        const std::size_t u = c - w;
        from_x[c] = argmax3(M[u] - open, X[u] - ext, Y[u] - open, best);
        X[c] = best;
      }
      if (j > 0) {
        const std::size_t l = c - 1;
        from_y[c] = argmax3(M[l] - open, X[l] - open, Y[l] - ext, best);
        Y[c] = best;
      }
    }
  }

  DpPath path;
  const std::size_t end = n * w + m;
  std::uint8_t state = argmax3(M[end], X[end], Y[end], path.score);
  if (n == 0 && m == 0) return path;

  std::size_t i = n, j = m;
  path.ops.reserve(n + m);
  while (i > 0 || j > 0) {
    const std::size_t c = i * w + j;
    switch (state) {
      case kM:
        path.ops.push_back(AlignOp::match);
        state = from_m[c];
        --i;
        --j;
        break;
      case kX:
        path.ops.push_back(AlignOp::gap_in_b);
        state = from_x[c];
        --i;
        break;
      default:
        path.ops.push_back(AlignOp::gap_in_a);
        state = from_y[c];
        --j;
        break;
    }
  }
  std::reverse(path.ops.begin(), path.ops.end());
  return path;
}

PairwiseAlignment nw_align(std::string_view a, std::string_view b, const SubstitutionMatrix& m, GapPenalties g) {
  const auto ia = m.indices(a);
  const auto ib = m.indices(b);
  ScoreGrid grid(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) grid.at(i, j) = m.score_at(ia[i], ib[j]);
  }
  const DpPath path = affine_global(grid, g);

  PairwiseAlignment out;
  out.score = path.score;
  out.row_a.reserve(path.ops.size());
  out.row_b.reserve(path.ops.size());
  std::size_t i = 0, j = 0;
  for (AlignOp op : path.ops) {
    out.row_a.push_back(op == AlignOp::gap_in_a ? kRawGap : a[i++]);
    out.row_b.push_back(op == AlignOp::gap_in_b ? kRawGap : b[j++]);
  }
  return out;
}

double alignment_distance(const PairwiseAlignment& aln) {
  std::size_t paired = 0, same = 0;
  for (std::size_t k = 0; k < aln.row_a.size(); ++k) {
    const char x = aln.row_a[k];
    const char y = aln.row_b[k];
    if (x == kRawGap || y == kRawGap) continue;
    ++paired;
    if (x == y) ++same;
  }
  if (paired == 0) return 1.0;
  return 1.0 - static_cast<double>(same) / static_cast<double>(paired);
}

DistanceMatrix distance_matrix(const std::vector<std::string>& seqs, const SubstitutionMatrix& m, GapPenalties g,
                               std::size_t jobs) {
  const std::size_t n = seqs.size();
  if (n < 2) throw AlignError("distance matrix needs at least two sequences");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> values(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    values[k] = alignment_distance(nw_align(seqs[pairs[k].first], seqs[pairs[k].second], m, g));
  });
  DistanceMatrix d(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) d.set(pairs[k].first, pairs[k].second, values[k]);
  return d;
}

}  // namespace malseq
