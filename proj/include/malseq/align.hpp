#pragma once

// Substitution scoring, affine-gap global alignment, guide trees and the
// two-phase (per-class, then combined) multiple alignment protocol.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "malseq/corpus.hpp"

namespace malseq {

enum class MatrixName : std::uint8_t { identity, blosum62, gonnet250 };

std::string_view to_string(MatrixName name);
MatrixName parse_matrix_name(std::string_view text);

/// Symmetric residue-pair scores over a fixed alphabet.
class SubstitutionMatrix {
 public:
  SubstitutionMatrix(std::string name, std::string alphabet, std::vector<double> scores);

  const std::string& name() const { return name_; }
  const std::string& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }

  int index_of(char c) const { return index_[static_cast<unsigned char>(c)]; }
  bool contains(char c) const { return index_of(c) >= 0; }

  double score(char a, char b) const;
  double score_at(std::size_t i, std::size_t j) const { return scores_[i * alphabet_.size() + j]; }

  /// Letter indices; throws AlignError for letters outside the alphabet.
  std::vector<std::uint8_t> indices(std::string_view letters) const;

 private:
  std::string name_;
  std::string alphabet_;
  std::vector<double> scores_;
  std::array<int, 256> index_{};
};

/// Square text format: optional '#' comments, a header row of letters, then
/// one row per letter starting with that letter.
SubstitutionMatrix parse_matrix(std::string name, std::string_view text);

/// 1 on the diagonal, 0 elsewhere.
SubstitutionMatrix identity_matrix(std::string_view alphabet);

/// Identity over the 16 residues plus 'W' and 'Y'; the biological matrices
/// come from the embedded data files.
SubstitutionMatrix load_matrix(MatrixName name);

/// A gap run of length g costs open + g * extend.
struct GapPenalties {
  double open = 10.0;
  double extend = 0.5;

  double run_cost(std::size_t length) const { return length == 0 ? 0.0 : open + static_cast<double>(length) * extend; }
};

GapPenalties default_gaps(MatrixName name);

// -- dynamic programming kernel --

enum class AlignOp : char {
  match = 'M',     // consume one column of each side
  gap_in_b = 'U',  // consume from a only
  gap_in_a = 'L',  // consume from b only
};

/// Dense column-pair scores; score(i, j) for i < rows, j < cols.
struct ScoreGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  ScoreGrid(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct DpPath {
  std::vector<AlignOp> ops;
  double score = 0.0;
};

/// Three-state affine global alignment. On equal scores the traceback
/// prefers the diagonal, then a gap in b, then a gap in a.
DpPath affine_global(const ScoreGrid& grid, GapPenalties gaps);

struct PairwiseAlignment {
  std::string row_a;
  std::string row_b;
  double score = 0.0;
};

PairwiseAlignment nw_align(std::string_view a, std::string_view b, const SubstitutionMatrix& m, GapPenalties g);

/// 1 - identities / residue-residue columns. 1 when there are no such columns.
double alignment_distance(const PairwiseAlignment& aln);

class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

DistanceMatrix distance_matrix(const std::vector<std::string>& seqs, const SubstitutionMatrix& m, GapPenalties g,
                               std::size_t jobs = 1);

/// Rooted binary UPGMA tree. Nodes [0, n) are the leaves; internal nodes
/// follow in merge order, so the root is the last node.
struct GuideTree {
  struct Node {
    int left = -1;
    int right = -1;
    double height = 0.0;
    double branch_length = 0.0;  // to the parent; 0 for the root

    bool is_leaf() const { return left < 0; }
  };

  std::size_t leaf_count = 0;
  std::vector<Node> nodes;
  std::vector<double> weights;  // per leaf, sums to leaf_count

  std::size_t root() const { return nodes.size() - 1; }
  std::vector<std::size_t> leaves_under(std::size_t node) const;
  /// (left, right) child pairs of the internal nodes in merge order.
  std::vector<std::pair<std::size_t, std::size_t>> merge_order() const;
};

GuideTree build_guide_tree(const DistanceMatrix& d);

/// Profile-profile progressive alignment along the tree. Rows use '-' for
/// gaps and come back in input order.
std::vector<std::string> progressive_msa(const std::vector<std::string>& seqs, const SubstitutionMatrix& m,
                                         GapPenalties g, const GuideTree& tree);

// -- consistency-based alignment --

/// Residue-pair weights between every pair of sequences. Entries for (i, j)
/// are stored once for i < j; weight() answers either orientation.
class ConsistencyLibrary {
 public:
  struct Entry {
    std::uint32_t p;  // position in the lower-indexed sequence
    std::uint32_t q;  // position in the higher-indexed sequence
    double weight;
  };

  explicit ConsistencyLibrary(std::size_t n) : n_(n), pairs_(n * (n - 1) / 2) {}

  std::size_t size() const { return n_; }
  const std::vector<Entry>& entries(std::size_t i, std::size_t j) const { return pairs_[slot(i, j)]; }
  std::vector<Entry>& entries(std::size_t i, std::size_t j) { return pairs_[slot(i, j)]; }

  /// Weight of residue p of sequence i paired with residue q of sequence j.
  double weight(std::size_t i, std::size_t p, std::size_t j, std::size_t q) const;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const;

  std::size_t n_;
  std::vector<std::vector<Entry>> pairs_;
};

struct PrimaryLibrary {
  ConsistencyLibrary library;
  DistanceMatrix distances;
  std::vector<PairwiseAlignment> alignments;  // (0,1), (0,2), ..., (1,2), ...
};

/// Every pairwise global alignment contributes its aligned residue pairs,
/// weighted by the pair's percent identity.
PrimaryLibrary build_primary_library(const std::vector<std::string>& seqs, const SubstitutionMatrix& m,
                                     GapPenalties g, std::size_t jobs = 1);

/// One triplet round: each pair weight gains min(w(i:p,k:r), w(k:r,j:q)) for
/// every third sequence k relaying the pair.
ConsistencyLibrary extend_library(const ConsistencyLibrary& primary, const std::vector<std::string>& seqs,
                                  std::size_t jobs = 1);

/// Progressive alignment scored by extended-library weights.
std::vector<std::string> consistency_msa(const std::vector<std::string>& seqs, const SubstitutionMatrix& m,
                                         GapPenalties g, std::size_t jobs = 1);

/// Progressive merge with an explicit library and tree.
std::vector<std::string> library_progressive_msa(const std::vector<std::string>& seqs,
                                                 const ConsistencyLibrary& library, const GuideTree& tree);

// -- the two-phase protocol --

enum class MsaMethod : std::uint8_t { progressive, consistency };

struct MultipleAlignment {
  std::vector<ResidueSequence> rows;
  char gap_letter = kSingleGap;

  std::size_t length() const { return rows.empty() ? 0 : rows.front().letters.size(); }
};

struct AlignOptions {
  MsaMethod method = MsaMethod::progressive;
  std::size_t jobs = 1;
};

/// Aligns one class's encoded signatures; gaps become 'W'.
MultipleAlignment single_align(const std::vector<ResidueSequence>& class_seqs, const SubstitutionMatrix& m,
                               GapPenalties g, AlignOptions opts = {});

/// Re-aligns all rows of two 'W'-coded alignments as plain sequences in
/// which 'W' is an ordinary letter; the new gaps become 'Y'.
MultipleAlignment double_align(const MultipleAlignment& a, const MultipleAlignment& b, const SubstitutionMatrix& m,
                               GapPenalties g, AlignOptions opts = {});

/// Removes every occurrence of `gap` from `letters`.
std::string strip_letter(std::string_view letters, char gap);

// -- consensus --

struct Consensus {
  std::size_t rows = 0;
  std::vector<std::map<char, std::size_t>> counts;  // non-gap residues per column
  std::string majority;

  std::size_t length() const { return counts.size(); }
  double frequency(std::size_t column, char letter) const;
};

/// Gap letters ('W', 'Y', '-') are never counted. Majority ties go to the
/// alphabetically first letter; an all-gap column takes the gap letter.
Consensus consensus_of(const MultipleAlignment& msa);

struct AbbreviatedColumn {
  std::size_t column = 0;
  std::string letters;  // alphabetical, at least one
};

using AbbreviatedConsensus = std::vector<AbbreviatedColumn>;

/// ceil(threshold * n): the appearances a residue needs to be kept.
std::size_t required_count(std::size_t rows, double threshold);

AbbreviatedConsensus abbreviate_consensus(const Consensus& c, double threshold = 0.15);

/// Kept columns in order, alternatives bracketed: "A[CD]E".
std::string format_abbreviated(const AbbreviatedConsensus& c);

}  // namespace malseq
