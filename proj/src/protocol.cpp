#include <algorithm>
#include <cmath>

#include "malseq/align.hpp"
#include "malseq/error.hpp"

namespace malseq {

namespace {

std::vector<std::string> run_msa(const std::vector<std::string>& seqs, const SubstitutionMatrix& m, GapPenalties g,
                                 const AlignOptions& opts) {
  if (seqs.size() == 1) return seqs;
  if (opts.method == MsaMethod::consistency) return consistency_msa(seqs, m, g, opts.jobs);
  const DistanceMatrix d = distance_matrix(seqs, m, g, opts.jobs);
  return progressive_msa(seqs, m, g, build_guide_tree(d));
}

void recode_gaps(std::string& row, char gap) { std::replace(row.begin(), row.end(), kRawGap, gap); }

}  // namespace

std::string strip_letter(std::string_view letters, char gap) {
  std::string out;
  out.reserve(letters.size());
  for (char c : letters) {
    if (c != gap) out.push_back(c);
  }
  return out;
}

MultipleAlignment single_align(const std::vector<ResidueSequence>& class_seqs, const SubstitutionMatrix& m,
                               GapPenalties g, AlignOptions opts) {
  if (class_seqs.empty()) throw AlignError("single alignment of an empty class");
  const RepId rep = class_seqs.front().rep;
  std::vector<std::string> letters;
  letters.reserve(class_seqs.size());
  for (const auto& s : class_seqs) {
    if (s.rep != rep) throw AlignError("single alignment mixes representations");
    if (s.letters.find_first_of("WY-") != std::string::npos) {
      throw AlignError("sequence '" + s.id + "' already contains gap letters");
    }
    letters.push_back(s.letters);
  }
  auto rows = run_msa(letters, m, g, opts);
  MultipleAlignment out;
  out.gap_letter = kSingleGap;
  out.rows = class_seqs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    recode_gaps(rows[i], kSingleGap);
    out.rows[i].letters = std::move(rows[i]);
  }
  return out;
}

MultipleAlignment double_align(const MultipleAlignment& a, const MultipleAlignment& b, const SubstitutionMatrix& m,
                               GapPenalties g, AlignOptions opts) {
  if (a.rows.empty() || b.rows.empty()) throw AlignError("double alignment of an empty alignment");
  const RepId rep = a.rows.front().rep;
  std::vector<ResidueSequence> all = a.rows;
  all.insert(all.end(), b.rows.begin(), b.rows.end());
  std::vector<std::string> letters;
  letters.reserve(all.size());
  for (const auto& s : all) {
    if (s.rep != rep) throw AlignError("double alignment of different representations");
    if (s.letters.find_first_of("Y-") != std::string::npos) {
      throw AlignError("row '" + s.id + "' already contains double-alignment gaps");
    }
    letters.push_back(s.letters);
  }
  auto rows = run_msa(letters, m, g, opts);
  MultipleAlignment out;
  out.gap_letter = kDoubleGap;
  out.rows = std::move(all);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    recode_gaps(rows[i], kDoubleGap);
    out.rows[i].letters = std::move(rows[i]);
  }
  return out;
}

double Consensus::frequency(std::size_t column, char letter) const {
  const auto& col = counts.at(column);
  const auto it = col.find(letter);
  if (it == col.end() || rows == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(rows);
}

Consensus consensus_of(const MultipleAlignment& msa) {
  Consensus c;
  c.rows = msa.rows.size();
  const std::size_t len = msa.length();
  c.counts.resize(len);
  for (const auto& row : msa.rows) {
    if (row.letters.size() != len) throw AlignError("ragged alignment row '" + row.id + "'");
    for (std::size_t k = 0; k < len; ++k) {
      if (!is_gap_letter(row.letters[k])) ++c.counts[k][row.letters[k]];
    }
  }
  c.majority.reserve(len);
  for (const auto& col : c.counts) {
    char best = msa.gap_letter;
    std::size_t best_count = 0;
    for (const auto& [letter, n] : col) {  // std::map iterates alphabetically
      if (n > best_count) {
        best = letter;
        best_count = n;
      }
    }
    c.majority.push_back(best);
  }
  return c;
}

std::size_t required_count(std::size_t rows, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw AlignError("consensus threshold must lie in (0,1]");
  // The tolerance absorbs representation error, e.g. 0.15 * 60.
  const double exact = threshold * static_cast<double>(rows);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

AbbreviatedConsensus abbreviate_consensus(const Consensus& c, double threshold) {
  const std::size_t need = std::max<std::size_t>(1, required_count(c.rows, threshold));
  AbbreviatedConsensus out;
  for (std::size_t k = 0; k < c.counts.size(); ++k) {
    AbbreviatedColumn col{k, {}};
    for (const auto& [letter, n] : c.counts[k]) {
      if (n >= need) col.letters.push_back(letter);
    }
    if (!col.letters.empty()) out.push_back(std::move(col));
  }
  return out;
}

std::string format_abbreviated(const AbbreviatedConsensus& c) {
  std::string out;
  for (const auto& col : c) {
    if (col.letters.size() == 1) {
      out += col.letters;
    } else {
      out += '[';
      out += col.letters;
      out += ']';
    }
  }
  return out;
}

}  // namespace malseq
