#include <charconv>
#include <cmath>
#include <sstream>

#include "malseq/align.hpp"
#include "malseq/embedded_matrices.hpp"
#include "malseq/error.hpp"

namespace malseq {

std::string_view to_string(MatrixName name) {
  switch (name) {
    case MatrixName::identity: return "identity";
    case MatrixName::blosum62: return "blosum62";
    case MatrixName::gonnet250: return "gonnet250";
  }
  return "?";
}

MatrixName parse_matrix_name(std::string_view text) {
  if (text == "identity") return MatrixName::identity;
  if (text == "blosum62") return MatrixName::blosum62;
  if (text == "gonnet250") return MatrixName::gonnet250;
  throw AlignError("unknown substitution matrix '" + std::string(text) + "'");
}

SubstitutionMatrix::SubstitutionMatrix(std::string name, std::string alphabet, std::vector<double> scores)
    : name_(std::move(name)), alphabet_(std::move(alphabet)), scores_(std::move(scores)) {
  index_.fill(-1);
  const std::size_t k = alphabet_.size();
  if (scores_.size() != k * k) throw AlignError("matrix '" + name_ + "': score table is not square");
  for (std::size_t i = 0; i < k; ++i) {
    auto& slot = index_[static_cast<unsigned char>(alphabet_[i])];
    if (slot >= 0) throw AlignError("matrix '" + name_ + "': duplicate letter '" + alphabet_[i] + "'");
    slot = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (scores_[i * k + j] != scores_[j * k + i]) {
        throw AlignError("matrix '" + name_ + "' is not symmetric at " + alphabet_[i] + "," + alphabet_[j]);
      }
    }
  }
}

double SubstitutionMatrix::score(char a, char b) const {
  const int i = index_of(a);
  const int j = index_of(b);
  if (i < 0 || j < 0) {
    throw AlignError("matrix '" + name_ + "' has no letter '" + std::string(1, i < 0 ? a : b) + "'");
  }
  return score_at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

std::vector<std::uint8_t> SubstitutionMatrix::indices(std::string_view letters) const {
  std::vector<std::uint8_t> out;
  out.reserve(letters.size());
  for (char c : letters) {
    const int i = index_of(c);
    if (i < 0) throw AlignError("letter '" + std::string(1, c) + "' is outside matrix '" + name_ + "' alphabet");
    out.push_back(static_cast<std::uint8_t>(i));
  }
  return out;
}

SubstitutionMatrix parse_matrix(std::string name, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string header;
  std::vector<std::vector<double>> rows;
  std::string row_letters;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw AlignError("matrix '" + name + "' line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok) || tok.front() == '#') continue;
    if (header.empty()) {
      do {
        if (tok.size() != 1) fail("header token '" + tok + "' is not a single letter");
        header.push_back(tok.front());
      } while (tokens >> tok);
      continue;
    }
    if (tok.size() != 1) fail("row label '" + tok + "' is not a single letter");
    row_letters.push_back(tok.front());
    std::vector<double> values;
    while (tokens >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) fail("bad score '" + tok + "'");
      values.push_back(v);
    }
    if (values.size() != header.size()) fail("expected " + std::to_string(header.size()) + " scores");
    rows.push_back(std::move(values));
  }
  if (header.empty()) throw AlignError("matrix '" + name + "': no header row");
  if (row_letters != header) throw AlignError("matrix '" + name + "': row labels do not match the header");
  std::vector<double> scores;
  scores.reserve(header.size() * header.size());
  for (const auto& r : rows) scores.insert(scores.end(), r.begin(), r.end());
  return SubstitutionMatrix(std::move(name), std::move(header), std::move(scores));
}

SubstitutionMatrix identity_matrix(std::string_view alphabet) {
  const std::size_t k = alphabet.size();
  std::vector<double> scores(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) scores[i * k + i] = 1.0;
  return SubstitutionMatrix("identity", std::string(alphabet), std::move(scores));
}

SubstitutionMatrix load_matrix(MatrixName name) {
  switch (name) {
    case MatrixName::identity: return identity_matrix("ACDEFGHIKLMNPQRSWY");
    case MatrixName::blosum62: return parse_matrix("blosum62", embedded::blosum62);
    case MatrixName::gonnet250: return parse_matrix("gonnet250", embedded::gonnet250);
  }
  throw AlignError("unknown substitution matrix");
}

GapPenalties default_gaps(MatrixName name) {
  if (name == MatrixName::identity) return {1.0, 0.5};
  return {10.0, 0.5};
}

}  // namespace malseq
