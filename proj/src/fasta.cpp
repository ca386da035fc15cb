#include <cctype>
#include <unordered_set>

#include "malseq/corpus.hpp"
#include "malseq/error.hpp"

namespace malseq {

std::vector<FastaRecord> read_fasta(std::string_view text) {
  std::vector<FastaRecord> out;
  std::size_t line_no = 0;
  auto close_record = [&] {
    if (!out.empty() && out.back().letters.empty()) {
      throw CorpusError("FASTA record '" + out.back().id + "' has no sequence");
    }
  };
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!line.empty() && line.front() == '>') {
      close_record();
      std::string_view id = line.substr(1);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.front()))) id.remove_prefix(1);
      while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.remove_suffix(1);
      if (id.empty()) throw CorpusError("line " + std::to_string(line_no) + ": empty FASTA header");
      out.push_back(FastaRecord{std::string(id), {}});
      continue;
    }
    std::string letters;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) letters.push_back(c);
    }
    if (letters.empty()) continue;
    if (out.empty()) throw CorpusError("line " + std::to_string(line_no) + ": sequence before first FASTA header");
    out.back().letters += letters;
  }
  close_record();
  return out;
}

std::string write_fasta(const std::vector<FastaRecord>& records) {
  std::unordered_set<std::string_view> ids;
  std::string out;
  for (const auto& rec : records) {
    if (rec.id.empty()) throw CorpusError("FASTA record with empty id");
    if (!ids.insert(rec.id).second) throw CorpusError("duplicate FASTA id '" + rec.id + "'");
    out += '>';
    out += rec.id;
    out += '\n';
    for (std::size_t i = 0; i < rec.letters.size(); i += kFastaLineWidth) {
      out.append(rec.letters, i, kFastaLineWidth);
      out += '\n';
    }
  }
  return out;
}

}  // namespace malseq
