#pragma once

// Hexadecimal signatures and their artificial amino-acid encodings.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "malseq/rng.hpp"

namespace malseq {

enum class Label : std::uint8_t { virus = 0, worm = 1 };

inline constexpr std::array<Label, 2> kLabels{Label::virus, Label::worm};

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

struct HexSignature {
  std::string name;
  Label label = Label::virus;
  std::string digits;  // lowercase 0-9a-f

  bool operator==(const HexSignature&) const = default;
};

enum class RepId : std::uint8_t { R1 = 0, R2 = 1, R3 = 2 };

inline constexpr std::array<RepId, 3> kRepIds{RepId::R1, RepId::R2, RepId::R3};

std::string_view to_string(RepId id);
RepId parse_rep_id(std::string_view text);

inline constexpr char kSingleGap = 'W';  // gaps from per-class alignment
inline constexpr char kDoubleGap = 'Y';  // gaps from the combined alignment
inline constexpr char kRawGap = '-';     // aligner-internal gap

inline bool is_gap_letter(char c) { return c == kSingleGap || c == kDoubleGap || c == kRawGap; }

/// A bijection between the 16 hex symbols and 16 residue letters. None of
/// the residue letters is 'W' or 'Y', which stay reserved for gaps.
class RepresentationTable {
 public:
  static const RepresentationTable& get(RepId id);

  RepId id() const { return id_; }

  /// Residue letters in hex order 0..f.
  std::string_view residues() const { return {residues_.data(), residues_.size()}; }

  bool has_hex(char hex) const;
  bool has_residue(char residue) const;

  /// Throws CorpusError when the symbol is outside the table.
  char encode(char hex) const;
  char decode(char residue) const;

 private:
  RepresentationTable(RepId id, std::string_view residues_in_hex_order);

  RepId id_;
  std::array<char, 16> residues_{};
  std::array<signed char, 256> inverse_{};
};

struct ResidueSequence {
  std::string id;
  Label label = Label::virus;
  RepId rep = RepId::R1;
  std::string letters;

  bool operator==(const ResidueSequence&) const = default;
};

// -- corpus file: one `name,label,hexdigits` record per line, '#' comments --

std::vector<HexSignature> parse_corpus(std::string_view text);
std::string write_corpus(const std::vector<HexSignature>& corpus);
std::vector<HexSignature> load_corpus(const std::string& path);

ResidueSequence encode_signature(const HexSignature& sig, const RepresentationTable& rep);
std::vector<ResidueSequence> encode_corpus(const std::vector<HexSignature>& corpus, RepId rep);

std::string encode_hex(std::string_view hex, const RepresentationTable& rep);

/// Inverse of encode_hex. With drop_gaps the 'W'/'Y' letters are removed
/// first; without it any gap letter is an error.
std::string decode_residues(std::string_view letters, const RepresentationTable& rep,
                            bool drop_gaps = false);

// -- numeric form for perceptron input --

/// 0.1 for 'A' up to 0.95 for 'W' in steps of 0.05; throws on unknown letters.
double numeric_value(char letter);
std::vector<double> to_numeric(std::string_view letters);
inline std::vector<double> to_numeric(const ResidueSequence& seq) { return to_numeric(seq.letters); }

/// The 18 letters that have a numeric value, in ladder order.
std::string_view numeric_alphabet();

// -- FASTA --

struct FastaRecord {
  std::string id;
  std::string letters;

  bool operator==(const FastaRecord&) const = default;
};

inline constexpr std::size_t kFastaLineWidth = 60;

std::vector<FastaRecord> read_fasta(std::string_view text);
std::string write_fasta(const std::vector<FastaRecord>& records);

// -- synthetic corpora --

struct ClassMotifs {
  std::vector<std::string> motifs;  // hex strings planted in order
  double insertion_probability = 1.0;
};

struct SynthesisParams {
  std::size_t virus_count = 60;
  std::size_t worm_count = 60;
  std::size_t min_length = 40;
  std::size_t max_length = 80;
  ClassMotifs virus;
  ClassMotifs worm;
  double mutation_rate = 0.0;  // per planted motif symbol
  double indel_rate = 0.0;     // per planted motif symbol
  std::uint64_t seed = 1;
};

/// Random hex backgrounds with each class's motifs planted as (possibly
/// mutated) family variants. Fully determined by params, seed included.
std::vector<HexSignature> synthesize_corpus(const SynthesisParams& params);

/// Replaces each symbol with a different one with probability `rate`, then
/// deletes or inserts a symbol with probability `indel_rate` per position.
/// Exposed for testing the motif noise model in isolation.
std::string mutate_motif(std::string_view motif, double rate, double indel_rate, Rng& rng,
                         std::string_view alphabet = "0123456789abcdef");

}  // namespace malseq
