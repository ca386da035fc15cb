#include <algorithm>
#include <cstdio>

#include "malseq/corpus.hpp"
#include "malseq/error.hpp"

namespace malseq {

namespace {

constexpr std::string_view kHex = "0123456789abcdef";

char random_symbol(Rng& rng, std::string_view alphabet) { return alphabet[rng.below(alphabet.size())]; }

void check_rate(double r, const char* what) {
  if (!(r >= 0.0 && r <= 1.0)) throw CorpusError(std::string(what) + " must lie in [0,1]");
}

void validate(const SynthesisParams& p) {
  if (p.virus_count < 1 || p.worm_count < 1) throw CorpusError("synthesis needs at least one signature per class");
  if (p.min_length < 1 || p.min_length > p.max_length) throw CorpusError("invalid base length range");
  check_rate(p.mutation_rate, "mutation rate");
  check_rate(p.indel_rate, "indel rate");
  for (const ClassMotifs* cls : {&p.virus, &p.worm}) {
    check_rate(cls->insertion_probability, "motif insertion probability");
    std::size_t total = 0;
    for (const auto& m : cls->motifs) {
      if (m.empty()) throw CorpusError("empty motif");
      for (char c : m) {
        if (kHex.find(c) == std::string_view::npos) throw CorpusError("motif '" + m + "' is not lowercase hex");
      }
      total += m.size();
    }
    if (total > p.min_length) {
      throw CorpusError("motifs (" + std::to_string(total) + " symbols) longer than minimum base length " +
                        std::to_string(p.min_length));
    }
  }
}

std::string make_signature(const ClassMotifs& cls, const SynthesisParams& p, Rng& rng) {
  std::vector<std::string> planted;
  std::size_t planted_len = 0;
  for (const auto& motif : cls.motifs) {
    if (!rng.chance(cls.insertion_probability)) continue;
    planted.push_back(mutate_motif(motif, p.mutation_rate, p.indel_rate, rng));
    planted_len += planted.back().size();
  }
  const std::size_t length = p.min_length + rng.below(p.max_length - p.min_length + 1);
  const std::size_t background = length > planted_len ? length - planted_len : 0;

  // Split the background into planted.size()+1 chunks around the motifs.
  std::vector<std::size_t> cuts(planted.size());
  for (auto& c : cuts) c = rng.below(background + 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(background);

  std::string out;
  out.reserve(background + planted_len);
  std::size_t prev = 0;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    for (std::size_t i = prev; i < cuts[k]; ++i) out.push_back(random_symbol(rng, kHex));
    prev = cuts[k];
    if (k < planted.size()) out += planted[k];
  }
  return out;
}

}  // namespace

std::string mutate_motif(std::string_view motif, double rate, double indel_rate, Rng& rng,
                         std::string_view alphabet) {
  std::string out;
  out.reserve(motif.size() + 4);
  for (char c : motif) {
    char sym = c;
    if (alphabet.size() > 1 && rng.chance(rate)) {
      // Uniform over the other symbols of the alphabet.
      const auto self = alphabet.find(c);
      std::size_t pick = rng.below(alphabet.size() - (self == std::string_view::npos ? 0 : 1));
      if (self != std::string_view::npos && pick >= self) ++pick;
      sym = alphabet[pick];
    }
    if (rng.chance(indel_rate)) {
      if (rng.chance(0.5)) continue;  // deletion
      out.push_back(sym);
      out.push_back(random_symbol(rng, alphabet));  // insertion
      continue;
    }
    out.push_back(sym);
  }
  if (out.empty()) out.push_back(random_symbol(rng, alphabet));
  return out;
}

std::vector<HexSignature> synthesize_corpus(const SynthesisParams& params) {
  validate(params);
  Rng rng(derive_seed(params.seed, "synthesize_corpus"));
  std::vector<HexSignature> out;
  out.reserve(params.virus_count + params.worm_count);
  auto emit = [&](Label label, std::size_t count, const ClassMotifs& cls) {
    for (std::size_t i = 0; i < count; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s.syn.%04zu", std::string(to_string(label)).c_str(), i + 1);
      out.push_back(HexSignature{name, label, make_signature(cls, params, rng)});
    }
  };
  emit(Label::virus, params.virus_count, params.virus);
  emit(Label::worm, params.worm_count, params.worm);
  return out;
}

}  // namespace malseq
