#include <algorithm>
#include <map>

#include "malseq/error.hpp"
#include "malseq/eval.hpp"
#include "malseq/parallel.hpp"

namespace malseq {

std::string_view to_string(AlignMethod m) {
  switch (m) {
    case AlignMethod::none: return "none";
    case AlignMethod::CI: return "CI";
    case AlignMethod::CG: return "CG";
    case AlignMethod::CB: return "CB";
    case AlignMethod::TB: return "TB";
  }
  return "?";
}

AlignMethod parse_align_method(std::string_view text) {
  for (AlignMethod m : kAlignMethods) {
    if (text == to_string(m)) return m;
  }
  if (text == "ci") return AlignMethod::CI;
  if (text == "cg") return AlignMethod::CG;
  if (text == "cb") return AlignMethod::CB;
  if (text == "tb") return AlignMethod::TB;
  throw EvalError("unknown alignment method '" + std::string(text) + "' (none, CI, CG, CB, TB)");
}

MatrixName matrix_for(AlignMethod m) {
  switch (m) {
    case AlignMethod::CI: return MatrixName::identity;
    case AlignMethod::CG: return MatrixName::gonnet250;
    case AlignMethod::CB:
    case AlignMethod::TB: return MatrixName::blosum62;
    case AlignMethod::none: break;
  }
  throw EvalError("the benchmark condition has no substitution matrix");
}

MsaMethod msa_for(AlignMethod m) { return m == AlignMethod::TB ? MsaMethod::consistency : MsaMethod::progressive; }

GapPenalties PipelineOptions::gaps_for(MatrixName m) const {
  GapPenalties g = default_gaps(m);
  if (gap_open) g.open = *gap_open;
  if (gap_extend) g.extend = *gap_extend;
  return g;
}

AlignedCorpus align_corpus(const std::vector<HexSignature>& corpus, RepId rep, AlignMethod method,
                           const PipelineOptions& opts) {
  AlignedCorpus out;
  out.rep = rep;
  out.method = method;
  const auto encoded = encode_corpus(corpus, rep);
  std::vector<ResidueSequence> virus, worm;
  for (const auto& s : encoded) (s.label == Label::virus ? virus : worm).push_back(s);
  if (virus.empty() || worm.empty()) throw EvalError("the corpus needs both virus and worm signatures");

  if (method == AlignMethod::none) {
    out.combined.gap_letter = kDoubleGap;
    out.combined.rows = virus;
    out.combined.rows.insert(out.combined.rows.end(), worm.begin(), worm.end());
    out.combined.rows = pad_rows(std::move(out.combined.rows), kDoubleGap);
    return out;
  }
  const MatrixName name = matrix_for(method);
  const SubstitutionMatrix m = load_matrix(name);
  const GapPenalties g = opts.gaps_for(name);
  const AlignOptions ao{msa_for(method), opts.jobs};
  out.virus = single_align(virus, m, g, ao);
  out.worm = single_align(worm, m, g, ao);
  out.combined = double_align(out.virus, out.worm, m, g, ao);
  return out;
}

ResultRow run_on_alignment(const ExperimentConfig& cfg, const AlignedCorpus& aligned, std::size_t jobs) {
  ResultRow row;
  row.config = cfg;
  row.alignment_length = aligned.combined.length();
  const Dataset d = build_dataset(aligned.combined, cfg.classifier == Classifier::mlp);
  const RegimeResult r = run_regime(cfg.classifier, d, cfg.regime, cfg.seed, jobs);
  row.accuracy = r.accuracy;
  row.confusion = r.confusion;
  row.warnings = r.warnings;
  return row;
}

ResultRow run_experiment(const ExperimentConfig& cfg, const std::vector<HexSignature>& corpus,
                         const PipelineOptions& opts) {
  return run_on_alignment(cfg, align_corpus(corpus, cfg.rep, cfg.alignment, opts), opts.jobs);
}

void compute_averages(ResultTable& table) {
  std::map<RepId, std::pair<double, std::size_t>> reps;
  std::map<AlignMethod, std::pair<double, std::size_t>> methods;
  double all = 0.0;
  std::size_t count = 0;
  for (const auto& r : table.rows) {
    if (r.error) continue;
    auto& a = reps[r.config.rep];
    a.first += r.accuracy;
    ++a.second;
    auto& b = methods[r.config.alignment];
    b.first += r.accuracy;
    ++b.second;
    all += r.accuracy;
    ++count;
  }
  table.by_representation.clear();
  table.by_alignment.clear();
  for (const auto& [k, v] : reps) {
    table.by_representation.push_back({std::string(to_string(k)), v.first / static_cast<double>(v.second), v.second});
  }
  for (const auto& [k, v] : methods) {
    table.by_alignment.push_back({std::string(to_string(k)), v.first / static_cast<double>(v.second), v.second});
  }
  table.overall = count == 0 ? std::nullopt : std::optional<double>(all / static_cast<double>(count));
}

ResultTable run_grid(const std::vector<ExperimentConfig>& cfgs, const std::vector<HexSignature>& corpus,
                     const PipelineOptions& opts) {
  if (cfgs.empty()) throw EvalError("empty experiment grid");

  // One alignment per (representation, method), in first-use order.
  std::vector<std::pair<RepId, AlignMethod>> keys;
  for (const auto& c : cfgs) {
    const std::pair key{c.rep, c.alignment};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::vector<std::optional<AlignedCorpus>> aligned(keys.size());
  std::vector<std::string> align_errors(keys.size());
  PipelineOptions inner = opts;
  inner.jobs = 1;
  parallel_for(keys.size(), opts.jobs, [&](std::size_t k) {
    try {
      aligned[k] = align_corpus(corpus, keys[k].first, keys[k].second, inner);
    } catch (const Error& e) {
      align_errors[k] = e.stage() + ": " + e.what();
    }
  });

  ResultTable table;
  table.rows.resize(cfgs.size());
  parallel_for(cfgs.size(), opts.jobs, [&](std::size_t i) {
    const auto& cfg = cfgs[i];
    const auto k = static_cast<std::size_t>(
        std::find(keys.begin(), keys.end(), std::pair{cfg.rep, cfg.alignment}) - keys.begin());
    ResultRow& row = table.rows[i];
    row.config = cfg;
    if (!aligned[k]) {
      row.error = align_errors[k];
      return;
    }
    try {
      row = run_on_alignment(cfg, *aligned[k], 1);
    } catch (const Error& e) {
      row = ResultRow{};
      row.config = cfg;
      row.alignment_length = aligned[k]->combined.length();
      row.error = e.stage() + ": " + e.what();
    }
  });
  compute_averages(table);
  return table;
}

std::vector<ExperimentConfig> make_grid(const std::vector<RepId>& reps, const std::vector<AlignMethod>& methods,
                                        const std::vector<Classifier>& classifiers,
                                        const std::vector<Regime>& regimes, std::uint64_t seed) {
  std::vector<ExperimentConfig> out;
  for (RepId r : reps) {
    for (AlignMethod m : methods) {
      for (Classifier c : classifiers) {
        for (Regime g : regimes) out.push_back({r, m, c, g, seed});
      }
    }
  }
  return out;
}

std::string config_slug(const ExperimentConfig& cfg) {
  return std::string(to_string(cfg.rep)) + "_" + std::string(to_string(cfg.alignment)) + "_" +
         std::string(to_string(cfg.classifier)) + "_" + std::string(to_string(cfg.regime)) + "_s" +
         std::to_string(cfg.seed);
}

}  // namespace malseq
