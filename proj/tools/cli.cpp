#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "malseq/align.hpp"
#include "malseq/corpus.hpp"
#include "malseq/error.hpp"
#include "malseq/eval.hpp"
#include "malseq/ml.hpp"
#include "malseq/rules.hpp"

namespace malseq::cli {

namespace fs = std::filesystem;

namespace {

class CliError : public Error {
 public:
  explicit CliError(const std::string& what) : Error("cli", what) {}
};

struct Common {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string out_dir;
  std::string config;
  std::string corpus;
};

struct Gaps {
  std::optional<double> open;
  std::optional<double> extend;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content, std::ostream& out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw CliError("write failed for '" + path.string() + "'");
  out << "wrote " << path.string() << '\n';
}

fs::path out_dir(const Common& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("MALSEQ_OUT"); env != nullptr && *env != '\0') return env;
  return ".";
}

const std::vector<std::string> kDefaultVirusMotifs{"1b3401c1", "8e5ef1ae"};
const std::vector<std::string> kDefaultWormMotifs{"028e70f6", "fb56373b"};

std::vector<HexSignature> corpus_for(const Common& c, std::ostream& err) {
  if (!c.corpus.empty()) return load_corpus(c.corpus);
  SynthesisParams p;
  p.virus.motifs = kDefaultVirusMotifs;
  p.worm.motifs = kDefaultWormMotifs;
  p.mutation_rate = 0.05;
  p.indel_rate = 0.05;
  p.seed = c.seed;
  err << "note: no --corpus given; using a synthetic corpus (seed " << c.seed << ")\n";
  return synthesize_corpus(p);
}

void add_common(CLI::App* app, Common& c, bool corpus) {
  app->add_option("--seed", c.seed, "Top-level random seed")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--out", c.out_dir, "Output directory (default: $MALSEQ_OUT or .)");
  app->add_option("--config", c.config, "key=value file; command-line flags take precedence");
  if (corpus) app->add_option("--corpus", c.corpus, "Corpus file (name,label,hex); synthetic if omitted");
}

void add_gaps(CLI::App* app, Gaps& g) {
  app->add_option("--gap-open", g.open, "Gap opening penalty (default per matrix)");
  app->add_option("--gap-extend", g.extend, "Gap extension penalty (default per matrix)");
}

PipelineOptions pipeline(const Common& c, const Gaps& g) {
  PipelineOptions o;
  o.gap_open = g.open;
  o.gap_extend = g.extend;
  o.jobs = c.jobs;
  return o;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::vector<std::string>& items, Parse parse) {
  std::vector<T> out;
  for (const auto& s : items) {
    const T v = parse(s);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

std::vector<FastaRecord> to_fasta(const std::vector<ResidueSequence>& rows) {
  std::vector<FastaRecord> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.id, r.letters});
  return out;
}

std::string consensus_block(const std::string& title, const MultipleAlignment& msa, double threshold) {
  const Consensus c = consensus_of(msa);
  std::ostringstream s;
  s << "[" << title << "]\n";
  s << "rows: " << c.rows << "\ncolumns: " << c.length() << "\n";
  s << "threshold: " << threshold << "\nrequired: " << required_count(c.rows, threshold) << "\n";
  s << "consensus: " << c.majority << "\n";
  s << "abbreviated: " << format_abbreviated(abbreviate_consensus(c, threshold)) << "\n\n";
  return s.str();
}

// Brackets are not valid FASTA residues; the FASTA copy keeps the first
// alternative of each set and the text copy keeps the full notation.
std::string first_alternatives(std::string_view bracketed) {
  std::string out;
  bool in_set = false;
  bool taken = false;
  for (char c : bracketed) {
    if (c == '[') {
      in_set = true;
      taken = false;
    } else if (c == ']') {
      in_set = false;
    } else if (!in_set) {
      out += c;
    } else if (!taken) {
      out += c;
      taken = true;
    }
  }
  return out;
}

// -- subcommands --

struct SynthArgs {
  Common common;
  std::string file = "corpus.csv";
  SynthesisParams params;
  std::vector<std::string> virus_motifs = kDefaultVirusMotifs;
  std::vector<std::string> worm_motifs = kDefaultWormMotifs;
  double insertion = 1.0;
};

void run_synth(SynthArgs& a, std::ostream& out) {
  a.params.virus.motifs = a.virus_motifs;
  a.params.worm.motifs = a.worm_motifs;
  a.params.virus.insertion_probability = a.insertion;
  a.params.worm.insertion_probability = a.insertion;
  a.params.seed = a.common.seed;
  const auto corpus = synthesize_corpus(a.params);
  write_file(out_dir(a.common) / a.file, write_corpus(corpus), out);
}

struct EncodeArgs {
  Common common;
  std::vector<std::string> reps{"R1", "R2", "R3"};
};

void run_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
  const auto corpus = corpus_for(a.common, err);
  for (RepId rep : parse_list<RepId>(a.reps, parse_rep_id)) {
    const auto encoded = encode_corpus(corpus, rep);
    for (Label label : kLabels) {
      std::vector<ResidueSequence> rows;
      for (const auto& s : encoded) {
        if (s.label == label) rows.push_back(s);
      }
      write_file(out_dir(a.common) / (std::string(to_string(rep)) + "_" + std::string(to_string(label)) + ".fasta"),
                 write_fasta(to_fasta(rows)), out);
    }
  }
}

struct AlignArgs {
  Common common;
  Gaps gaps;
  std::string rep = "R1";
  std::string method = "CI";
  double threshold = 0.15;
};

void run_align(const AlignArgs& a, std::ostream& out, std::ostream& err) {
  const auto corpus = corpus_for(a.common, err);
  const RepId rep = parse_rep_id(a.rep);
  const AlignMethod method = parse_align_method(a.method);
  if (a.threshold <= 0.0 || a.threshold > 1.0) throw CliError("--threshold must be in (0, 1]");
  const AlignedCorpus ac = align_corpus(corpus, rep, method, pipeline(a.common, a.gaps));
  const std::string stem = std::string(to_string(rep)) + "_" + std::string(to_string(method));
  const fs::path dir = out_dir(a.common);
  std::string text;
  if (method != AlignMethod::none) {
    write_file(dir / (stem + "_virus.fasta"), write_fasta(to_fasta(ac.virus.rows)), out);
    write_file(dir / (stem + "_worm.fasta"), write_fasta(to_fasta(ac.worm.rows)), out);
    text += consensus_block("virus", ac.virus, a.threshold);
    text += consensus_block("worm", ac.worm, a.threshold);
  }
  write_file(dir / (stem + "_double.fasta"), write_fasta(to_fasta(ac.combined.rows)), out);
  text += consensus_block("combined", ac.combined, a.threshold);
  write_file(dir / (stem + "_consensus.txt"), text, out);
}

struct TrainArgs {
  Common common;
  Gaps gaps;
  std::string rep = "R1";
  std::string method = "CI";
  std::string classifier = "c45";
  std::string regime = "holdout_66_34";
  bool dataset_csv = false;
};

void run_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto corpus = corpus_for(a.common, err);
  ExperimentConfig cfg{parse_rep_id(a.rep), parse_align_method(a.method), parse_classifier(a.classifier),
                       parse_regime(a.regime), a.common.seed};
  const PipelineOptions opts = pipeline(a.common, a.gaps);
  const AlignedCorpus ac = align_corpus(corpus, cfg.rep, cfg.alignment, opts);
  ResultTable table;
  table.rows.push_back(run_on_alignment(cfg, ac, opts.jobs));
  compute_averages(table);
  const ResultRow& r = table.rows.front();
  const fs::path dir = out_dir(a.common);
  write_file(dir / (config_slug(cfg) + ".csv"), render_report(table, ReportFormat::csv), out);
  if (a.dataset_csv) {
    write_file(dir / (config_slug(cfg) + "_dataset.csv"),
               dataset_to_csv(build_dataset(ac.combined, cfg.classifier == Classifier::mlp)), out);
  }
  out << config_slug(cfg) << ": accuracy " << r.accuracy << " (tp " << r.confusion.tp << ", tn " << r.confusion.tn
      << ", fp " << r.confusion.fp << ", fn " << r.confusion.fn << "), alignment length " << r.alignment_length << '\n';
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
}

struct GridArgs {
  Common common;
  Gaps gaps;
  std::vector<std::string> reps{"R1", "R2", "R3"};
  std::vector<std::string> methods{"none", "CI", "CG", "CB", "TB"};
  std::vector<std::string> classifiers{"naive_bayes", "oner", "c45", "mlp"};
  std::vector<std::string> regimes{"holdout_66_34", "kfold_10"};
  std::string name = "grid";
};

std::string t_tests(const ResultTable& table) {
  std::ostringstream s;
  s << "# paired t tests: each alignment method against the benchmark (none)\n";
  bool any = false;
  for (AlignMethod m : kAlignMethods) {
    if (m == AlignMethod::none) continue;
    std::vector<double> aligned, bench;
    for (const auto& r : table.rows) {
      if (r.config.alignment != m || r.error) continue;
      for (const auto& b : table.rows) {
        if (b.config.alignment == AlignMethod::none && !b.error && b.config.rep == r.config.rep &&
            b.config.classifier == r.config.classifier && b.config.regime == r.config.regime &&
            b.config.seed == r.config.seed) {
          aligned.push_back(r.accuracy);
          bench.push_back(b.accuracy);
          break;
        }
      }
    }
    if (aligned.empty()) continue;
    any = true;
    s << to_string(m) << " vs none: pairs " << aligned.size();
    try {
      const TTestResult t = paired_t_test(aligned, bench);
      s << ", t " << t.t << ", df " << t.df << ", p " << t.p_two_sided << '\n';
    } catch (const Error& e) {
      s << ", not computed (" << e.what() << ")\n";
    }
  }
  if (!any) s << "no rows pair with a benchmark row\n";
  return s.str();
}

void run_grid_command(const GridArgs& a, std::ostream& out, std::ostream& err) {
  const auto corpus = corpus_for(a.common, err);
  const auto cfgs = make_grid(parse_list<RepId>(a.reps, parse_rep_id),
                              parse_list<AlignMethod>(a.methods, parse_align_method),
                              parse_list<Classifier>(a.classifiers, parse_classifier),
                              parse_list<Regime>(a.regimes, parse_regime), a.common.seed);
  const ResultTable table = run_grid(cfgs, corpus, pipeline(a.common, a.gaps));
  const fs::path dir = out_dir(a.common);
  const std::string stem = a.name + "_s" + std::to_string(a.common.seed);
  write_file(dir / (stem + ".csv"), render_report(table, ReportFormat::csv), out);
  write_file(dir / (stem + ".md"), render_report(table, ReportFormat::markdown), out);
  write_file(dir / (stem + "_ttests.txt"), t_tests(table), out);
  std::size_t failed = 0;
  for (const auto& r : table.rows) {
    if (r.error) {
      ++failed;
      err << "row " << config_slug(r.config) << " failed: " << *r.error << '\n';
    }
  }
  if (table.overall) out << "overall mean accuracy " << *table.overall << " over " << table.rows.size() - failed << " rows\n";
}

struct RulesArgs {
  Common common;
  Gaps gaps;
  std::string rep = "R1";
  std::string method = "CI";
};

struct ClassPatterns {
  RuleSet rules;
  std::array<std::optional<WildcardPattern>, 2> patterns;
};

ClassPatterns induce(const AlignedCorpus& ac) {
  ClassPatterns cp;
  cp.rules = prism_induce(build_dataset(ac.combined, false));
  for (Label l : kLabels) cp.patterns[static_cast<std::size_t>(l)] = rules_to_pattern(cp.rules, l);
  return cp;
}

void run_rules(const RulesArgs& a, std::ostream& out, std::ostream& err) {
  const auto corpus = corpus_for(a.common, err);
  const RepId rep = parse_rep_id(a.rep);
  const AlignMethod method = parse_align_method(a.method);
  const AlignedCorpus ac = align_corpus(corpus, rep, method, pipeline(a.common, a.gaps));
  const ClassPatterns cp = induce(ac);
  const auto& table = RepresentationTable::get(rep);
  std::string patterns, metas;
  for (Label l : kLabels) {
    const auto& p = cp.patterns[static_cast<std::size_t>(l)];
    const std::string name(to_string(l));
    if (!p) {
      patterns += name + ": (only gap conditions)\n";
      metas += name + ": (only gap conditions)\n";
      continue;
    }
    patterns += name + ": " + pattern_letters(*p) + "  " + pattern_display(*p) + "\n";
    metas += name + ": " + to_string(pattern_to_meta_signature(*p, table)) + "\n";
  }
  const std::string stem = std::string(to_string(rep)) + "_" + std::string(to_string(method));
  const fs::path dir = out_dir(a.common);
  write_file(dir / (stem + "_rules.txt"), format_ruleset(cp.rules), out);
  write_file(dir / (stem + "_patterns.txt"), patterns, out);
  write_file(dir / (stem + "_meta.txt"), metas, out);
}

struct ScanArgs {
  Common common;
  std::string signature;
  std::string stream;
  std::string rep = "R1";
};

void run_scan(const ScanArgs& a, std::ostream& out) {
  const MetaSignature sig = parse_meta_signature(a.signature, parse_rep_id(a.rep));
  auto print = [&](const std::string& name, std::string_view hex) {
    const auto hits = scan_meta_signature(hex, sig);
    out << name << ':';
    for (auto h : hits) out << ' ' << h;
    out << '\n';
  };
  if (!a.stream.empty()) {
    print("stream", a.stream);
  } else if (!a.common.corpus.empty()) {
    for (const auto& s : load_corpus(a.common.corpus)) print(s.name + " " + std::string(to_string(s.label)), s.digits);
  } else {
    throw CliError("scan needs --stream or --corpus");
  }
}

struct ExportArgs {
  Common common;
  Gaps gaps;
  std::string method = "CI";
  double threshold = 0.15;
};

void run_export(const ExportArgs& a, std::ostream& out, std::ostream& err) {
  if (a.threshold <= 0.0 || a.threshold > 1.0) throw CliError("--threshold must be in (0, 1]");
  const auto corpus = corpus_for(a.common, err);
  const AlignMethod method = parse_align_method(a.method);
  if (method == AlignMethod::none) throw CliError("export-protein needs an alignment method");
  const PipelineOptions opts = pipeline(a.common, a.gaps);

  std::vector<FastaRecord> consensus_fasta;
  std::string consensus_text;
  std::map<std::pair<RepId, Label>, std::string> parts;
  for (RepId rep : {RepId::R1, RepId::R3}) {
    const AlignedCorpus ac = align_corpus(corpus, rep, method, opts);
    for (Label l : kLabels) {
      const auto& msa = l == Label::virus ? ac.virus : ac.worm;
      const std::string abbreviated = format_abbreviated(abbreviate_consensus(consensus_of(msa), a.threshold));
      const std::string id = std::string(to_string(rep)) + "_" + std::string(to_string(l)) + "_abbreviated";
      consensus_fasta.push_back({id, first_alternatives(abbreviated)});
      consensus_text += id + ": " + abbreviated + "\n";
    }
    const ClassPatterns cp = induce(ac);
    for (Label l : kLabels) {
      const auto& p = cp.patterns[static_cast<std::size_t>(l)];
      parts[{rep, l}] = p ? pattern_letters(*p) : std::string();
    }
  }
  const auto R1V = parts[{RepId::R1, Label::virus}], R1W = parts[{RepId::R1, Label::worm}];
  const auto R3V = parts[{RepId::R3, Label::virus}], R3W = parts[{RepId::R3, Label::worm}];
  const std::string by_rep = conjoin_meta_signatures({R1V, R1W, R3V, R3W});
  const std::string by_class = conjoin_meta_signatures({R1V, R3V, R1W, R3W});

  const std::string m(to_string(method));
  const fs::path dir = out_dir(a.common);
  write_file(dir / (m + "_abbreviated_consensus.fasta"), write_fasta(consensus_fasta), out);
  write_file(dir / (m + "_abbreviated_consensus.txt"), consensus_text, out);
  std::vector<FastaRecord> conj;
  if (!by_rep.empty()) conj.push_back({"R1V_R1W_R3V_R3W", first_alternatives(by_rep)});
  if (!by_class.empty()) conj.push_back({"R1V_R3V_R1W_R3W", first_alternatives(by_class)});
  if (conj.empty()) throw CliError("no PRISM patterns to conjoin");
  write_file(dir / (m + "_conjoined.fasta"), write_fasta(conj), out);
  write_file(dir / (m + "_conjoined.txt"), "R1V_R1W_R3V_R3W: " + by_rep + "\nR1V_R3V_R1W_R3W: " + by_class + "\n", out);
}

// Inserts config-file values as --key=value right after the subcommand,
// skipping keys the user already gave on the command line.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::vector<std::string> extra;
  for (const auto& [key, value] : parse_config(read_file(path))) {
    if (key == "config") throw CliError("config files cannot include other config files");
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) extra.push_back(flag + "=" + value);
  }
  std::vector<std::string> out;
  out.push_back(args.front());
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CliError("config line " + std::to_string(n) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw CliError("config line " + std::to_string(n) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

int run_command(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Malware signature alignment, classification and meta-signature synthesis", "malseq"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic planted-motif corpus");
  add_common(c_synth, synth.common, false);
  c_synth->add_option("--file", synth.file, "Corpus file name inside the output directory")->capture_default_str();
  c_synth->add_option("--virus-count", synth.params.virus_count)->capture_default_str();
  c_synth->add_option("--worm-count", synth.params.worm_count)->capture_default_str();
  c_synth->add_option("--min-length", synth.params.min_length)->capture_default_str();
  c_synth->add_option("--max-length", synth.params.max_length)->capture_default_str();
  c_synth->add_option("--virus-motifs", synth.virus_motifs, "Hex motifs planted in virus signatures")
      ->delimiter(',');
  c_synth->add_option("--worm-motifs", synth.worm_motifs, "Hex motifs planted in worm signatures")->delimiter(',');
  c_synth->add_option("--insertion-probability", synth.insertion)->capture_default_str();
  c_synth->add_option("--mutation-rate", synth.params.mutation_rate)->capture_default_str();
  c_synth->add_option("--indel-rate", synth.params.indel_rate)->capture_default_str();

  EncodeArgs encode;
  auto* c_encode = app.add_subcommand("encode", "Encode a corpus as residue FASTA per representation and class");
  add_common(c_encode, encode.common, true);
  c_encode->add_option("--reps", encode.reps, "Representations (R1,R2,R3)")->delimiter(',');

  AlignArgs align;
  auto* c_align = app.add_subcommand("align", "Single and double alignment with consensus sequences");
  add_common(c_align, align.common, true);
  add_gaps(c_align, align.gaps);
  c_align->add_option("--rep", align.rep)->capture_default_str();
  c_align->add_option("--method", align.method, "none, CI, CG, CB or TB")->capture_default_str();
  c_align->add_option("--threshold", align.threshold, "Abbreviated consensus threshold")->capture_default_str();

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Run one experiment configuration");
  add_common(c_train, train.common, true);
  add_gaps(c_train, train.gaps);
  c_train->add_option("--rep", train.rep)->capture_default_str();
  c_train->add_option("--method", train.method)->capture_default_str();
  c_train->add_option("--classifier", train.classifier, "naive_bayes, oner, c45 or mlp")->capture_default_str();
  c_train->add_option("--regime", train.regime, "holdout_66_34 or kfold_10")->capture_default_str();
  c_train->add_flag("--dataset-csv", train.dataset_csv, "Also write the dataset as CSV");

  GridArgs grid;
  auto* c_grid = app.add_subcommand("grid", "Run the experiment grid and write reports");
  add_common(c_grid, grid.common, true);
  add_gaps(c_grid, grid.gaps);
  c_grid->add_option("--reps", grid.reps, "Representations (default R1,R2,R3)")->delimiter(',');
  c_grid->add_option("--methods", grid.methods, "Alignment methods (default none,CI,CG,CB,TB)")->delimiter(',');
  c_grid->add_option("--classifiers", grid.classifiers, "Classifiers (default naive_bayes,oner,c45,mlp)")->delimiter(',');
  c_grid->add_option("--regimes", grid.regimes, "Regimes (default holdout_66_34,kfold_10)")->delimiter(',');
  c_grid->add_option("--name", grid.name, "Report file stem")->capture_default_str();

  RulesArgs rules;
  auto* c_rules = app.add_subcommand("rules", "Induce PRISM rules and meta-signatures");
  add_common(c_rules, rules.common, true);
  add_gaps(c_rules, rules.gaps);
  c_rules->add_option("--rep", rules.rep)->capture_default_str();
  c_rules->add_option("--method", rules.method)->capture_default_str();

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Report offsets where a meta-signature matches");
  add_common(c_scan, scan.common, true);
  c_scan->add_option("--signature", scan.signature, "Bracket syntax, e.g. 1b3401[1c]1")->required();
  c_scan->add_option("--stream", scan.stream, "Hex stream to scan");
  c_scan->add_option("--rep", scan.rep)->capture_default_str();

  ExportArgs exp;
  auto* c_export =
      app.add_subcommand("export-protein", "Export abbreviated consensus and conjoined meta-signatures as FASTA");
  add_common(c_export, exp.common, true);
  add_gaps(c_export, exp.gaps);
  c_export->add_option("--method", exp.method)->capture_default_str();
  c_export->add_option("--threshold", exp.threshold)->capture_default_str();

  try {
    std::vector<std::string> args;
    try {
      args = apply_config(raw_args);
    } catch (const Error& e) {
      err << "error [" << e.stage() << "]: " << e.what() << '\n';
      return 2;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    err << "run 'malseq --help' or 'malseq <command> --help' for usage\n";
    return 2;
  }

  try {
    if (c_synth->parsed()) run_synth(synth, out);
    if (c_encode->parsed()) run_encode(encode, out, err);
    if (c_align->parsed()) run_align(align, out, err);
    if (c_train->parsed()) run_train(train, out, err);
    if (c_grid->parsed()) run_grid_command(grid, out, err);
    if (c_rules->parsed()) run_rules(rules, out, err);
    if (c_scan->parsed()) run_scan(scan, out);
    if (c_export->parsed()) run_export(exp, out, err);
  } catch (const Error& e) {
    err << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error [cli]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace malseq::cli
