#pragma once

// The experimental grid: representation x alignment x classifier x regime.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "malseq/align.hpp"
#include "malseq/corpus.hpp"
#include "malseq/ml.hpp"

namespace malseq {

/// none: the benchmark (raw sequences, padded with 'Y'). CI, CG and CB are
/// progressive alignment with identity, gonnet250 and blosum62; TB is the
/// consistency method with blosum62.
enum class AlignMethod : std::uint8_t { none, CI, CG, CB, TB };

inline constexpr std::array<AlignMethod, 5> kAlignMethods{AlignMethod::none, AlignMethod::CI, AlignMethod::CG,
                                                          AlignMethod::CB, AlignMethod::TB};

std::string_view to_string(AlignMethod m);
AlignMethod parse_align_method(std::string_view text);
MatrixName matrix_for(AlignMethod m);
MsaMethod msa_for(AlignMethod m);

struct ExperimentConfig {
  RepId rep = RepId::R1;
  AlignMethod alignment = AlignMethod::CI;
  Classifier classifier = Classifier::c45;
  Regime regime = Regime::holdout_66_34;
  std::uint64_t seed = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Gap penalty overrides; unset values fall back to the matrix defaults.
struct PipelineOptions {
  std::optional<double> gap_open;
  std::optional<double> gap_extend;
  std::size_t jobs = 1;

  GapPenalties gaps_for(MatrixName m) const;
};

/// Both phases of alignment for one representation and method.
struct AlignedCorpus {
  RepId rep = RepId::R1;
  AlignMethod method = AlignMethod::none;
  MultipleAlignment virus;     // single phase ('W'); empty for none
  MultipleAlignment worm;
  MultipleAlignment combined;  // double phase ('Y'), or padded raw rows
};

AlignedCorpus align_corpus(const std::vector<HexSignature>& corpus, RepId rep, AlignMethod method,
                           const PipelineOptions& opts = {});

struct ResultRow {
  ExperimentConfig config;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::size_t alignment_length = 0;
  std::vector<std::string> warnings;
  std::optional<std::string> error;

  bool operator==(const ResultRow&) const = default;
};

ResultRow run_experiment(const ExperimentConfig& cfg, const std::vector<HexSignature>& corpus,
                         const PipelineOptions& opts = {});

/// Classifies an already aligned corpus; run_experiment is align + this.
ResultRow run_on_alignment(const ExperimentConfig& cfg, const AlignedCorpus& aligned, std::size_t jobs = 1);

struct GroupAverage {
  std::string key;  // "R1", "CG", ...
  double accuracy = 0.0;
  std::size_t rows = 0;

  bool operator==(const GroupAverage&) const = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;  // grid order
  std::vector<GroupAverage> by_representation;
  std::vector<GroupAverage> by_alignment;
  std::optional<double> overall;

  bool operator==(const ResultTable&) const = default;
};

/// Recomputes the averages from the rows; rows with an error are skipped.
void compute_averages(ResultTable& table);

/// Alignments are computed once per (representation, method) and shared by
/// the rows that need them. A failing row records its error; the others
/// still run.
ResultTable run_grid(const std::vector<ExperimentConfig>& cfgs, const std::vector<HexSignature>& corpus,
                     const PipelineOptions& opts = {});

/// Cartesian product in the order representation, alignment, classifier,
/// regime.
std::vector<ExperimentConfig> make_grid(const std::vector<RepId>& reps, const std::vector<AlignMethod>& methods,
                                        const std::vector<Classifier>& classifiers,
                                        const std::vector<Regime>& regimes, std::uint64_t seed);

// -- statistics --

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

/// Paired samples t test on a[i] - b[i].
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);
TTestResult one_sample_t_test(const std::vector<double>& xs, double mu);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);
/// P(|T| >= |t|) for Student's t with df degrees of freedom.
double t_two_sided_p(double t, double df);

// -- reports --

enum class ReportFormat : std::uint8_t { csv, markdown };

std::string render_report(const ResultTable& table, ReportFormat format);

/// Inverse of the CSV report.
ResultTable parse_report_csv(std::string_view text);

/// For example "R1_CG_c45_holdout_66_34_s7".
std::string config_slug(const ExperimentConfig& cfg);

}  // namespace malseq
