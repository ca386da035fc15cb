#pragma once

// Fixed-length datasets built from aligned sequences, four classifiers and
// the holdout / cross-validation harness.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "malseq/align.hpp"
#include "malseq/corpus.hpp"

namespace malseq {

/// One attribute per alignment column (pos1..posL). Categorical datasets
/// hold letters; numeric ones hold the perceptron encoding of the same rows.
struct Dataset {
  std::vector<std::string> attributes;
  std::vector<std::string> ids;
  std::vector<std::string> categorical;       // is_numeric == false
  std::vector<std::vector<double>> numeric;   // is_numeric == true
  std::vector<Label> labels;
  bool is_numeric = false;

  std::size_t size() const { return labels.size(); }
  std::size_t width() const { return attributes.size(); }
  std::size_t count(Label label) const;

  Dataset subset(std::span<const std::size_t> indices) const;
};

Dataset build_dataset(const std::vector<ResidueSequence>& rows, bool numeric);
inline Dataset build_dataset(const MultipleAlignment& msa, bool numeric) { return build_dataset(msa.rows, numeric); }

/// Right-pads every row with `pad` to the longest row's length.
std::vector<ResidueSequence> pad_rows(std::vector<ResidueSequence> rows, char pad = kDoubleGap);

/// Header `pos1,...,posL,label`; labels written as 0 (virus) / 1 (worm).
std::string dataset_to_csv(const Dataset& d);

// -- evaluation --

/// Worm is the positive class, virus the negative one.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  void add(Label truth, Label predicted);
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

/// (TP + TN) / (TP + TN + FP + FN); throws on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

// -- models --

struct NaiveBayesModel {
  double smoothing = 1.0;
  std::array<double, 2> log_prior{};
  // Per attribute: log P(value | class) for every value seen in training.
  std::vector<std::map<char, std::array<double, 2>>> log_conditional;

  /// P(virus | x), P(worm | x). Values unseen in training are skipped.
  std::array<double, 2> posterior(std::string_view instance) const;
  Label predict(std::string_view instance) const;
};

struct OneRModel {
  std::size_t width = 0;
  std::size_t attribute = 0;
  std::map<char, Label> rule;
  Label default_class = Label::virus;
  std::size_t training_errors = 0;

  Label predict(std::string_view instance) const;
};

struct TreeModel {
  struct Node {
    int attribute = -1;  // -1 for a leaf
    Label label = Label::virus;  // majority class at this node
    std::size_t instances = 0;
    std::map<char, std::size_t> children;

    bool is_leaf() const { return attribute < 0; }
  };

  std::size_t width = 0;
  std::vector<Node> nodes;  // nodes[0] is the root

  /// Values without a branch stop at the current node's majority class.
  Label predict(std::string_view instance) const;
  std::size_t depth() const;
};

/// inputs -> hidden -> 1, logistic units throughout.
struct MlpModel {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> hidden_weights;  // hidden x (inputs + 1), bias last
  std::vector<double> output_weights;  // hidden + 1, bias last

  double output(std::span<const double> x) const;
  Label predict(std::span<const double> x) const { return output(x) >= 0.5 ? Label::worm : Label::virus; }
};

using TrainedModel = std::variant<NaiveBayesModel, OneRModel, TreeModel, MlpModel>;

NaiveBayesModel train_naive_bayes(const Dataset& train, double smoothing = 1.0);
OneRModel train_oner(const Dataset& train);
TreeModel train_c45(const Dataset& train, std::size_t min_leaf = 2);

struct MlpParams {
  double learning_rate = 0.2;
  double momentum = 0.1;
  std::size_t epochs = 200;
  std::size_t hidden = 72;
  std::uint64_t seed = 1;
};

MlpModel init_mlp(std::size_t inputs, std::size_t hidden, std::uint64_t seed);
MlpModel train_mlp(const Dataset& train, const MlpParams& params = {});

/// Squared-error loss 0.5 * (output - target)^2 and its analytic gradient,
/// laid out like the model's weight vectors.
struct MlpGradient {
  std::vector<double> hidden_weights;
  std::vector<double> output_weights;
};
double mlp_loss(const MlpModel& model, std::span<const double> x, double target);
MlpGradient mlp_gradient(const MlpModel& model, std::span<const double> x, double target);

Label predict_one(const TrainedModel& model, const Dataset& d, std::size_t row);
std::vector<Label> predict(const TrainedModel& model, const Dataset& d);

// -- information measures used by the tree --

double entropy(std::span<const std::size_t> class_counts);
double information_gain(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute);
double split_information(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute);
double gain_ratio(const Dataset& d, std::span<const std::size_t> rows, std::size_t attribute);

// -- experiment harness --

enum class Classifier : std::uint8_t { naive_bayes, oner, c45, mlp };
enum class Regime : std::uint8_t { holdout_66_34, kfold_10 };

std::string_view to_string(Classifier c);
std::string_view to_string(Regime r);
Classifier parse_classifier(std::string_view text);
Regime parse_regime(std::string_view text);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct Splits {
  std::vector<Fold> folds;
  std::vector<std::string> warnings;
};

/// Stratified and seeded. Holdout trains on floor(0.66 n) instances; the
/// k-fold regime makes 10 folds whose sizes differ by at most one.
Splits split_dataset(const Dataset& d, Regime regime, std::uint64_t seed);

struct Evaluation {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
};

Evaluation evaluate(const TrainedModel& model, const Dataset& test);

TrainedModel train_classifier(Classifier c, const Dataset& train, std::uint64_t seed);

struct RegimeResult {
  ConfusionMatrix confusion;            // summed over folds
  double accuracy = 0.0;                // mean of fold accuracies
  std::vector<double> fold_accuracies;
  std::vector<std::string> warnings;
};

RegimeResult run_regime(Classifier c, const Dataset& d, Regime regime, std::uint64_t seed, std::size_t jobs = 1);

}  // namespace malseq
