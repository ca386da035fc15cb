#include <cmath>
#include <numeric>

#include "malseq/error.hpp"
#include "malseq/ml.hpp"
#include "malseq/rng.hpp"

namespace malseq {

namespace {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Activations {
  std::vector<double> hidden;
  double output = 0.0;
};

Activations forward(const MlpModel& m, std::span<const double> x) {
  if (x.size() != m.inputs) throw MlError("instance arity does not match the perceptron");
  Activations act;
  act.hidden.resize(m.hidden);
  const std::size_t stride = m.inputs + 1;
  double z_out = m.output_weights[m.hidden];
  for (std::size_t k = 0; k < m.hidden; ++k) {
    const double* w = &m.hidden_weights[k * stride];
    double z = w[m.inputs];
    for (std::size_t i = 0; i < m.inputs; ++i) z += w[i] * x[i];
    act.hidden[k] = logistic(z);
    z_out += m.output_weights[k] * act.hidden[k];
  }
  act.output = logistic(z_out);
  return act;
}

// Writes dE/dw for E = 0.5 (o - t)^2 into the two gradient buffers.
void backward(const MlpModel& m, std::span<const double> x, double target, const Activations& act,
              std::vector<double>& g_hidden, std::vector<double>& g_out) {
  const double o = act.output;
  const double delta_out = (o - target) * o * (1.0 - o);
  const std::size_t stride = m.inputs + 1;
  for (std::size_t k = 0; k < m.hidden; ++k) {
    const double h = act.hidden[k];
    g_out[k] = delta_out * h;
    const double delta_h = delta_out * m.output_weights[k] * h * (1.0 - h);
    double* g = &g_hidden[k * stride];
    for (std::size_t i = 0; i < m.inputs; ++i) g[i] = delta_h * x[i];
    g[m.inputs] = delta_h;
  }
  g_out[m.hidden] = delta_out;
}

}  // namespace

double MlpModel::output(std::span<const double> x) const { return forward(*this, x).output; }

MlpModel init_mlp(std::size_t inputs, std::size_t hidden, std::uint64_t seed) {
  if (inputs == 0 || hidden == 0) throw MlError("perceptron needs inputs and hidden units");
  MlpModel m;
  m.inputs = inputs;
  m.hidden = hidden;
  Rng rng(derive_seed(seed, "mlp-init"));
  m.hidden_weights.resize(hidden * (inputs + 1));
  m.output_weights.resize(hidden + 1);
  for (auto& w : m.hidden_weights) w = rng.uniform(-0.05, 0.05);
  for (auto& w : m.output_weights) w = rng.uniform(-0.05, 0.05);
  return m;
}

double mlp_loss(const MlpModel& model, std::span<const double> x, double target) {
  const double e = forward(model, x).output - target;
  return 0.5 * e * e;
}

MlpGradient mlp_gradient(const MlpModel& model, std::span<const double> x, double target) {
  MlpGradient g{std::vector<double>(model.hidden_weights.size()), std::vector<double>(model.output_weights.size())};
  backward(model, x, target, forward(model, x), g.hidden_weights, g.output_weights);
  return g;
}

MlpModel train_mlp(const Dataset& train, const MlpParams& params) {
  if (!train.is_numeric) throw MlError("the perceptron needs a numeric dataset");
  if (train.size() == 0) throw MlError("perceptron: empty training set");
  MlpModel m = init_mlp(train.width(), params.hidden, params.seed);
  Rng order_rng(derive_seed(params.seed, "mlp-order"));

  std::vector<double> g_hidden(m.hidden_weights.size()), g_out(m.output_weights.size());
  std::vector<double> v_hidden(m.hidden_weights.size(), 0.0), v_out(m.output_weights.size(), 0.0);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order) {
      const auto& x = train.numeric[i];
      const double target = train.labels[i] == Label::worm ? 1.0 : 0.0;
      backward(m, x, target, forward(m, x), g_hidden, g_out);
      for (std::size_t k = 0; k < g_hidden.size(); ++k) {
        v_hidden[k] = params.momentum * v_hidden[k] - params.learning_rate * g_hidden[k];
        m.hidden_weights[k] += v_hidden[k];
      }
      for (std::size_t k = 0; k < g_out.size(); ++k) {
        v_out[k] = params.momentum * v_out[k] - params.learning_rate * g_out[k];
        m.output_weights[k] += v_out[k];
      }
    }
  }
  return m;
}

}  // namespace malseq
