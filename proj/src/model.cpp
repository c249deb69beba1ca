#include "fairprep/model.hpp"

#include <algorithm>
#include <cmath>

#include "fairprep/errors.hpp"

namespace fairprep {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// log(1 + e^z) without overflow.
double log1p_exp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double dot(std::span<const double> w, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * x[j];
  return acc;
}

double norm2(std::span<const double> v, double extra) {
  double acc = extra * extra;
  for (const double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ConfigError("standardizer: no rows");
  const std::size_t width = rows[0].size();
  Standardizer s;
  s.mean.assign(width, 0.0);
  s.scale.assign(width, 1.0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < width; ++j) s.mean[j] += row[j];
  for (auto& m : s.mean) m /= static_cast<double>(rows.size());
  std::vector<double> var(width, 0.0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < width; ++j) {
      const double d = row[j] - s.mean[j];
      var[j] += d * d;
    }
  for (std::size_t j = 0; j < width; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(rows.size()));
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::vector<std::vector<double>> Standardizer::transform(
    const std::vector<std::vector<double>>& rows) const {
  std::vector<std::vector<double>> out = rows;
  for (auto& row : out) {
    if (row.size() != mean.size())
      throw ShapeError("standardizer: row width mismatch");
    for (std::size_t j = 0; j < row.size(); ++j)
      row[j] = (row[j] - mean[j]) / scale[j];
  }
  return out;
}

double logistic_loss(std::span<const double> weights, double bias,
                     const std::vector<std::vector<double>>& rows,
                     std::span<const int> labels, double l2_strength) {
  const double n = static_cast<double>(rows.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double z = dot(weights, rows[i]) + bias;
    loss += log1p_exp(z) - static_cast<double>(labels[i]) * z;
  }
  double penalty = 0.0;
  for (const double w : weights) penalty += w * w;
  return loss / n + 0.5 * l2_strength * penalty / n;
}

std::pair<std::vector<double>, double> logistic_gradient(
    std::span<const double> weights, double bias,
    const std::vector<std::vector<double>>& rows, std::span<const int> labels,
    double l2_strength) {
  const double n = static_cast<double>(rows.size());
  std::vector<double> grad_w(weights.size(), 0.0);
  double grad_b = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double residual =
        sigmoid(dot(weights, rows[i]) + bias) - static_cast<double>(labels[i]);
    for (std::size_t j = 0; j < weights.size(); ++j)
      grad_w[j] += residual * rows[i][j];
    grad_b += residual;
  }
  for (std::size_t j = 0; j < weights.size(); ++j)
    grad_w[j] = grad_w[j] / n + l2_strength * weights[j] / n;
  return {std::move(grad_w), grad_b / n};
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& rows,
                           std::span<const int> labels,
                           Hyperparams hyperparams, std::uint64_t /*seed*/,
                           FitDiagnostics* diagnostics) {
  if (rows.size() < 2 || labels.size() != rows.size())
    throw ConfigError("fit: need >= 2 rows with one label each");
  const bool has_pos = std::find(labels.begin(), labels.end(), 1) !=
                       labels.end();
  const bool has_neg = std::find(labels.begin(), labels.end(), 0) !=
                       labels.end();
  if (!has_pos || !has_neg)
    throw DegenerateLabelError("fit: training set has a single label value");

  LogisticModel model;
  model.hyperparams = hyperparams;
  model.weights.assign(rows[0].size(), 0.0);
  model.bias = 0.0;

  double loss = logistic_loss(model.weights, model.bias, rows, labels,
                              hyperparams.l2_strength);
  double step = 1.0;
  int iter = 0;
  if (diagnostics) *diagnostics = {};

  for (; iter < hyperparams.max_iterations; ++iter) {
    auto [grad_w, grad_b] =
        logistic_gradient(model.weights, model.bias, rows, labels,
                          hyperparams.l2_strength);
    const double grad_norm = norm2(grad_w, grad_b);
    if (diagnostics) diagnostics->final_gradient_norm = grad_norm;
    if (grad_norm < hyperparams.tolerance) break;

    // Armijo backtracking, warm-started from the previous step size.
    const double slope = grad_norm * grad_norm;
    step = std::min(step * 2.0, 1e6);
    std::vector<double> trial_w(model.weights.size());
    double trial_b = 0.0;
    double trial_loss = 0.0;
    while (true) {
      for (std::size_t j = 0; j < trial_w.size(); ++j)
        trial_w[j] = model.weights[j] - step * grad_w[j];
      trial_b = model.bias - step * grad_b;
      trial_loss = logistic_loss(trial_w, trial_b, rows, labels,
                                 hyperparams.l2_strength);
      if (trial_loss <= loss - 0.5 * step * slope || step < 1e-16) break;
      step *= 0.5;
    }
    if (trial_loss > loss) break;  // no descent step left
    model.weights = std::move(trial_w);
    model.bias = trial_b;
    loss = trial_loss;
    if (diagnostics) diagnostics->loss_history.push_back(loss);
  }
  if (diagnostics) diagnostics->iterations = iter;
  return model;
}

std::pair<int, double> predict(const LogisticModel& model,
                               std::span<const double> features) {
  if (features.size() != model.weights.size())
    throw ShapeError("predict: feature width " +
                     std::to_string(features.size()) + " does not match " +
                     std::to_string(model.weights.size()));
  const double score = sigmoid(dot(model.weights, features) + model.bias);
  return {score >= 0.5 ? 1 : 0, score};
}

}  // namespace fairprep
