#ifndef FAIRPREP_MODEL_HPP
#define FAIRPREP_MODEL_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fairprep {

struct Hyperparams {
  double l2_strength = 1.0;
  int max_iterations = 1000;
  double tolerance = 1e-6;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  Hyperparams hyperparams;
};

/// Optional trace of a fit, for diagnostics and tests.
struct FitDiagnostics {
  std::vector<double> loss_history;  // objective after each accepted step
  double final_gradient_norm = 0.0;
  int iterations = 0;
};

/// Per-feature z-scoring fitted on the training set and applied to both
/// splits. Constant features get unit scale.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const std::vector<std::vector<double>>& rows);
  std::vector<std::vector<double>> transform(
      const std::vector<std::vector<double>>& rows) const;
};

/// Mean L2-regularized logistic loss (bias unpenalized).
double logistic_loss(std::span<const double> weights, double bias,
                     const std::vector<std::vector<double>>& rows,
                     std::span<const int> labels, double l2_strength);

/// Analytic gradient of logistic_loss; returns d/dweights and d/dbias.
std::pair<std::vector<double>, double> logistic_gradient(
    std::span<const double> weights, double bias,
    const std::vector<std::vector<double>>& rows, std::span<const int> labels,
    double l2_strength);

/// Full-batch gradient descent with backtracking line search, from zero
/// initial weights, until the gradient norm drops below the tolerance
/// or max_iterations is hit. The seed is accepted for interface
/// symmetry with the rest of the pipeline; the zero start makes the fit
/// deterministic regardless. Throws DegenerateLabelError when only one
/// label value is present, ConfigError on malformed input.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& rows,
                           std::span<const int> labels,
                           Hyperparams hyperparams = {},
                           std::uint64_t seed = 0,
                           FitDiagnostics* diagnostics = nullptr);

/// Label (score >= 1/2) and sigmoid score for one feature vector.
/// Throws ShapeError on a length mismatch.
std::pair<int, double> predict(const LogisticModel& model,
                               std::span<const double> features);

}  // namespace fairprep

#endif  // FAIRPREP_MODEL_HPP
