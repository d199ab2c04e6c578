#pragma once

// L2-regularized logistic regression trained by full-batch gradient descent
// on standardized features.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridpop {

inline constexpr double kL2Penalty = 1e-4;

struct Example {
  std::vector<double> features;
  int label = 0;
};

struct Standardization {
  double mean = 0.0;
  double std = 1.0;

  friend bool operator==(const Standardization&, const Standardization&) = default;
};

struct TrainingMeta {
  int epochs = 0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  double final_loss = 0.0;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

struct Model {
  std::string feature_spec_id;
  std::vector<Standardization> normalization;
  std::vector<double> weights;
  double bias = 0.0;
  TrainingMeta meta;

  friend bool operator==(const Model&, const Model&) = default;
};

/// Objective and gradient on already-standardized rows. `params` holds the
/// weights followed by the bias; the penalty is (lambda / 2) * |w|^2 and
/// leaves the bias alone. Weights with `trainable[j] == false` receive a
/// zero gradient.
namespace logistic {

double loss(std::span<const double> params, std::span<const std::vector<double>> rows,
            std::span<const int> labels, double lambda);

std::vector<double> gradient(std::span<const double> params, std::span<const std::vector<double>> rows,
                             std::span<const int> labels, double lambda,
                             const std::vector<bool>& trainable = {});

double sigmoid(double z);

}  // namespace logistic

/// Standardizes by training statistics (zero-variance features get std 1
/// and a weight pinned at 0), starts from zero weights and the prior
/// log-odds bias, then takes `epochs` gradient steps. A step that would
/// raise the loss is retried at half the rate; when 60 halvings fail the
/// loop stops early. Examples are put in a canonical order first, so the
/// result does not depend on their input order.
///
/// Throws Error(domain) for fewer than two examples, a single class,
/// ragged or non-finite features.
Model train_logistic(std::span<const Example> train, double learning_rate, int epochs, std::uint64_t seed,
                     std::string_view feature_spec_id);

/// sigmoid(w . standardize(f) + b). Throws Error(domain) on length mismatch.
double predict_proba(const Model& model, std::span<const double> features);

struct Metrics {
  std::size_t n = 0;
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double accuracy = 0.0;
  /// Zero when the denominator is zero.
  double precision = 0.0;
  double recall = 0.0;
};

/// Decision threshold 0.5. Throws Error(domain) for an empty dataset.
Metrics evaluate(const Model& model, std::span<const Example> data);

/// Five-line text form: spec id, normalization pairs, weights, bias,
/// key=value training metadata. Doubles round-trip exactly.
std::string format_model(const Model& model);
Model parse_model(std::string_view text);

std::string metrics_to_json(const Metrics& metrics);

}  // namespace gridpop
