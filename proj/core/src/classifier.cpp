#include "gridpop/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridpop/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace gridpop {
namespace logistic {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logit(std::span<const double> params, const std::vector<double>& row) {
  const std::size_t d = row.size();
  double z = params[d];
  for (std::size_t j = 0; j < d; ++j) z += params[j] * row[j];
  return z;
}

}  // namespace

double loss(std::span<const double> params, std::span<const std::vector<double>> rows,
            std::span<const int> labels, double lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double z = logit(params, rows[i]);
    total += softplus(z) - labels[i] * z;
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j + 1 < params.size(); ++j) penalty += params[j] * params[j];
  return total / static_cast<double>(rows.size()) + 0.5 * lambda * penalty;
}

std::vector<double> gradient(std::span<const double> params, std::span<const std::vector<double>> rows,
                             std::span<const int> labels, double lambda, const std::vector<bool>& trainable) {
  const std::size_t d = params.size() - 1;
  std::vector<double> g(params.size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double r = sigmoid(logit(params, rows[i])) - labels[i];
    for (std::size_t j = 0; j < d; ++j) g[j] += r * rows[i][j];
    g[d] += r;
  }
  const double n = static_cast<double>(rows.size());
  for (std::size_t j = 0; j < d; ++j) {
    g[j] = g[j] / n + lambda * params[j];
    if (!trainable.empty() && !trainable[j]) g[j] = 0.0;
  }
  g[d] /= n;
  return g;
}

}  // namespace logistic

Model train_logistic(std::span<const Example> train, double learning_rate, int epochs, std::uint64_t seed,
                     std::string_view feature_spec_id) {
  if (train.size() < 2) throw Error(ErrorKind::domain, "training needs at least two examples");
  if (!(learning_rate > 0.0) || epochs < 0) throw Error(ErrorKind::domain, "invalid learning rate or epochs");
  const std::size_t d = train.front().features.size();
  std::size_t positives = 0;
  for (const Example& e : train) {
    if (e.features.size() != d) throw Error(ErrorKind::domain, "ragged feature vectors");
    for (double v : e.features) {
      if (!std::isfinite(v)) throw Error(ErrorKind::domain, "non-finite feature value");
    }
    if (e.label != 0 && e.label != 1) throw Error(ErrorKind::domain, "labels must be 0 or 1");
    positives += e.label;
  }
  if (positives == 0 || positives == train.size()) {
    throw Error(ErrorKind::domain, "training set contains a single class");
  }

  // Canonical order makes every floating-point reduction below independent
  // of how the caller ordered the examples.
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (train[a].features != train[b].features) return train[a].features < train[b].features;
    return train[a].label < train[b].label;
  });

  const std::size_t n = train.size();
  Model model;
  model.feature_spec_id = std::string(feature_spec_id);
  model.normalization.resize(d);
  std::vector<bool> trainable(d, true);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i : order) sum += train[i].features[j];
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i : order) ss += (train[i].features[j] - mean) * (train[i].features[j] - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd > 0.0) {
      model.normalization[j] = {mean, sd};
    } else {
      model.normalization[j] = {mean, 1.0};
      trainable[j] = false;
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  rows.reserve(n);
  for (std::size_t i : order) {
    std::vector<double> r(d);
    for (std::size_t j = 0; j < d; ++j) {
      r[j] = (train[i].features[j] - model.normalization[j].mean) / model.normalization[j].std;
    }
    rows.push_back(std::move(r));
    labels.push_back(train[i].label);
  }

  const double prior = static_cast<double>(positives) / static_cast<double>(n);
  std::vector<double> params(d + 1, 0.0);
  params[d] = std::log(prior / (1.0 - prior));
  double current = logistic::loss(params, rows, labels, kL2Penalty);

  double rate = learning_rate;
  int completed = 0;
  std::vector<double> candidate(d + 1);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const std::vector<double> g = logistic::gradient(params, rows, labels, kL2Penalty, trainable);
    bool accepted = false;
    for (int halving = 0; halving <= 60; ++halving) {
      for (std::size_t j = 0; j <= d; ++j) candidate[j] = params[j] - rate * g[j];
      const double next = logistic::loss(candidate, rows, labels, kL2Penalty);
      if (next <= current) {
        params = candidate;
        current = next;
        accepted = true;
        break;
      }
      rate /= 2.0;
    }
    if (!accepted) break;
    ++completed;
  }

  model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = params[d];
  model.meta = {completed, learning_rate, seed, current};
  return model;
}

double predict_proba(const Model& model, std::span<const double> features) {
  if (features.size() != model.weights.size() || model.normalization.size() != model.weights.size()) {
    throw Error(ErrorKind::domain, "feature length " + std::to_string(features.size()) +
                                       " does not match model length " + std::to_string(model.weights.size()));
  }
  double z = model.bias;
  for (std::size_t j = 0; j < features.size(); ++j) {
    z += model.weights[j] * (features[j] - model.normalization[j].mean) / model.normalization[j].std;
  }
  return logistic::sigmoid(z);
}

Metrics evaluate(const Model& model, std::span<const Example> data) {
  if (data.empty()) throw Error(ErrorKind::domain, "evaluation on an empty dataset");
  Metrics m;
  m.n = data.size();
  for (const Example& e : data) {
    const bool predicted = predict_proba(model, e.features) >= 0.5;
    if (predicted && e.label == 1) ++m.tp;
    else if (predicted) ++m.fp;
    else if (e.label == 1) ++m.fn;
    else ++m.tn;
  }
  m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(m.n);
  m.precision = m.tp + m.fp ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
  m.recall = m.tp + m.fn ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
  return m;
}

std::string format_model(const Model& model) {
  std::string out = model.feature_spec_id + "\n";
  for (std::size_t j = 0; j < model.normalization.size(); ++j) {
    if (j) out += ' ';
    out += text::shortest(model.normalization[j].mean) + "," + text::shortest(model.normalization[j].std);
  }
  out += "\n";
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    if (j) out += ' ';
    out += text::shortest(model.weights[j]);
  }
  out += "\n" + text::shortest(model.bias) + "\n";
  out += "epochs=" + std::to_string(model.meta.epochs) +
         " learning_rate=" + text::shortest(model.meta.learning_rate) +
         " seed=" + std::to_string(model.meta.seed) + " final_loss=" + text::shortest(model.meta.final_loss) + "\n";
  return out;
}

Model parse_model(std::string_view content) {
  auto fail = [](const std::string& why) -> void { throw Error(ErrorKind::parse, "model file: " + why); };
  std::vector<std::string_view> lines;
  for (std::string_view l : text::split(content, '\n')) {
    if (!text::trim(l).empty()) lines.push_back(text::trim(l));
  }
  if (lines.size() != 5) fail("expected 5 lines, found " + std::to_string(lines.size()));

  Model m;
  m.feature_spec_id = std::string(lines[0]);
  for (std::string_view pair : text::split(lines[1], ' ')) {
    if (pair.empty()) continue;
    auto parts = text::split(pair, ',');
    auto mean = parts.size() == 2 ? text::parse_double(parts[0]) : std::nullopt;
    auto sd = parts.size() == 2 ? text::parse_double(parts[1]) : std::nullopt;
    if (!mean || !sd || !(*sd > 0.0)) fail("bad normalization pair '" + std::string(pair) + "'");
    m.normalization.push_back({*mean, *sd});
  }
  for (std::string_view w : text::split(lines[2], ' ')) {
    if (w.empty()) continue;
    auto v = text::parse_double(w);
    if (!v) fail("bad weight '" + std::string(w) + "'");
    m.weights.push_back(*v);
  }
  if (m.weights.size() != m.normalization.size()) fail("weights and normalization lengths differ");
  auto bias = text::parse_double(lines[3]);
  if (!bias) fail("bad bias");
  m.bias = *bias;
  for (std::string_view kv : text::split(lines[4], ' ')) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) fail("bad metadata '" + std::string(kv) + "'");
    const std::string_view key = kv.substr(0, eq), value = kv.substr(eq + 1);
    bool ok = true;
    if (key == "epochs") {
      auto v = text::parse_int<int>(value);
      ok = v.has_value();
      if (ok) m.meta.epochs = *v;
    } else if (key == "learning_rate") {
      auto v = text::parse_double(value);
      ok = v.has_value();
      if (ok) m.meta.learning_rate = *v;
    } else if (key == "seed") {
      auto v = text::parse_int<std::uint64_t>(value);
      ok = v.has_value();
      if (ok) m.meta.seed = *v;
    } else if (key == "final_loss") {
      auto v = text::parse_double(value);
      ok = v.has_value();
      if (ok) m.meta.final_loss = *v;
    }
    if (!ok) fail("bad metadata value '" + std::string(kv) + "'");
  }
  return m;
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::json doc = {{"n", m.n},       {"tp", m.tp},
                        {"tn", m.tn},     {"fp", m.fp},
                        {"fn", m.fn},     {"accuracy", m.accuracy},
                        {"precision", m.precision}, {"recall", m.recall}};
  return doc.dump();
}

}  // namespace gridpop
