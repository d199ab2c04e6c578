#include <gtest/gtest.h>

#include <cmath>

#include "gridpop/classifier.hpp"
#include "gridpop/error.hpp"
#include "support.hpp"

namespace gridpop {
namespace {

std::vector<Example> gaussian_clusters(Rng& rng, int n, int d, double separation) {
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    Example e;
    e.label = i % 3 == 0 ? 1 : 0;
    for (int j = 0; j < d; ++j) e.features.push_back(rng.normal() + (j == 0 && e.label ? separation : 0.0));
    out.push_back(std::move(e));
  }
  return out;
}

TEST(Gradient, MatchesCentralDifferences) {
  Rng rng(42);
  for (int draw = 0; draw < 20; ++draw) {
    const std::size_t d = 1 + rng.below(8);
    const std::size_t n = 5 + rng.below(40);
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : rows[i]) v = rng.normal() * 2.0;
      labels[i] = static_cast<int>(rng.below(2));
    }
    std::vector<double> params(d + 1);
    for (double& p : params) p = rng.normal();
    const double lambda = draw % 2 ? kL2Penalty : 0.3;

    const std::vector<double> g = logistic::gradient(params, rows, labels, lambda);
    constexpr double h = 1e-6;
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t j = 0; j <= d; ++j) {
      std::vector<double> up = params, down = params;
      up[j] += h;
      down[j] -= h;
      const double fd = (logistic::loss(up, rows, labels, lambda) - logistic::loss(down, rows, labels, lambda)) / (2 * h);
      diff2 += (fd - g[j]) * (fd - g[j]);
      norm2 += fd * fd + g[j] * g[j];
    }
    EXPECT_LE(std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-12), 1e-5) << "draw " << draw;
  }
}

TEST(Gradient, FrozenWeightsGetZero) {
  std::vector<std::vector<double>> rows = {{1.0, 2.0}, {-1.0, 0.5}};
  std::vector<int> labels = {1, 0};
  const std::vector<double> params = {0.3, -0.2, 0.1};
  const auto g = logistic::gradient(params, rows, labels, kL2Penalty, {true, false});
  EXPECT_NE(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
}

TEST(Train, ZeroEpochsIsInitialization) {
  Rng rng(1);
  const auto data = gaussian_clusters(rng, 30, 3, 2.0);
  const Model m = train_logistic(data, 0.5, 0, 7, "spec");
  for (double w : m.weights) EXPECT_EQ(w, 0.0);
  EXPECT_DOUBLE_EQ(m.bias, std::log((10.0 / 30.0) / (20.0 / 30.0)));
  EXPECT_EQ(m.meta.seed, 7u);
}

TEST(Train, SeparableClustersReachFullAccuracy) {
  Rng rng(2);
  // Margin of three standard deviations on each side of the midpoint.
  const auto data = gaussian_clusters(rng, 300, 4, 6.0);
  std::vector<Example> clean;
  for (const Example& e : data) {
    if (e.label ? e.features[0] > 3.0 : e.features[0] < 3.0) clean.push_back(e);
  }
  const Model m = train_logistic(clean, 0.5, 400, 1, "spec");
  EXPECT_EQ(evaluate(m, clean).accuracy, 1.0);
}

TEST(Train, IndependentLabelsStayNearChance) {
  Rng rng(3);
  std::vector<Example> data;
  for (int i = 0; i < 200; ++i) {
    Example e;
    for (int j = 0; j < 14; ++j) e.features.push_back(rng.normal());
    e.label = static_cast<int>(rng.below(2));
    data.push_back(std::move(e));
  }
  const Metrics m = evaluate(train_logistic(data, 0.5, 400, 1, "spec"), data);
  EXPECT_GE(m.accuracy, 0.45);
  EXPECT_LE(m.accuracy, 0.72);
}

TEST(Train, DeterministicAndPermutationInvariant) {
  Rng rng(4);
  auto data = gaussian_clusters(rng, 150, 5, 1.5);
  const Model a = train_logistic(data, 0.5, 200, 9, "spec");
  const Model b = train_logistic(data, 0.5, 200, 9, "spec");
  EXPECT_EQ(a, b);
  for (int k = 0; k < 5; ++k) {
    for (std::size_t i = data.size() - 1; i > 0; --i) std::swap(data[i], data[rng.below(i + 1)]);
    EXPECT_EQ(train_logistic(data, 0.5, 200, 9, "spec"), a);
  }
}

TEST(Train, ColumnScalingLeavesPredictionsUnchanged) {
  Rng rng(5);
  const auto data = gaussian_clusters(rng, 120, 4, 1.0);
  const Model base = train_logistic(data, 0.5, 200, 1, "spec");
  for (double c : {1e-3, 0.5, 4.0, 1e4}) {
    auto scaled = data;
    for (Example& e : scaled) e.features[2] *= c;
    const Model m = train_logistic(scaled, 0.5, 200, 1, "spec");
    for (std::size_t i = 0; i < data.size(); ++i) {
      EXPECT_NEAR(predict_proba(m, scaled[i].features), predict_proba(base, data[i].features), 1e-9);
    }
  }
}

TEST(Train, ConstantFeatureIsPinned) {
  Rng rng(6);
  auto data = gaussian_clusters(rng, 60, 3, 2.0);
  for (Example& e : data) e.features[1] = 5.0;
  const Model m = train_logistic(data, 0.5, 100, 1, "spec");
  EXPECT_EQ(m.weights[1], 0.0);
  EXPECT_EQ(m.normalization[1].std, 1.0);
}

TEST(Train, InputErrors) {
  std::vector<Example> one_class = {{{1.0}, 1}, {{2.0}, 1}};
  EXPECT_THROW(train_logistic(one_class, 0.5, 10, 1, "spec"), Error);
  std::vector<Example> ragged = {{{1.0}, 1}, {{2.0, 3.0}, 0}};
  EXPECT_THROW(train_logistic(ragged, 0.5, 10, 1, "spec"), Error);
  EXPECT_THROW(train_logistic(std::vector<Example>{{{1.0}, 1}}, 0.5, 10, 1, "spec"), Error);
}

TEST(Predict, ZeroModelIsHalfAndMonotoneInBias) {
  Model m;
  m.weights = {0.0, 0.0};
  m.normalization = {{0, 1}, {0, 1}};
  const std::vector<double> x = {0.3, -2.0};
  EXPECT_EQ(predict_proba(m, x), 0.5);
  double prev = 0.0;
  for (double b = -40; b <= 40; b += 0.5) {
    m.bias = b;
    const double p = predict_proba(m, x);
    EXPECT_GE(p, prev);
    prev = p;
  }
  EXPECT_THROW(predict_proba(m, std::vector<double>{1.0}), Error);
}

TEST(Evaluate, Examples) {
  Model m;
  m.weights = {1.0};
  m.normalization = {{0, 1}};
  std::vector<Example> perfect;
  for (int i = 0; i < 10; ++i) perfect.push_back({{i % 2 ? 5.0 : -5.0}, i % 2});
  const Metrics a = evaluate(m, perfect);
  EXPECT_EQ(a.accuracy, 1.0);
  EXPECT_EQ(a.fp + a.fn, 0u);

  m.bias = 100.0;
  std::vector<Example> third = {{{0.0}, 1}, {{0.0}, 0}, {{0.0}, 0}};
  const Metrics b = evaluate(m, third);
  EXPECT_DOUBLE_EQ(b.accuracy, 1.0 / 3.0);
  EXPECT_EQ(b.recall, 1.0);
  EXPECT_DOUBLE_EQ(b.precision, 1.0 / 3.0);
}

TEST(ModelFile, RoundTripIsExact) {
  Rng rng(7);
  const auto data = gaussian_clusters(rng, 80, 6, 1.0);
  const Model m = train_logistic(data, 0.5, 50, 123, "gridpop-tile-features-v1");
  const std::string text = format_model(m);
  EXPECT_EQ(parse_model(text), m);
  EXPECT_EQ(format_model(parse_model(text)), text);
  EXPECT_THROW(parse_model("spec\n1,1\n"), Error);
  EXPECT_THROW(parse_model("spec\n1,0\n0\n0\nepochs=1\n"), Error);
}

}  // namespace
}  // namespace gridpop
