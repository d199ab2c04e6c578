#include "gridpop/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gridpop/error.hpp"

namespace gridpop {

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static const std::array<std::string_view, kFeatureCount> names = {
      "mean_r",    "mean_g",     "mean_b",      "std_r",      "std_g",       "std_b",      "gradient_mean",
      "orient_0",  "orient_45",  "orient_90",   "orient_135", "white_ratio", "dark_ratio", "luma_entropy"};
  return names;
}

FeatureVector extract_features(const Image& tile) {
  if (tile.channels != 3) throw Error(ErrorKind::domain, "features need an RGB tile");
  const int W = tile.width, H = tile.height;
  const std::size_t n = static_cast<std::size_t>(W) * H;
  FeatureVector f{};
  if (n == 0) return f;

  std::array<double, 3> sum{}, sum_sq{};
  std::size_t white = 0, dark = 0;
  std::array<std::size_t, 16> luma_hist{};
  std::vector<double> luma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t r = tile.samples[3 * i], g = tile.samples[3 * i + 1], b = tile.samples[3 * i + 2];
    for (int c = 0; c < 3; ++c) {
      const double v = tile.samples[3 * i + c];
      sum[c] += v;
      sum_sq[c] += v * v;
    }
    white += (r >= 240 && g >= 240 && b >= 240);
    dark += (r <= 40 && g <= 40 && b <= 40);
    const int l = r + 2 * g + b;
    luma[i] = l / 4.0;
    luma_hist[static_cast<std::size_t>(l / 4) / 16] += 1;
  }
  const double count = static_cast<double>(n);
  for (int c = 0; c < 3; ++c) {
    const double mean = sum[c] / count;
    f[c] = mean;
    f[3 + c] = std::sqrt(std::max(0.0, sum_sq[c] / count - mean * mean));
  }
  f[11] = static_cast<double>(white) / count;
  f[12] = static_cast<double>(dark) / count;
  double entropy = 0.0;
  for (std::size_t h : luma_hist) {
    if (h == 0) continue;
    const double p = static_cast<double>(h) / count;
    entropy -= p * std::log2(p);
  }
  f[13] = entropy + 0.0;  // -0.0 for a single-bin histogram

  if (W < 3 || H < 3) return f;
  const std::size_t interior = static_cast<std::size_t>(W - 2) * (H - 2);
  std::vector<double> mag(interior), angle(interior);
  std::size_t k = 0;
  double mag_sum = 0.0;
  for (int y = 1; y < H - 1; ++y) {
    for (int x = 1; x < W - 1; ++x, ++k) {
      const std::size_t i = static_cast<std::size_t>(y) * W + x;
      const double gx = (luma[i + 1] - luma[i - 1]) / 2.0;
      const double gy = (luma[i + W] - luma[i - W]) / 2.0;
      mag[k] = std::hypot(gx, gy);
      angle[k] = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      mag_sum += mag[k];
    }
  }
  f[6] = mag_sum / static_cast<double>(interior);

  std::vector<double> sorted = mag;
  const std::size_t rank = (3 * interior + 3) / 4 - 1;  // nearest-rank 75th percentile
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
  const double threshold = sorted[rank];

  std::array<std::size_t, 4> bins{};
  std::size_t edges = 0;
  for (std::size_t j = 0; j < interior; ++j) {
    if (!(mag[j] > threshold)) continue;
    double a = angle[j];
    if (a < 0.0) a += 180.0;
    if (a >= 180.0) a -= 180.0;
    bins[static_cast<std::size_t>(std::floor(a / 45.0 + 0.5)) % 4] += 1;
    ++edges;
  }
  if (edges > 0) {
    for (std::size_t b = 0; b < 4; ++b) f[7 + b] = static_cast<double>(bins[b]) / static_cast<double>(edges);
  }
  return f;
}

}  // namespace gridpop
