#pragma once

#include <array>
#include <string_view>

#include "gridpop/image_io.hpp"

namespace gridpop {

inline constexpr std::size_t kFeatureCount = 14;

/// Versions the feature layout below; stored in model files.
inline constexpr std::string_view kFeatureSpecId = "gridpop-tile-features-v1";

/// Layout:
///   0-2   channel means (R, G, B)
///   3-5   channel standard deviations
///   6     mean gradient magnitude of luma (r + 2g + b) / 4
///   7-10  orientation histogram of strong gradients, bins 0/45/90/135 deg
///   11    white-pixel ratio (all channels >= 240)
///   12    dark-pixel ratio (all channels <= 40)
///   13    entropy in bits of the 16-bin luma histogram
using FeatureVector = std::array<double, kFeatureCount>;

const std::array<std::string_view, kFeatureCount>& feature_names();

/// Gradients are central differences over interior pixels; a pixel enters
/// the orientation histogram when its magnitude is strictly above the 75th
/// percentile of interior magnitudes. The histogram sums to 1 when any such
/// pixel exists and is all zero otherwise. Throws Error(domain) for
/// non-RGB images.
FeatureVector extract_features(const Image& tile);

}  // namespace gridpop
