#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rashomon/dataset.hpp"

namespace rashomon {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;
  bool operator==(const Rgb&) const = default;
};

// Polar CIELUV (hue degrees, chroma, luminance) under a D65 white point to
// 8-bit sRGB; out-of-gamut channels are clamped.
Rgb hcl_to_rgb(double hue, double chroma, double luminance);

inline constexpr double kSectorChroma = 60.0;
inline constexpr double kMinLuminance = 45.0;
inline constexpr double kMaxLuminance = 85.0;
inline constexpr Rgb kLeafGray{190, 190, 190};

struct ConditionColor {
  int feature_index = 0;   // group position, by first appearance
  int luminance_rank = 0;  // position within the group, by range label
  double hue = 0.0;
  double luminance = 0.0;
  Rgb rgb;

  bool operator==(const ConditionColor&) const = default;
};

struct ColorMap {
  std::map<std::string, double> feature_hues;
  std::map<int, double> condition_luminance;
  double chroma = kSectorChroma;
  Rgb leaf_gray = kLeafGray;
  std::map<int, ConditionColor> conditions;

  const ConditionColor& condition(int id) const { return conditions.at(id); }
  bool operator==(const ColorMap&) const = default;
};

// Hue per source feature (360 * i / G), luminance per range within a feature
// evenly spread over [45, 85]; a lone range sits at the midpoint.
ColorMap assign_colors(const std::vector<SplitCondition>& conditions);

}  // namespace rashomon
