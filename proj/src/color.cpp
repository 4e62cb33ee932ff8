#include "rashomon/color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rashomon {

namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_gamma(double linear) {
  linear = std::clamp(linear, 0.0, 1.0);
  return linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

std::string Rgb::hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "#";
  for (auto c : {r, g, b}) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 0xF]);
  }
  return out;
}

Rgb hcl_to_rgb(double hue, double chroma, double luminance) {
  if (luminance <= 0.0) return {0, 0, 0};
  const double h = hue * std::numbers::pi / 180.0;
  const double u = chroma * std::cos(h);
  const double v = chroma * std::sin(h);

  const double denom = kWhiteX + 15.0 * kWhiteY + 3.0 * kWhiteZ;
  const double un = 4.0 * kWhiteX / denom;
  const double vn = 9.0 * kWhiteY / denom;

  const double y = luminance > 8.0 ? kWhiteY * std::pow((luminance + 16.0) / 116.0, 3.0)
                                   : kWhiteY * luminance / kKappa;
  const double up = u / (13.0 * luminance) + un;
  const double vp = v / (13.0 * luminance) + vn;
  const double x = y * 9.0 * up / (4.0 * vp);
  const double z = y * (12.0 - 3.0 * up - 20.0 * vp) / (4.0 * vp);

  const double r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  const double g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  const double b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  return {to_byte(srgb_gamma(r)), to_byte(srgb_gamma(g)), to_byte(srgb_gamma(b))};
}

ColorMap assign_colors(const std::vector<SplitCondition>& conditions) {
  ColorMap map;
  const auto groups = group_conditions(conditions);
  const double count = static_cast<double>(groups.size());
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& group = groups[gi];
    const double hue = 360.0 * static_cast<double>(gi) / count;
    map.feature_hues[group.source_feature] = hue;

    auto ids = group.condition_ids;
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
      return conditions[static_cast<std::size_t>(a)].range_label <
             conditions[static_cast<std::size_t>(b)].range_label;
    });
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const double lum =
          ids.size() == 1 ? (kMinLuminance + kMaxLuminance) / 2.0
                          : kMinLuminance + (kMaxLuminance - kMinLuminance) * static_cast<double>(k) /
                                                static_cast<double>(ids.size() - 1);
      map.condition_luminance[ids[k]] = lum;
      map.conditions[ids[k]] = {static_cast<int>(gi), static_cast<int>(k), hue, lum,
                                hcl_to_rgb(hue, map.chroma, lum)};
    }
  }
  return map;
}

}  // namespace rashomon
