#include <doctest.h>

#include <cstdlib>
#include <set>

#include "rashomon/color.hpp"

using namespace rashomon;

namespace {

void check_close(const Rgb& got, int r, int g, int b) {
  CHECK(std::abs(got.r - r) <= 1);
  CHECK(std::abs(got.g - g) <= 1);
  CHECK(std::abs(got.b - b) <= 1);
}

std::vector<SplitCondition> conditions(std::initializer_list<const char*> headers) {
  std::vector<SplitCondition> out;
  for (auto h : headers) out.push_back(parse_condition_header(static_cast<int>(out.size()), h));
  return out;
}

}  // namespace

TEST_CASE("zero chroma extremes") {
  for (double h : {0.0, 90.0, 217.0}) {
    CHECK(hcl_to_rgb(h, 0, 100) == Rgb{255, 255, 255});
    CHECK(hcl_to_rgb(h, 0, 0) == Rgb{0, 0, 0});
  }
}

// Expected values from scikit-image's luv2rgb (D65, sRGB), computed offline.
TEST_CASE("matches a reference CIELUV conversion") {
  check_close(hcl_to_rgb(12, 60, 60), 206, 121, 121);
  check_close(hcl_to_rgb(0, 60, 65), 223, 131, 150);
  check_close(hcl_to_rgb(200, 30, 50), 63, 129, 134);
}

TEST_CASE("out of gamut clamps") {
  auto c = hcl_to_rgb(260, 200, 50);
  CHECK(c.r == 0);
  CHECK(hcl_to_rgb(0, 0, 100).hex() == "#ffffff");
}

TEST_CASE("hues are spread over source features") {
  auto map = assign_colors(conditions({"a", "b", "c"}));
  CHECK(map.feature_hues.at("a") == 0.0);
  CHECK(map.feature_hues.at("b") == 120.0);
  CHECK(map.feature_hues.at("c") == 240.0);
  CHECK(map.chroma == 60.0);
}

TEST_CASE("luminance is spread over ranges of one feature") {
  auto map = assign_colors(conditions({"prior:=1", "prior:>3", "prior:=0"}));
  // sorted by range label: "=0" (id 2), "=1" (id 0), ">3" (id 1)
  CHECK(map.condition_luminance.at(2) == 45.0);
  CHECK(map.condition_luminance.at(0) == 65.0);
  CHECK(map.condition_luminance.at(1) == 85.0);
  CHECK(map.condition(2).luminance_rank == 0);
  CHECK(map.condition(1).luminance_rank == 2);
  std::set<double> hues;
  for (const auto& [id, c] : map.conditions) hues.insert(c.hue);
  CHECK(hues.size() == 1);
}

TEST_CASE("leaf gray is fixed and recoloring is pure") {
  auto conds = conditions({"prior:>3", "age:<26", "prior:=0", "sex:f"});
  auto a = assign_colors(conds);
  auto b = assign_colors(conds);
  CHECK(a == b);
  CHECK(a.leaf_gray == kLeafGray);
  CHECK(a.feature_hues.size() == 3);
  CHECK(a.condition(0).hue == a.condition(2).hue);
  CHECK(a.condition(0).luminance != a.condition(2).luminance);
  CHECK(a.condition(1).hue != a.condition(3).hue);
}
