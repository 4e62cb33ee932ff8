#include <doctest.h>

#include <filesystem>
#include <random>

#include "rashomon/dataset.hpp"
#include "rashomon/error.hpp"
#include "support/fixtures.hpp"

using namespace rashomon;
using namespace rashomon::testing;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rashomon_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("D1 parses into four samples over two conditions") {
  auto d = d1();
  CHECK(d.sample_count() == 4);
  CHECK(d.condition_count() == 2);
  CHECK(d.conditions()[0].display_name == "f0");
  CHECK(d.conditions()[0].source_feature == "f0");
  CHECK(d.conditions()[0].range_label.empty());
  CHECK(d.labels() == std::vector<std::uint8_t>{0, 0, 1, 1});
}

TEST_CASE("non-binary cell is reported with its position") {
  try {
    parse_dataset("f0,f1,label\n0,0,0\n0,2,0\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.row() == 1);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("\"2\"") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_dataset("f0,label\n0,x\n"), ValidationError);
}

TEST_CASE("source:range headers group conditions by feature") {
  auto d = parse_dataset("prior:>3,prior:=0,age:<26,label\n1,0,1,1\n");
  REQUIRE(d.condition_count() == 3);
  CHECK(d.conditions()[0].source_feature == "prior");
  CHECK(d.conditions()[0].range_label == ">3");
  CHECK(d.conditions()[2].source_feature == "age");
  auto s = describe(d);
  REQUIRE(s.groups.size() == 2);
  CHECK(s.groups[0].source_feature == "prior");
  CHECK(s.groups[0].condition_ids == std::vector<int>{0, 1});
  CHECK(s.groups[1].condition_ids == std::vector<int>{2});
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_dataset(""), SchemaError);
  CHECK_THROWS_AS(parse_dataset("f0,f0,label\n0,0,1\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset("f0,label\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset("label\n1\n"), SchemaError);
  CHECK_THROWS_AS(parse_dataset("f0,f1,label\n0,1\n"), SchemaError);
  CHECK_THROWS_AS(load_dataset(temp_file("does-not-exist.csv")), SchemaError);
}

TEST_CASE("CRLF line endings are accepted") {
  auto d = parse_dataset("f0,f1,label\r\n0,0,0\r\n1,1,1\r\n");
  CHECK(d.sample_count() == 2);
  CHECK(d.label_name() == "label");
}

TEST_CASE("describe counts the reference datasets") {
  auto s1 = describe(d1());
  CHECK(s1.sample_count == 4);
  CHECK(s1.condition_count == 2);
  CHECK(s1.positives == 2);
  auto s2 = describe(d2());
  CHECK(s2.sample_count == 8);
  CHECK(s2.condition_count == 3);
  CHECK(s2.positives == 6);
  CHECK(s2.negatives == 2);
}

TEST_CASE("save/load round trip and describe recount on random datasets") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 25; ++i) {
    auto d = random_dataset(rng, 1 + rng() % 20, 1 + rng() % 6, i % 2 ? std::vector<std::string>{"a", "b"} : std::vector<std::string>{});
    auto path = temp_file("roundtrip.csv");
    save_dataset(d, path);
    auto back = load_dataset(path);
    CHECK(back == d);
    CHECK(back.content_hash() == d.content_hash());

    auto s = describe(d);
    std::size_t positives = 0;
    for (std::size_t r = 0; r < d.sample_count(); ++r) positives += d.labels()[r] == 1;
    CHECK(s.positives == positives);
    CHECK(s.positives + s.negatives == d.sample_count());
    std::size_t grouped = 0;
    for (const auto& g : s.groups) grouped += g.condition_ids.size();
    CHECK(grouped == d.condition_count());
  }
}

TEST_CASE("content hash tracks content") {
  auto a = d1();
  auto b = parse_dataset("f0,f1,label\n0,0,0\n0,1,0\n1,0,1\n1,1,0\n");
  CHECK(a.content_hash() == d1().content_hash());
  CHECK(a.content_hash() != b.content_hash());
  CHECK(a.content_hash().size() == 64);
}
