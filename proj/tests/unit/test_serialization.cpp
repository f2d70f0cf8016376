#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "corrbench/error.hpp"
#include "corrbench/serialization.hpp"
#include "corrbench/tables.hpp"

using namespace corrbench;

namespace {

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

const CategoryPartition& families() {
  static const CategoryPartition p = CategoryPartition::by_family(list_corruptions());
  return p;
}

}  // namespace

TEST_SUITE("serialization") {

TEST_CASE("sha256 known digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("parse errors carry line and column") {
  const std::string msg = message_of([] { parse_json("{\n  \"a\": 1,\n  oops\n}", "x.json"); });
  CHECK(msg.find("ParseError") != std::string::npos);
  CHECK(msg.find("x.json:3:") != std::string::npos);
}

TEST_CASE("partition round trip") {
  const Json j = partition_to_json(families());
  CHECK(j["k"] == 6);
  CHECK(partition_from_json(j, "p") == families());
  CHECK(partition_from_json(parse_json(j.dump(), "p"), "p") == families());

  Json bad = j;
  bad["categories"][1]["corruptions"].push_back(bad["categories"][0]["corruptions"][0]);
  CHECK(message_of([&] { partition_from_json(bad, "p"); }).find("InconsistentInput") != std::string::npos);
  CHECK(message_of([&] { partition_from_json(Json::array(), "p"); }).find("p") != std::string::npos);
}

TEST_CASE("benchmark group round trip") {
  const auto group = generate_group(families(), GenerationParams{3, 2, 12, 5});
  const Json params = {{"n", 3}, {"k", 2}, {"count", 12}, {"seed", 5}};
  const Json j = benchmarks_to_json(group, families(), params);
  REQUIRE(j["benchmarks"].size() == 12);
  CHECK(j["benchmarks"][0]["std"].get<double>() == doctest::Approx(balance_std(group[0], families())));
  const auto back = benchmarks_from_json(parse_json(j.dump(2), "b.json"), "b.json");
  REQUIRE(back.size() == group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    CHECK(back[i].id == group[i].id);
    CHECK(back[i].corruptions == group[i].corruptions);
    CHECK(back[i].n == 3);
    CHECK(back[i].k == 2);
    CHECK(back[i].seed == 5);
  }

  Json dup = j;
  dup["benchmarks"][0]["corruptions"].push_back(dup["benchmarks"][0]["corruptions"][0]);
  CHECK_THROWS_AS(benchmarks_from_json(dup, "b.json"), Error);
}

TEST_CASE("report round trip keeps excluded entries as null") {
  RobustnessReport r;
  r.natural_id = "natural";
  r.models = {"a", "b", "c"};
  r.mean_r = 0.25;
  r.mean_p_value = 0.5;
  r.benchmarks = {{"b0000", 0.25, 0.5, false},
                  {"b0001", std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), true}};
  r.excluded = 1;
  const Json j = report_to_json(r);
  CHECK(j["benchmarks"][1]["r"].is_null());
  const RobustnessReport back = report_from_json(parse_json(j.dump(), "r"), "r");
  CHECK(back.models == r.models);
  CHECK(back.mean_r == 0.25);
  CHECK(back.excluded == 1);
  CHECK(back.benchmarks[0].r == 0.25);
  CHECK(back.benchmarks[1].excluded);
  CHECK(std::isnan(back.benchmarks[1].r));
}

TEST_CASE("provenance names inputs by file name") {
  const auto dir = std::filesystem::temp_directory_path() / "corrbench_ser_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "in.txt";
  write_text_file(file, "abc");
  const std::vector<std::filesystem::path> inputs = {file};
  const Json p = provenance(7, inputs);
  CHECK(p["seed"] == 7);
  CHECK(p["inputs"][0]["name"] == "in.txt");
  CHECK(p["inputs"][0]["sha256"] == sha256_hex("abc"));
  CHECK(provenance(std::nullopt, {})["seed"].is_null());

  write_json(dir / "p.json", p);
  CHECK(read_json(dir / "p.json") == p);
  CHECK(read_text_file(dir / "p.json").back() == '\n');
  std::filesystem::remove_all(dir);
}

}
