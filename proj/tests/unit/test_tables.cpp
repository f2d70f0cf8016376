#include <doctest.h>

#include <string>

#include "corrbench/error.hpp"
#include "corrbench/tables.hpp"

using namespace corrbench;

namespace {

std::string parse_error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_SUITE("tables") {

TEST_CASE("accuracy CSV round trip") {
  AccuracyTable t;
  t.set("resnet", "clean", 0.761);
  t.set("resnet", "gaussian_noise", 0.1 + 0.2);
  t.set("odd,name", "x\"y", 1.0);
  const std::string text = csv::format_accuracies(t);
  const AccuracyTable back = csv::parse_accuracies(text, "t.csv");
  CHECK(back.entries() == t.entries());
  CHECK(csv::format_accuracies(back) == text);
  CHECK(back.at("resnet", "gaussian_noise") == 0.1 + 0.2);
}

TEST_CASE("accuracy lookups") {
  AccuracyTable t;
  t.set("m", "clean", 0.5);
  CHECK(t.contains("m", "clean"));
  CHECK_FALSE(t.find("m", "fog").has_value());
  try {
    t.at("m", "fog");
    FAIL("expected MissingAccuracy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingAccuracy);
    CHECK(std::string(e.what()).find("fog") != std::string::npos);
  }
  CHECK_THROWS_AS(t.set("m", "x", 1.2), Error);
}

TEST_CASE("parse errors carry file, line and column") {
  const std::string bad_number = "model_id,distribution_id,accuracy\nm,clean,0.5\nm,fog,zero\n";
  CHECK(parse_error_of([&] { csv::parse_accuracies(bad_number, "acc.csv"); }).find("acc.csv:3:7") !=
        std::string::npos);
  const std::string bad_header = "model,distribution_id,accuracy\n";
  CHECK(parse_error_of([&] { csv::parse_accuracies(bad_header, "h.csv"); }).find("h.csv:1:1") != std::string::npos);
  const std::string arity = "model_id,distribution_id,accuracy\nm,clean\n";
  CHECK(parse_error_of([&] { csv::parse_accuracies(arity, "a.csv"); }).find("a.csv:2:") != std::string::npos);
  const std::string dup = "model_id,distribution_id,accuracy\nm,clean,0.5\nm,clean,0.6\n";
  parse_error_of([&] { csv::parse_accuracies(dup, "d.csv"); });
  const std::string range = "model_id,distribution_id,accuracy\nm,clean,1.5\n";
  parse_error_of([&] { csv::parse_accuracies(range, "r.csv"); });
  const std::string quote = "model_id,distribution_id,accuracy\n\"m,clean,0.5\n";
  parse_error_of([&] { csv::parse_accuracies(quote, "q.csv"); });
}

TEST_CASE("CRLF and blank lines are accepted") {
  const AccuracyTable t = csv::parse_accuracies("model_id,distribution_id,accuracy\r\n\r\nm,clean,0.25\r\n", "x");
  CHECK(t.at("m", "clean") == 0.25);
}

TEST_CASE("manifest round trip and role rules") {
  ModelManifest m;
  m.add("std", ModelRole::standard());
  m.add("aug_a", ModelRole::augmented("a"));
  m.add("aug_b", ModelRole::augmented("b"));
  CHECK(m.standard_model() == "std");
  CHECK(m.augmented_model("b") == "aug_b");
  CHECK_THROWS_AS(m.augmented_model("c"), Error);
  CHECK_THROWS_AS(m.add("std2", ModelRole::standard()), Error);
  CHECK_THROWS_AS(m.add("aug_a2", ModelRole::augmented("a")), Error);

  const std::string text = csv::format_manifest(m);
  const ModelManifest back = csv::parse_manifest(text, "m.csv");
  CHECK(back.entries() == m.entries());
  CHECK(parse_error_of([] { csv::parse_manifest("model_id,role\nx,teacher\n", "m.csv"); }).find("m.csv:2:3") !=
        std::string::npos);
  CHECK_THROWS_AS(ModelManifest().standard_model(), Error);
}

TEST_CASE("matrix round trip is stable") {
  OverlapMatrix m({"a", "b", "c"}, {1, 0.25, 1.0 / 3, 0.25, 1, 0, 1.0 / 3, 0, 1});
  const std::string text = csv::format_matrix(m);
  const OverlapMatrix back = csv::parse_matrix(text, "m.csv");
  CHECK(back.ids() == m.ids());
  CHECK(csv::format_matrix(back) == text);
  CHECK(back(0, 2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(back.index_of("c") == 2);
  CHECK_THROWS_AS(back.index_of("d"), Error);
}

TEST_CASE("matrix structure errors") {
  parse_error_of([] { csv::parse_matrix(",a,b\na,1,0\n", "m.csv"); });
  parse_error_of([] { csv::parse_matrix(",a,b\na,1,0\nc,0,1\n", "m.csv"); });
  parse_error_of([] { csv::parse_matrix(",a,a\na,1,0\na,0,1\n", "m.csv"); });
  CHECK_THROWS_AS(OverlapMatrix({"a", "b"}, {1, 0, 0}), Error);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

}
