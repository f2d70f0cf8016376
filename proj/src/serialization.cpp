#include "corrbench/serialization.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "corrbench/corruptions.hpp"
#include "corrbench/error.hpp"

namespace corrbench {

namespace {

[[noreturn]] void schema_error(std::string_view source, const std::string& what) {
  throw Error(ErrorCode::ParseError, std::string(source) + ": " + what);
}

const Json& member(const Json& obj, const char* key, std::string_view source, std::string_view where) {
  if (!obj.is_object()) schema_error(source, std::string(where) + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(source, std::string(where) + " lacks \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_array(const Json& value, std::string_view source, const std::string& where) {
  if (!value.is_array()) schema_error(source, where + " is not an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const Json& v : value) {
    if (!v.is_string()) schema_error(source, where + " holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

// NaN is written as null.
Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

double number_or_nan(const Json& v, std::string_view source, const std::string& where) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) schema_error(source, where + " is not a number");
  return v.get<double>();
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const std::string_view head = text.substr(0, offset);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
    const std::size_t nl = head.rfind('\n');
    const std::size_t col = 1 + (nl == std::string_view::npos ? offset : offset - nl - 1);
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw Error(ErrorCode::ParseError,
                std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

Json read_json(const std::filesystem::path& path) { return parse_json(read_text_file(path), path.string()); }

void write_json(const std::filesystem::path& path, const Json& value) { write_text_file(path, value.dump(2) + "\n"); }

Json partition_to_json(const CategoryPartition& partition) {
  Json cats = Json::array();
  for (const Category& c : partition.categories()) cats.push_back({{"id", c.id}, {"corruptions", c.corruptions}});
  return Json{{"k", partition.size()}, {"categories", std::move(cats)}};
}

CategoryPartition partition_from_json(const Json& value, std::string_view source) {
  const Json& cats = member(value, "categories", source, "partition");
  if (!cats.is_array()) schema_error(source, "\"categories\" is not an array");
  std::vector<Category> out;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    const Json& id = member(cats[i], "id", source, where);
    if (!id.is_number_integer()) schema_error(source, where + ".id is not an integer");
    out.push_back(Category{id.get<int>(), string_array(member(cats[i], "corruptions", source, where), source,
                                                       where + ".corruptions")});
  }
  if (auto k = value.find("k"); k != value.end() && (!k->is_number_integer() || k->get<std::size_t>() != out.size())) {
    schema_error(source, "\"k\" does not match the number of categories");
  }
  try {
    return CategoryPartition(std::move(out));
  } catch (const Error& e) {
    schema_error(source, e.what());
  }
}

Json benchmarks_to_json(std::span<const Benchmark> group, const CategoryPartition& partition, Json params) {
  Json items = Json::array();
  for (const Benchmark& b : group) {
    items.push_back({{"id", b.id},
                     {"corruptions", b.corruptions},
                     {"std", balance_std(b, partition)},
                     {"lineage", b.lineage}});
  }
  return Json{{"params", std::move(params)}, {"benchmarks", std::move(items)}};
}

std::vector<Benchmark> benchmarks_from_json(const Json& value, std::string_view source) {
  const Json& params = member(value, "params", source, "document");
  const Json& items = member(value, "benchmarks", source, "document");
  if (!items.is_array()) schema_error(source, "\"benchmarks\" is not an array");
  auto int_param = [&](const char* key) -> int {
    auto it = params.find(key);
    if (it == params.end()) return 0;
    if (!it->is_number_integer()) schema_error(source, std::string("params.") + key + " is not an integer");
    return it->get<int>();
  };
  std::uint64_t seed = 0;
  if (auto it = params.find("seed"); it != params.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      schema_error(source, "params.seed is not an unsigned integer");
    }
    seed = it->get<std::uint64_t>();
  }
  std::vector<Benchmark> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "benchmarks[" + std::to_string(i) + "]";
    Benchmark b;
    const Json& id = member(items[i], "id", source, where);
    if (!id.is_string()) schema_error(source, where + ".id is not a string");
    b.id = id.get<std::string>();
    b.corruptions = string_array(member(items[i], "corruptions", source, where), source, where + ".corruptions");
    if (auto it = items[i].find("lineage"); it != items[i].end()) {
      b.lineage = string_array(*it, source, where + ".lineage");
    }
    std::sort(b.corruptions.begin(), b.corruptions.end());
    if (std::adjacent_find(b.corruptions.begin(), b.corruptions.end()) != b.corruptions.end()) {
      schema_error(source, where + " repeats a corruption");
    }
    b.n = int_param("n");
    b.k = int_param("k");
    b.seed = seed;
    out.push_back(std::move(b));
  }
  return out;
}

Json report_to_json(const RobustnessReport& report) {
  Json items = Json::array();
  for (const BenchmarkCorrelation& b : report.benchmarks) {
    items.push_back({{"id", b.benchmark_id},
                     {"r", number_or_null(b.r)},
                     {"p_value", number_or_null(b.p_value)},
                     {"excluded", b.excluded}});
  }
  return Json{{"natural", report.natural_id},
              {"models", report.models},
              {"model_count", report.models.size()},
              {"mean_r", report.mean_r},
              {"mean_p_value", report.mean_p_value},
              {"excluded", report.excluded},
              {"benchmarks", std::move(items)}};
}

RobustnessReport report_from_json(const Json& value, std::string_view source) {
  RobustnessReport report;
  const Json& natural = member(value, "natural", source, "report");
  if (!natural.is_string()) schema_error(source, "\"natural\" is not a string");
  report.natural_id = natural.get<std::string>();
  report.models = string_array(member(value, "models", source, "report"), source, "models");
  report.mean_r = number_or_nan(member(value, "mean_r", source, "report"), source, "mean_r");
  report.mean_p_value = number_or_nan(member(value, "mean_p_value", source, "report"), source, "mean_p_value");
  const Json& items = member(value, "benchmarks", source, "report");
  if (!items.is_array()) schema_error(source, "\"benchmarks\" is not an array");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string where = "benchmarks[" + std::to_string(i) + "]";
    BenchmarkCorrelation b;
    const Json& id = member(items[i], "id", source, where);
    if (!id.is_string()) schema_error(source, where + ".id is not a string");
    b.benchmark_id = id.get<std::string>();
    b.r = number_or_nan(member(items[i], "r", source, where), source, where + ".r");
    b.p_value = number_or_nan(member(items[i], "p_value", source, where), source, where + ".p_value");
    const Json& ex = member(items[i], "excluded", source, where);
    if (!ex.is_boolean()) schema_error(source, where + ".excluded is not a boolean");
    b.excluded = ex.get<bool>();
    report.excluded += b.excluded ? 1 : 0;
    report.benchmarks.push_back(std::move(b));
  }
  return report;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

Json provenance(std::optional<std::uint64_t> seed, std::span<const std::filesystem::path> inputs) {
  Json in = Json::array();
  for (const auto& p : inputs) in.push_back({{"name", p.filename().string()}, {"sha256", sha256_file(p)}});
  Json out{{"tool", "corrbench"}, {"roster_version", std::string(kRosterVersion)}};
  out["seed"] = seed ? Json(*seed) : Json(nullptr);
  out["inputs"] = std::move(in);
  return out;
}

}  // namespace corrbench
