#pragma once
// JSON encodings of partitions, benchmark groups and correlation reports.
//
//   partition   {"k": 6, "categories": [{"id": 1, "corruptions": [...]}, ...]}
//   benchmarks  {"params": {...}, "benchmarks": [{"id", "corruptions", "std", "lineage"}, ...]}
//   report      {"natural", "models", "mean_r", "mean_p_value", "excluded", "benchmarks": [...]}
//
// Writers may add extra top-level keys (provenance, config echo); readers
// ignore keys they do not know.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "corrbench/benchmarks.hpp"
#include "corrbench/categories.hpp"
#include "corrbench/correlation.hpp"

namespace corrbench {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become Error(ParseError) with
/// "source:line:col".
Json parse_json(std::string_view text, std::string_view source);
Json read_json(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void write_json(const std::filesystem::path& path, const Json& value);

Json partition_to_json(const CategoryPartition& partition);
CategoryPartition partition_from_json(const Json& value, std::string_view source);

/// `params` is written verbatim; "n", "k" and "seed" are read back into
/// each benchmark when present.
Json benchmarks_to_json(std::span<const Benchmark> group, const CategoryPartition& partition, Json params);
std::vector<Benchmark> benchmarks_from_json(const Json& value, std::string_view source);

Json report_to_json(const RobustnessReport& report);
RobustnessReport report_from_json(const Json& value, std::string_view source);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// {"tool", "roster_version", "seed", "inputs": [{"name", "sha256"}]}.
/// Inputs are named by file name only so that outputs do not depend on the
/// working directory.
Json provenance(std::optional<std::uint64_t> seed, std::span<const std::filesystem::path> inputs);

}  // namespace corrbench
