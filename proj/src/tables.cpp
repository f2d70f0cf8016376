#include "corrbench/tables.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "corrbench/error.hpp"

namespace corrbench {

void AccuracyTable::set(std::string model_id, std::string distribution_id, double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw Error(ErrorCode::InconsistentInput, "accuracy of (" + model_id + ", " + distribution_id + ") is " +
                                                  format_double(accuracy) + ", outside [0, 1]");
  }
  entries_[{std::move(model_id), std::move(distribution_id)}] = accuracy;
}

std::optional<double> AccuracyTable::find(std::string_view model_id, std::string_view distribution_id) const {
  auto it = entries_.find(std::pair<std::string_view, std::string_view>(model_id, distribution_id));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double AccuracyTable::at(std::string_view model_id, std::string_view distribution_id) const {
  if (auto v = find(model_id, distribution_id)) return *v;
  throw Error(ErrorCode::MissingAccuracy,
              "no accuracy for model '" + std::string(model_id) + "' on '" + std::string(distribution_id) + "'");
}

std::vector<std::string> AccuracyTable::models() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : entries_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

void ModelManifest::add(std::string model_id, ModelRole role) {
  if (entries_.contains(model_id)) {
    throw Error(ErrorCode::InconsistentInput, "model '" + model_id + "' listed twice in manifest");
  }
  if (role.kind == ModelRole::Kind::standard) {
    if (standard_) {
      throw Error(ErrorCode::InconsistentInput, "second standard model '" + model_id + "' (already have '" +
                                                    *standard_ + "')");
    }
    standard_ = model_id;
  } else {
    if (augmented_.contains(role.corruption_id)) {
      throw Error(ErrorCode::InconsistentInput, "second augmented model for '" + role.corruption_id + "'");
    }
    augmented_.emplace(role.corruption_id, model_id);
  }
  entries_.emplace(std::move(model_id), std::move(role));
}

const std::string& ModelManifest::standard_model() const {
  if (!standard_) throw Error(ErrorCode::InconsistentInput, "manifest has no standard model");
  return *standard_;
}

const std::string& ModelManifest::augmented_model(std::string_view corruption_id) const {
  auto it = augmented_.find(corruption_id);
  if (it == augmented_.end()) {
    throw Error(ErrorCode::InconsistentInput,
                "manifest has no model augmented with '" + std::string(corruption_id) + "'");
  }
  return it->second;
}

bool ModelManifest::has_augmented(std::string_view corruption_id) const {
  return augmented_.find(corruption_id) != augmented_.end();
}

OverlapMatrix::OverlapMatrix(std::vector<std::string> ids)
    : ids_(std::move(ids)), values_(ids_.size() * ids_.size(), 0.0) {}

OverlapMatrix::OverlapMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.size() != ids_.size() * ids_.size()) {
    throw Error(ErrorCode::InconsistentInput, "overlap matrix needs " + std::to_string(ids_.size() * ids_.size()) +
                                                  " values, got " + std::to_string(values_.size()));
  }
}

std::size_t OverlapMatrix::index_of(std::string_view id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw Error(ErrorCode::UnknownCorruption, "'" + std::string(id) + "' is not in the matrix");
  return static_cast<std::size_t>(it - ids_.begin());
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

namespace csv {
namespace {

struct Field {
  std::string text;
  std::size_t column;  // 1-based
};

struct Record {
  std::vector<Field> fields;
  std::size_t line;  // 1-based
};

[[noreturn]] void fail(std::string_view source, std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

// RFC 4180 records; blank lines are skipped.
std::vector<Record> tokenize(std::string_view text, std::string_view source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    Record rec{{}, line};
    std::size_t line_start = pos;
    bool end_of_record = false;
    while (!end_of_record) {
      Field field{{}, pos - line_start + 1};
      if (pos < text.size() && text[pos] == '"') {
        ++pos;
        while (true) {
          if (pos >= text.size()) fail(source, line, field.column, "unterminated quoted field");
          if (text[pos] == '"') {
            if (pos + 1 < text.size() && text[pos + 1] == '"') {
              field.text.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            break;
          }
          if (text[pos] == '\n') {
            ++line;
            line_start = pos + 1;
          }
          field.text.push_back(text[pos++]);
        }
        if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          fail(source, line, pos - line_start + 1, "unexpected character after closing quote");
        }
      } else {
        while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
          field.text.push_back(text[pos++]);
        }
      }
      rec.fields.push_back(std::move(field));
      if (pos >= text.size()) {
        end_of_record = true;
      } else if (text[pos] == ',') {
        ++pos;
      } else {
        if (text[pos] == '\r') ++pos;
        if (pos < text.size() && text[pos] == '\n') ++pos;
        ++line;
        end_of_record = true;
      }
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].text.empty();
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

double parse_number(const Field& f, std::size_t line, std::string_view source) {
  double v = 0.0;
  const char* begin = f.text.data();
  const char* end = begin + f.text.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end || f.text.empty()) {
    fail(source, line, f.column, "expected a decimal number, got '" + f.text + "'");
  }
  return v;
}

void expect_header(const std::vector<Record>& records, std::span<const std::string_view> names,
                   std::string_view source) {
  if (records.empty()) fail(source, 1, 1, "missing header");
  const Record& h = records.front();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i >= h.fields.size()) fail(source, h.line, 1, "header must be '" + std::string(names[0]) + ",...'");
    if (h.fields[i].text != names[i]) {
      fail(source, h.line, h.fields[i].column,
           "expected header column '" + std::string(names[i]) + "', got '" + h.fields[i].text + "'");
    }
  }
  if (h.fields.size() != names.size()) {
    fail(source, h.line, h.fields[names.size()].column, "unexpected extra header column");
  }
}

void expect_arity(const Record& r, std::size_t n, std::string_view source) {
  if (r.fields.size() != n) {
    const std::size_t col = r.fields.size() > n ? r.fields[n].column : r.fields.back().column;
    fail(source, r.line, col, "expected " + std::to_string(n) + " fields, got " + std::to_string(r.fields.size()));
  }
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

AccuracyTable parse_accuracies(std::string_view text, std::string_view source) {
  static constexpr std::string_view kHeader[] = {"model_id", "distribution_id", "accuracy"};
  const std::vector<Record> records = tokenize(text, source);
  expect_header(records, kHeader, source);
  AccuracyTable table;
  std::set<AccuracyTable::Key> seen;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const Record& r = records[i];
    expect_arity(r, 3, source);
    if (r.fields[0].text.empty()) fail(source, r.line, r.fields[0].column, "empty model_id");
    if (r.fields[1].text.empty()) fail(source, r.line, r.fields[1].column, "empty distribution_id");
    const double acc = parse_number(r.fields[2], r.line, source);
    if (!(acc >= 0.0 && acc <= 1.0)) fail(source, r.line, r.fields[2].column, "accuracy outside [0, 1]");
    if (!seen.emplace(r.fields[0].text, r.fields[1].text).second) {
      fail(source, r.line, r.fields[0].column, "duplicate entry for (" + r.fields[0].text + ", " + r.fields[1].text + ")");
    }
    table.set(r.fields[0].text, r.fields[1].text, acc);
  }
  return table;
}

std::string format_accuracies(const AccuracyTable& table) {
  std::string out = "model_id,distribution_id,accuracy\n";
  for (const auto& [key, value] : table.entries()) {
    out += quote_if_needed(key.first) + "," + quote_if_needed(key.second) + "," + format_double(value) + "\n";
  }
  return out;
}

AccuracyTable read_accuracies(const std::filesystem::path& path) {
  return parse_accuracies(read_text_file(path), path.string());
}

void write_accuracies(const AccuracyTable& table, const std::filesystem::path& path) {
  write_text_file(path, format_accuracies(table));
}

ModelManifest parse_manifest(std::string_view text, std::string_view source) {
  static constexpr std::string_view kHeader[] = {"model_id", "role"};
  const std::vector<Record> records = tokenize(text, source);
  expect_header(records, kHeader, source);
  ModelManifest manifest;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const Record& r = records[i];
    expect_arity(r, 2, source);
    const std::string& role = r.fields[1].text;
    ModelRole parsed;
    if (role == "standard") {
      parsed = ModelRole::standard();
    } else if (role.starts_with("augmented:") && role.size() > 10) {
      parsed = ModelRole::augmented(role.substr(10));
    } else {
      fail(source, r.line, r.fields[1].column, "role must be 'standard' or 'augmented:<corruption_id>', got '" + role + "'");
    }
    try {
      manifest.add(r.fields[0].text, std::move(parsed));
    } catch (const Error& e) {
      fail(source, r.line, r.fields[0].column, e.what());
    }
  }
  return manifest;
}

std::string format_manifest(const ModelManifest& manifest) {
  std::string out = "model_id,role\n";
  for (const auto& [model, role] : manifest.entries()) {
    out += quote_if_needed(model) + "," +
           (role.kind == ModelRole::Kind::standard ? std::string("standard") : quote_if_needed("augmented:" + role.corruption_id)) +
           "\n";
  }
  return out;
}

ModelManifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.string());
}

void write_manifest(const ModelManifest& manifest, const std::filesystem::path& path) {
  write_text_file(path, format_manifest(manifest));
}

OverlapMatrix parse_matrix(std::string_view text, std::string_view source) {
  const std::vector<Record> records = tokenize(text, source);
  if (records.empty()) fail(source, 1, 1, "missing header row");
  const Record& header = records.front();
  std::vector<std::string> ids;
  for (std::size_t i = 1; i < header.fields.size(); ++i) {
    if (header.fields[i].text.empty()) fail(source, header.line, header.fields[i].column, "empty corruption id");
    if (std::find(ids.begin(), ids.end(), header.fields[i].text) != ids.end()) {
      fail(source, header.line, header.fields[i].column, "corruption id '" + header.fields[i].text + "' repeated");
    }
    ids.push_back(header.fields[i].text);
  }
  if (ids.empty()) fail(source, header.line, 1, "header lists no corruption ids");
  if (records.size() != ids.size() + 1) {
    fail(source, records.back().line, 1,
         "expected " + std::to_string(ids.size()) + " matrix rows, got " + std::to_string(records.size() - 1));
  }
  OverlapMatrix matrix(ids);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Record& r = records[i + 1];
    expect_arity(r, ids.size() + 1, source);
    if (r.fields[0].text != ids[i]) {
      fail(source, r.line, 1, "row id '" + r.fields[0].text + "' does not match column id '" + ids[i] + "'");
    }
    for (std::size_t j = 0; j < ids.size(); ++j) matrix(i, j) = parse_number(r.fields[j + 1], r.line, source);
  }
  return matrix;
}

std::string format_matrix(const OverlapMatrix& matrix) {
  std::string out;
  for (const std::string& id : matrix.ids()) out += "," + quote_if_needed(id);
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += quote_if_needed(matrix.ids()[i]);
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      auto res = std::to_chars(buf, buf + sizeof buf, matrix(i, j), std::chars_format::fixed, 12);
      out += ",";
      out.append(buf, res.ptr);
    }
    out += "\n";
  }
  return out;
}

OverlapMatrix read_matrix(const std::filesystem::path& path) { return parse_matrix(read_text_file(path), path.string()); }

void write_matrix(const OverlapMatrix& matrix, const std::filesystem::path& path) {
  write_text_file(path, format_matrix(matrix));
}

}  // namespace csv
}  // namespace corrbench
