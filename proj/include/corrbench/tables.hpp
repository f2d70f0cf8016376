#pragma once
// Accuracy tables, model manifests and overlap matrices, with their CSV
// encodings:
//
//   accuracies   model_id,distribution_id,accuracy
//   manifest     model_id,role            role = standard | augmented:<corruption_id>
//   matrix       ,id_1,...,id_C  then one row per id: id_i,v_i1,...,v_iC
//
// Parse errors report file, line and column.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace corrbench {

/// Distribution id reserved for i.i.d. (uncorrupted) samples.
inline constexpr std::string_view kClean = "clean";

class AccuracyTable {
 public:
  using Key = std::pair<std::string, std::string>;

  /// Orders keys and allows lookup by a pair of string_views.
  struct KeyLess {
    using is_transparent = void;
    template <class A, class B>
    bool operator()(const A& a, const B& b) const {
      const std::string_view a1 = a.first;
      const std::string_view b1 = b.first;
      if (a1 != b1) return a1 < b1;
      return std::string_view(a.second) < std::string_view(b.second);
    }
  };

  /// Throws Error(InconsistentInput) unless accuracy is in [0, 1].
  void set(std::string model_id, std::string distribution_id, double accuracy);

  std::optional<double> find(std::string_view model_id, std::string_view distribution_id) const;

  /// Throws Error(MissingAccuracy) naming the pair.
  double at(std::string_view model_id, std::string_view distribution_id) const;

  bool contains(std::string_view model_id, std::string_view distribution_id) const {
    return find(model_id, distribution_id).has_value();
  }

  /// Sorted, distinct model ids.
  std::vector<std::string> models() const;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<Key, double, KeyLess>& entries() const noexcept { return entries_; }

 private:
  std::map<Key, double, KeyLess> entries_;
};

struct ModelRole {
  enum class Kind { standard, augmented };
  Kind kind = Kind::standard;
  std::string corruption_id;  // set for augmented models

  static ModelRole standard() { return {}; }
  static ModelRole augmented(std::string corruption) { return {Kind::augmented, std::move(corruption)}; }
  friend bool operator==(const ModelRole&, const ModelRole&) = default;
};

class ModelManifest {
 public:
  /// Throws Error(InconsistentInput) on a second standard model or a second
  /// augmented model for the same corruption.
  void add(std::string model_id, ModelRole role);

  /// Throws Error(InconsistentInput) if no standard model was registered.
  const std::string& standard_model() const;

  /// Throws Error(InconsistentInput) naming the corruption.
  const std::string& augmented_model(std::string_view corruption_id) const;

  bool has_augmented(std::string_view corruption_id) const;

  const std::map<std::string, ModelRole>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, ModelRole> entries_;
  std::optional<std::string> standard_;
  std::map<std::string, std::string, std::less<>> augmented_;
};

/// Square matrix of overlap scores indexed by corruption ids.
class OverlapMatrix {
 public:
  OverlapMatrix() = default;
  explicit OverlapMatrix(std::vector<std::string> ids);
  OverlapMatrix(std::vector<std::string> ids, std::vector<double> values);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * ids_.size() + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * ids_.size(), ids_.size()}; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Position of `id`; throws Error(UnknownCorruption).
  std::size_t index_of(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

namespace csv {

AccuracyTable read_accuracies(const std::filesystem::path& path);
void write_accuracies(const AccuracyTable& table, const std::filesystem::path& path);
std::string format_accuracies(const AccuracyTable& table);
AccuracyTable parse_accuracies(std::string_view text, std::string_view source);

ModelManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const ModelManifest& manifest, const std::filesystem::path& path);
std::string format_manifest(const ModelManifest& manifest);
ModelManifest parse_manifest(std::string_view text, std::string_view source);

OverlapMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const OverlapMatrix& matrix, const std::filesystem::path& path);
/// Cells use 12 fixed decimals.
std::string format_matrix(const OverlapMatrix& matrix);
OverlapMatrix parse_matrix(std::string_view text, std::string_view source);

}  // namespace csv

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace corrbench
