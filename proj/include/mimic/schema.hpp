#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mimic {

enum class ColumnKind { Continuous, Categorical };

std::string_view to_string(ColumnKind kind);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;

  bool operator==(const ColumnSpec&) const = default;
};

/// Feature columns plus the label column and the binary label vocabulary.
///
/// Every label token other than `negative_label` is treated as malicious.
/// `positive_label` is only used when labels are written back out. An
/// optional closed vocabulary turns unknown label tokens into errors.
class Schema {
 public:
  Schema(std::vector<ColumnSpec> columns, std::string label_column, std::string negative_label,
         std::string positive_label = "malicious", std::vector<std::string> label_vocabulary = {});

  std::size_t feature_count() const noexcept { return columns_.size(); }
  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  const ColumnSpec& column(std::size_t i) const { return columns_.at(i); }
  const std::string& label_column() const noexcept { return label_column_; }
  const std::string& negative_label() const noexcept { return negative_label_; }
  const std::string& positive_label() const noexcept { return positive_label_; }
  const std::vector<std::string>& label_vocabulary() const noexcept { return label_vocabulary_; }

  std::vector<ColumnKind> kinds() const;

  /// Canonical schema-file text; identical schemas always render identically.
  std::string canonical_text() const;

  /// Hex SHA-256 of canonical_text().
  std::string fingerprint() const;

  bool operator==(const Schema& other) const = default;

 private:
  std::vector<ColumnSpec> columns_;
  std::string label_column_;
  std::string negative_label_;
  std::string positive_label_;
  std::vector<std::string> label_vocabulary_;
};

/// Parses the line-oriented schema grammar:
///
///   # comment
///   <feature-name>:continuous|categorical     (one per feature, in order)
///   label:<label-column-name>
///   negative:<benign token>
///   positive:<token written for malicious rows>   (optional)
///   labels:<tok>,<tok>,...                        (optional closed vocabulary)
///
/// Blank lines and `#` comments are ignored; whitespace around names and
/// values is trimmed. The directive keys `label`, `negative`, `positive` and
/// `labels` are reserved and cannot be used as feature names.
Schema parse_schema(std::string_view text);
Schema load_schema(const std::filesystem::path& path);

}  // namespace mimic
