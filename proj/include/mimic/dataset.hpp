#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mimic/schema.hpp"

namespace mimic {

enum class Label : std::uint8_t { Benign = 0, Malicious = 1 };

std::string_view to_string(Label label);

using FeatureValue = std::variant<double, std::string>;

struct FeatureVector {
  std::vector<FeatureValue> values;
  std::optional<Label> label;

  bool operator==(const FeatureVector&) const = default;
};

// Token dictionary for one categorical column; codes follow first appearance.
class TokenDictionary {
 public:
  std::uint32_t intern(std::string_view token);
  std::optional<std::uint32_t> find(std::string_view token) const;
  const std::string& token(std::uint32_t code) const { return tokens_[code]; }
  std::size_t size() const noexcept { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
};

class Dataset;

// Lightweight read-only view of one row, either inside a Dataset or a
// free-standing FeatureVector. Classifiers read features through this.
class RowRef {
 public:
  RowRef(const Dataset& ds, std::size_t row) : dataset_(&ds), row_(row) {}
  explicit RowRef(const FeatureVector& fv) : vector_(&fv) {}

  double number(std::size_t column) const;
  std::string_view token(std::size_t column) const;

 private:
  const Dataset* dataset_ = nullptr;
  std::size_t row_ = 0;
  const FeatureVector* vector_ = nullptr;
};

/// Rows sharing one Schema, stored column-wise.
///
/// A labeled dataset carries a label on every row; an unlabeled one on none.
/// Rows are only appended while the dataset is being built; afterwards the
/// dataset is shared read-only.
class Dataset {
 public:
  Dataset(std::shared_ptr<const Schema> schema, bool labeled);

  static Dataset from_rows(std::shared_ptr<const Schema> schema, bool labeled,
                           std::span<const FeatureVector> rows);

  // Throws ContractError when `row` does not fit the schema or the
  // labeled/unlabeled contract.
  void append(const FeatureVector& row);

  const Schema& schema() const noexcept { return *schema_; }
  const std::shared_ptr<const Schema>& schema_ptr() const noexcept { return schema_; }
  bool labeled() const noexcept { return labeled_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  double number(std::size_t row, std::size_t column) const { return columns_[column].numbers[row]; }
  std::uint32_t code(std::size_t row, std::size_t column) const { return columns_[column].codes[row]; }
  const TokenDictionary& dictionary(std::size_t column) const { return columns_[column].dictionary; }
  std::string_view token(std::size_t row, std::size_t column) const {
    const auto& c = columns_[column];
    return c.dictionary.token(c.codes[row]);
  }
  Label label(std::size_t row) const;
  const std::vector<Label>& labels() const noexcept { return labels_; }

  FeatureVector row(std::size_t i) const;
  RowRef ref(std::size_t i) const { return RowRef(*this, i); }

  // New dataset holding `rows` in the given order. keep_labels=false strips
  // labels (the result is unlabeled).
  Dataset select(std::span<const std::size_t> rows, bool keep_labels) const;

  // Same rows, relabeled; `labels` must have size() entries.
  Dataset with_labels(std::span<const Label> labels) const;
  Dataset without_labels() const;

  bool operator==(const Dataset& other) const;

 private:
  struct Column {
    ColumnKind kind;
    std::vector<double> numbers;
    std::vector<std::uint32_t> codes;
    TokenDictionary dictionary;
  };

  std::shared_ptr<const Schema> schema_;
  bool labeled_;
  std::size_t size_ = 0;
  std::vector<Column> columns_;
  std::vector<Label> labels_;
};

// Class tallies. Doubles so bootstrap multiplicities fit the same type.
struct ClassCounts {
  double benign = 0.0;
  double malicious = 0.0;

  double total() const noexcept { return benign + malicious; }
  void add(Label label, double weight = 1.0) {
    (label == Label::Malicious ? malicious : benign) += weight;
  }
  bool operator==(const ClassCounts&) const = default;
};

ClassCounts count_labels(const Dataset& ds);

}  // namespace mimic
