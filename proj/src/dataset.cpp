#include "mimic/dataset.hpp"

#include "mimic/error.hpp"

namespace mimic {

std::string_view to_string(Label label) { return label == Label::Malicious ? "malicious" : "benign"; }

std::uint32_t TokenDictionary::intern(std::string_view token) {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  const auto code = static_cast<std::uint32_t>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), code);
  return code;
}

std::optional<std::uint32_t> TokenDictionary::find(std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

double RowRef::number(std::size_t column) const {
  if (dataset_) return dataset_->number(row_, column);
  return std::get<double>(vector_->values[column]);
}

std::string_view RowRef::token(std::size_t column) const {
  if (dataset_) return dataset_->token(row_, column);
  return std::get<std::string>(vector_->values[column]);
}

Dataset::Dataset(std::shared_ptr<const Schema> schema, bool labeled)
    : schema_(std::move(schema)), labeled_(labeled) {
  if (!schema_) throw ContractError("dataset: null schema");
  columns_.reserve(schema_->feature_count());
  for (const auto& c : schema_->columns()) columns_.push_back(Column{c.kind, {}, {}, {}});
}

Dataset Dataset::from_rows(std::shared_ptr<const Schema> schema, bool labeled,
                           std::span<const FeatureVector> rows) {
  Dataset ds(std::move(schema), labeled);
  for (const auto& r : rows) ds.append(r);
  return ds;
}

void Dataset::append(const FeatureVector& row) {
  if (row.values.size() != columns_.size()) {
    throw ContractError("dataset: row has " + std::to_string(row.values.size()) + " values, schema has " +
                        std::to_string(columns_.size()) + " feature columns");
  }
  if (row.label.has_value() != labeled_) {
    throw ContractError(labeled_ ? "dataset: labeled dataset requires a label on every row"
                                 : "dataset: unlabeled dataset cannot hold labels");
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const bool is_number = std::holds_alternative<double>(row.values[c]);
    if (is_number != (columns_[c].kind == ColumnKind::Continuous)) {
      throw ContractError("dataset: value kind mismatch in column '" + schema_->column(c).name + "'");
    }
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    auto& col = columns_[c];
    if (col.kind == ColumnKind::Continuous) {
      col.numbers.push_back(std::get<double>(row.values[c]));
    } else {
      col.codes.push_back(col.dictionary.intern(std::get<std::string>(row.values[c])));
    }
  }
  if (labeled_) labels_.push_back(*row.label);
  ++size_;
}

Label Dataset::label(std::size_t row) const {
  if (!labeled_) throw StateError("dataset: unlabeled dataset has no labels");
  return labels_[row];
}

FeatureVector Dataset::row(std::size_t i) const {
  FeatureVector fv;
  fv.values.reserve(columns_.size());
  for (const auto& col : columns_) {
    if (col.kind == ColumnKind::Continuous) {
      fv.values.emplace_back(col.numbers[i]);
    } else {
      fv.values.emplace_back(col.dictionary.token(col.codes[i]));
    }
  }
  if (labeled_) fv.label = labels_[i];
  return fv;
}

Dataset Dataset::select(std::span<const std::size_t> rows, bool keep_labels) const {
  Dataset out(schema_, labeled_ && keep_labels);
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& src = columns_[c];
    auto& dst = out.columns_[c];
    if (src.kind == ColumnKind::Continuous) {
      dst.numbers.reserve(rows.size());
      for (auto r : rows) dst.numbers.push_back(src.numbers.at(r));
    } else {
      dst.codes.reserve(rows.size());
      for (auto r : rows) dst.codes.push_back(dst.dictionary.intern(src.dictionary.token(src.codes.at(r))));
    }
  }
  if (out.labeled_) {
    out.labels_.reserve(rows.size());
    for (auto r : rows) out.labels_.push_back(labels_[r]);
  }
  out.size_ = rows.size();
  return out;
}

Dataset Dataset::with_labels(std::span<const Label> labels) const {
  if (labels.size() != size_) throw ContractError("dataset: label count does not match row count");
  Dataset out = *this;
  out.labeled_ = true;
  out.labels_.assign(labels.begin(), labels.end());
  return out;
}

Dataset Dataset::without_labels() const {
  Dataset out = *this;
  out.labeled_ = false;
  out.labels_.clear();
  return out;
}

bool Dataset::operator==(const Dataset& other) const {
  if (*schema_ != *other.schema_ || labeled_ != other.labeled_ || size_ != other.size_) return false;
  if (labels_ != other.labels_) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& a = columns_[c];
    const auto& b = other.columns_[c];
    if (a.kind == ColumnKind::Continuous) {
      if (a.numbers != b.numbers) return false;
    } else {
      for (std::size_t r = 0; r < size_; ++r) {
        if (a.dictionary.token(a.codes[r]) != b.dictionary.token(b.codes[r])) return false;
      }
    }
  }
  return true;
}

ClassCounts count_labels(const Dataset& ds) {
  if (!ds.labeled()) throw StateError("dataset is unlabeled");
  ClassCounts counts;
  for (auto l : ds.labels()) counts.add(l);
  return counts;
}

}  // namespace mimic
