#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mimic/dataset.hpp"

namespace mimic {

// Shannon entropy in bits over the two classes; 0 for an empty set.
double entropy(const ClassCounts& counts);

// H(parent) - sum_t |t|/|parent| * H(t), clamped at 0. `children` must
// partition `parent` (their totals add up to parent.total()).
double information_gain(const ClassCounts& parent, std::span<const ClassCounts> children);

// A candidate partition of a node's rows.
struct SplitRule {
  enum class Kind { Threshold, Categorical };
  Kind kind = Kind::Threshold;
  std::size_t column = 0;
  double threshold = 0.0;  // Threshold: value <= threshold goes left
};

// Rows grouped by the rule: two groups for a threshold (<=, >), one group per
// distinct token (in token order) for a categorical column.
std::vector<ClassCounts> partition_counts(const Dataset& ds, std::span<const std::size_t> rows,
                                          const SplitRule& rule);

double information_gain(const Dataset& ds, std::span<const std::size_t> rows, const SplitRule& rule);

}  // namespace mimic
