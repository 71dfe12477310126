#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/dataset.hpp"
#include "mimic/rng.hpp"

namespace mimic {

struct TreeNode {
  enum class Kind : std::uint8_t { Leaf, Threshold, Categorical };

  Kind kind = Kind::Leaf;
  std::uint32_t column = 0;
  // Threshold split: value <= threshold -> left, otherwise right.
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  // Categorical split: one child per token seen at this node, sorted by token.
  // Tokens not listed follow `fallback`, the most populated child.
  std::vector<std::pair<std::string, std::uint32_t>> branches{};
  std::uint32_t fallback = 0;

  // Training statistics of the rows that reached this node.
  Label label = Label::Malicious;
  double malicious_fraction = 0.0;
  std::uint64_t sample_count = 0;

  bool operator==(const TreeNode&) const = default;
};

// Nodes in pre-order; nodes[0] is the root and children always follow their
// parent.
struct DecisionTreeModel {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(const RowRef& row) const;
  Label predict(const RowRef& row) const { return leaf_for(row).label; }
  double score(const RowRef& row) const { return leaf_for(row).malicious_fraction; }

  int depth() const;
  std::size_t leaf_count() const;

  bool operator==(const DecisionTreeModel&) const = default;
};

/// Column preprocessing for one set of training rows. Continuous values are
/// replaced by dense ranks so split search can count instead of sort; a
/// forest builds this once and shares it read-only across trees.
class TreeTrainingSet {
 public:
  TreeTrainingSet(const Dataset& ds, std::span<const std::size_t> rows);

  const Dataset& dataset() const noexcept { return *dataset_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t feature_count() const noexcept { return columns_.size(); }

 private:
  friend class TreeGrower;

  struct Column {
    ColumnKind kind;
    // continuous: dense rank per local row, distinct sorted values
    // categorical: dictionary code per local row, codes in token order
    std::vector<std::uint32_t> key;
    std::vector<double> distinct;
    std::vector<std::uint32_t> code_order;
    std::size_t cardinality = 0;
  };

  const Dataset* dataset_;
  std::vector<Label> labels_;
  std::vector<Column> columns_;
};

/// Grows one tree over the training set. `weights[i]` is the multiplicity of
/// local row i (0 excludes it). With features_per_split == 0 every column is
/// searched at every node. Otherwise columns are visited in a random order
/// drawn from `rng`, and the search stops once at least features_per_split
/// columns were examined and a split with positive gain was found.
DecisionTreeModel grow_tree(const TreeTrainingSet& set, std::span<const std::uint32_t> weights,
                            const TreeParams& params, std::size_t features_per_split, Rng* rng);

DecisionTreeModel fit_decision_tree(const Dataset& ds, std::span<const std::size_t> rows, const TreeParams& params);

}  // namespace mimic
