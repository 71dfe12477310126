#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mimic/decision_tree.hpp"

namespace mimic {

struct RandomForestModel {
  std::vector<DecisionTreeModel> trees;
  std::size_t feature_subsample = 0;  // resolved value used in training

  std::size_t tree_count() const noexcept { return trees.size(); }
  std::size_t malicious_votes(const RowRef& row) const;
  // Majority vote; a tied vote is Malicious.
  Label predict(const RowRef& row) const;
  // Fraction of trees voting Malicious.
  double score(const RowRef& row) const;

  bool operator==(const RandomForestModel&) const = default;
};

std::size_t resolve_feature_subsample(const ForestParams& params, std::size_t feature_count);

/// Tree t is grown from its own stream derive_seed(seed, t): first the
/// bootstrap draw, then the per-node column orders. Results do not depend on
/// `threads`.
RandomForestModel fit_random_forest(const Dataset& ds, std::span<const std::size_t> rows, const ForestParams& params,
                                    std::uint64_t seed, unsigned threads);

}  // namespace mimic
