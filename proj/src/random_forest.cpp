#include "mimic/random_forest.hpp"

#include <cmath>

#include "mimic/error.hpp"
#include "mimic/parallel.hpp"

namespace mimic {

std::size_t RandomForestModel::malicious_votes(const RowRef& row) const {
  std::size_t votes = 0;
  for (const auto& t : trees) votes += t.predict(row) == Label::Malicious ? 1 : 0;
  return votes;
}

Label RandomForestModel::predict(const RowRef& row) const {
  return 2 * malicious_votes(row) >= trees.size() ? Label::Malicious : Label::Benign;
}

double RandomForestModel::score(const RowRef& row) const {
  return static_cast<double>(malicious_votes(row)) / static_cast<double>(trees.size());
}

std::size_t resolve_feature_subsample(const ForestParams& params, std::size_t feature_count) {
  if (params.feature_subsample > 0) {
    return std::min<std::size_t>(static_cast<std::size_t>(params.feature_subsample), feature_count);
  }
  return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(feature_count))));
}

RandomForestModel fit_random_forest(const Dataset& ds, std::span<const std::size_t> rows, const ForestParams& params,
                                    std::uint64_t seed, unsigned threads) {
  if (rows.empty()) throw TrainingError("random forest: empty training set");
  const TreeTrainingSet set(ds, rows);
  RandomForestModel forest;
  forest.feature_subsample = resolve_feature_subsample(params, ds.schema().feature_count());
  forest.trees.resize(static_cast<std::size_t>(params.tree_count));

  parallel_for(forest.trees.size(), threads, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::uint32_t> weights(rows.size(), 0);
    if (params.bootstrap) {
      for (std::size_t i = 0; i < rows.size(); ++i) weights[rng.below(rows.size())] += 1;
    } else {
      std::fill(weights.begin(), weights.end(), 1);
    }
    forest.trees[t] = grow_tree(set, weights, params.tree, forest.feature_subsample, &rng);
  });
  return forest;
}

}  // namespace mimic
