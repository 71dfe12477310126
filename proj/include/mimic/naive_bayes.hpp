#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/dataset.hpp"

namespace mimic {

struct GaussianStat {
  double mean = 0.0;
  double variance = 1.0;

  bool operator==(const GaussianStat&) const = default;
};

// Laplace-smoothed token probabilities for one class; tokens sorted.
struct TokenTable {
  std::vector<std::pair<std::string, double>> probabilities;
  double unseen = 0.0;

  double probability(std::string_view token) const;
  bool operator==(const TokenTable&) const = default;
};

struct ContinuousLikelihood {
  std::array<GaussianStat, 2> by_class;  // indexed by Label
  bool operator==(const ContinuousLikelihood&) const = default;
};

struct CategoricalLikelihood {
  std::array<TokenTable, 2> by_class;
  bool operator==(const CategoricalLikelihood&) const = default;
};

using ColumnLikelihood = std::variant<ContinuousLikelihood, CategoricalLikelihood>;

struct NaiveBayesModel {
  std::array<double, 2> priors{0.5, 0.5};  // indexed by Label
  std::vector<ColumnLikelihood> columns;

  // log P(C) + sum_i log P(x_i | C) for both classes.
  std::array<double, 2> log_joint(const RowRef& row) const;
  // Normalized posterior; entries sum to 1.
  std::array<double, 2> posterior(const RowRef& row) const;
  // argmax of the posterior; an exact tie is Malicious.
  Label predict(const RowRef& row) const;
  double score(const RowRef& row) const { return posterior(row)[1]; }

  bool operator==(const NaiveBayesModel&) const = default;
};

/// Priors are class frequencies. Continuous columns get a per-class Gaussian
/// (mean, population variance floored at variance_floor). Categorical columns
/// get (count + alpha) / (class rows + alpha * |V|), where V is every token in
/// the training rows plus one bucket for unseen tokens. A class with no
/// training rows gets a prior of 1 / (N + 2) and the pooled likelihoods.
NaiveBayesModel fit_naive_bayes(const Dataset& ds, std::span<const std::size_t> rows, const NaiveBayesParams& params);

}  // namespace mimic
