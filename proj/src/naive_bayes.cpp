#include "mimic/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mimic/error.hpp"

namespace mimic {

double TokenTable::probability(std::string_view token) const {
  const auto it = std::lower_bound(probabilities.begin(), probabilities.end(), token,
                                   [](const auto& p, std::string_view t) { return p.first < t; });
  return (it != probabilities.end() && it->first == token) ? it->second : unseen;
}

std::array<double, 2> NaiveBayesModel::log_joint(const RowRef& row) const {
  std::array<double, 2> lj{std::log(priors[0]), std::log(priors[1])};
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (const auto* g = std::get_if<ContinuousLikelihood>(&columns[c])) {
      const double x = row.number(c);
      for (int k = 0; k < 2; ++k) {
        const auto& s = g->by_class[k];
        const double d = x - s.mean;
        lj[k] += -0.5 * std::log(2.0 * std::numbers::pi * s.variance) - d * d / (2.0 * s.variance);
      }
    } else {
      const auto& t = std::get<CategoricalLikelihood>(columns[c]);
      const auto token = row.token(c);
      for (int k = 0; k < 2; ++k) lj[k] += std::log(t.by_class[k].probability(token));
    }
  }
  return lj;
}

std::array<double, 2> NaiveBayesModel::posterior(const RowRef& row) const {
  const auto lj = log_joint(row);
  const double top = std::max(lj[0], lj[1]);
  const double e0 = std::exp(lj[0] - top);
  const double e1 = std::exp(lj[1] - top);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

Label NaiveBayesModel::predict(const RowRef& row) const {
  const auto lj = log_joint(row);
  return lj[1] >= lj[0] ? Label::Malicious : Label::Benign;
}

namespace {

GaussianStat fit_gaussian(const std::vector<double>& xs, double floor) {
  if (xs.empty()) return {0.0, 1.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::max(var, floor)};
}

}  // namespace

NaiveBayesModel fit_naive_bayes(const Dataset& ds, std::span<const std::size_t> rows, const NaiveBayesParams& params) {
  if (!ds.labeled()) throw StateError("naive bayes: training data must be labeled");
  if (rows.empty()) throw TrainingError("naive bayes: empty training set");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (auto r : rows) by_class[static_cast<int>(ds.label(r))].push_back(r);

  const double n = static_cast<double>(rows.size());
  NaiveBayesModel model;
  const bool both = !by_class[0].empty() && !by_class[1].empty();
  for (int k = 0; k < 2; ++k) {
    const double count = static_cast<double>(by_class[k].size());
    model.priors[k] = both ? count / n : (count + 1.0) / (n + 2.0);
  }
  // Group members used for each class's likelihoods: its own rows, or all
  // rows when the class is absent.
  std::array<std::span<const std::size_t>, 2> members;
  for (int k = 0; k < 2; ++k) {
    members[k] = by_class[k].empty() ? rows : std::span<const std::size_t>(by_class[k]);
  }

  const auto& schema = ds.schema();
  model.columns.reserve(schema.feature_count());
  std::vector<double> xs;
  for (std::size_t c = 0; c < schema.feature_count(); ++c) {
    if (schema.column(c).kind == ColumnKind::Continuous) {
      ContinuousLikelihood g;
      for (int k = 0; k < 2; ++k) {
        xs.clear();
        for (auto r : members[k]) xs.push_back(ds.number(r, c));
        g.by_class[k] = fit_gaussian(xs, params.variance_floor);
      }
      model.columns.emplace_back(g);
      continue;
    }
    std::map<std::string_view, std::array<double, 2>> counts;
    for (auto r : rows) counts[ds.token(r, c)];
    for (int k = 0; k < 2; ++k) {
      for (auto r : members[k]) counts[ds.token(r, c)][k] += 1.0;
    }
    const double vocab = static_cast<double>(counts.size() + 1);
    CategoricalLikelihood t;
    for (int k = 0; k < 2; ++k) {
      const double denom = static_cast<double>(members[k].size()) + params.alpha * vocab;
      auto& table = t.by_class[k];
      table.probabilities.reserve(counts.size());
      for (const auto& [token, cnt] : counts) {
        table.probabilities.emplace_back(std::string(token), (cnt[k] + params.alpha) / denom);
      }
      table.unseen = params.alpha / denom;
    }
    model.columns.emplace_back(std::move(t));
  }
  return model;
}

}  // namespace mimic
