#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "fixtures.hpp"
#include "mimic/impurity.hpp"

using namespace mimic;

namespace {

// Entropy from a raw label list.
double brute_entropy(const std::vector<Label>& labels) {
  if (labels.empty()) return 0.0;
  double h = 0.0;
  for (const Label c : {Label::Benign, Label::Malicious}) {
    double n = 0;
    for (const Label l : labels) n += l == c ? 1 : 0;
    const double p = n / static_cast<double>(labels.size());
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

double brute_gain(const std::vector<Label>& parent, const std::vector<std::vector<Label>>& groups) {
  double remainder = 0.0;
  for (const auto& g : groups) remainder += static_cast<double>(g.size()) / parent.size() * brute_entropy(g);
  return brute_entropy(parent) - remainder;
}

ClassCounts counts_of(const std::vector<Label>& labels) {
  ClassCounts c;
  for (const Label l : labels) c.add(l);
  return c;
}

}  // namespace

TEST_CASE("entropy hand cases") {
  CHECK(entropy({5, 5}) == 1.0);
  CHECK(entropy({8, 0}) == 0.0);
  CHECK(entropy({0, 8}) == 0.0);
  CHECK(entropy({0, 0}) == 0.0);
  CHECK(std::abs(entropy({9, 5}) - 0.940286) < 1e-6);
}

TEST_CASE("information gain hand cases") {
  const ClassCounts parent{6, 4};
  const std::vector<ClassCounts> pure = {{6, 0}, {0, 4}};
  CHECK(information_gain(parent, pure) == doctest::Approx(entropy(parent)).epsilon(1e-15));
  const std::vector<ClassCounts> same = {parent};
  CHECK(information_gain(parent, same) == 0.0);

  const std::vector<ClassCounts> outlook = {{2, 3}, {4, 0}, {3, 2}};
  CHECK(std::abs(information_gain({9, 5}, outlook) - 0.246750) < 1e-6);
}

TEST_CASE("entropy and information gain agree with brute force on random partitions") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<Label> parent(n);
    const double p_mal = rng.uniform();
    for (auto& l : parent) l = rng.uniform() < p_mal ? Label::Malicious : Label::Benign;
    const std::size_t k = 1 + rng.below(5);
    std::vector<std::vector<Label>> groups(k);
    for (const Label l : parent) groups[rng.below(k)].push_back(l);

    std::vector<ClassCounts> children;
    for (const auto& g : groups) children.push_back(counts_of(g));
    const double expected = brute_gain(parent, groups);
    const double gain = information_gain(counts_of(parent), children);
    CHECK(std::abs(entropy(counts_of(parent)) - brute_entropy(parent)) <= 1e-9);
    CHECK(std::abs(gain - std::max(expected, 0.0)) <= 1e-9);
    CHECK(gain >= 0.0);
    CHECK(gain <= entropy(counts_of(parent)) + 1e-9);
  }
}

TEST_CASE("weather fixture: outlook carries the largest gain") {
  const auto ds = fixtures::weather();
  std::vector<std::size_t> rows(ds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;

  const double outlook = information_gain(ds, rows, SplitRule{SplitRule::Kind::Categorical, 0, 0.0});
  CHECK(std::abs(outlook - 0.246750) < 1e-6);

  // Exhaustive oracle: every categorical column, every midpoint of every
  // continuous column.
  double best_other = 0.0;
  for (std::size_t c = 1; c < ds.schema().feature_count(); ++c) {
    if (ds.schema().column(c).kind == ColumnKind::Categorical) {
      std::map<std::string, std::vector<Label>> groups;
      for (const auto r : rows) groups[std::string(ds.token(r, c))].push_back(ds.label(r));
      std::vector<std::vector<Label>> parts;
      for (auto& [_, g] : groups) parts.push_back(g);
      best_other = std::max(best_other, brute_gain(ds.labels(), parts));
    } else {
      std::vector<double> values;
      for (const auto r : rows) values.push_back(ds.number(r, c));
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double t = (values[i] + values[i + 1]) / 2;
        std::vector<std::vector<Label>> parts(2);
        for (const auto r : rows) parts[ds.number(r, c) <= t ? 0 : 1].push_back(ds.label(r));
        best_other = std::max(best_other, brute_gain(ds.labels(), parts));
        CHECK(std::abs(information_gain(ds, rows, SplitRule{SplitRule::Kind::Threshold, c, t}) -
                       brute_gain(ds.labels(), parts)) <= 1e-9);
      }
    }
  }
  CHECK(best_other < outlook);
}

TEST_CASE("partition_counts groups categorical rows by token") {
  const auto ds = fixtures::weather();
  std::vector<std::size_t> rows(ds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const auto parts = partition_counts(ds, rows, SplitRule{SplitRule::Kind::Categorical, 0, 0.0});
  REQUIRE(parts.size() == 3);
  double total = 0.0;
  for (const auto& p : parts) total += p.total();
  CHECK(total == 14.0);
}
