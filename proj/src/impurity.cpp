#include "mimic/impurity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mimic/error.hpp"

namespace mimic {

double entropy(const ClassCounts& counts) {
  const double n = counts.total();
  if (n <= 0.0) return 0.0;
  double h = 0.0;
  for (const double c : {counts.benign, counts.malicious}) {
    if (c > 0.0) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double information_gain(const ClassCounts& parent, std::span<const ClassCounts> children) {
  const double n = parent.total();
  if (n <= 0.0) return 0.0;
  double remainder = 0.0;
  for (const auto& t : children) remainder += (t.total() / n) * entropy(t);
  return std::max(0.0, entropy(parent) - remainder);
}

std::vector<ClassCounts> partition_counts(const Dataset& ds, std::span<const std::size_t> rows,
                                          const SplitRule& rule) {
  if (rule.column >= ds.schema().feature_count()) throw ContractError("split rule: column out of range");
  const auto kind = ds.schema().column(rule.column).kind;
  if (rule.kind == SplitRule::Kind::Threshold) {
    if (kind != ColumnKind::Continuous) throw ContractError("threshold rule on a categorical column");
    std::vector<ClassCounts> out(2);
    for (auto r : rows) out[ds.number(r, rule.column) <= rule.threshold ? 0 : 1].add(ds.label(r));
    return out;
  }
  if (kind != ColumnKind::Categorical) throw ContractError("categorical rule on a continuous column");
  std::map<std::string_view, ClassCounts> groups;
  for (auto r : rows) groups[ds.token(r, rule.column)].add(ds.label(r));
  std::vector<ClassCounts> out;
  out.reserve(groups.size());
  for (const auto& [token, counts] : groups) out.push_back(counts);
  return out;
}

double information_gain(const Dataset& ds, std::span<const std::size_t> rows, const SplitRule& rule) {
  ClassCounts parent;
  for (auto r : rows) parent.add(ds.label(r));
  const auto children = partition_counts(ds, rows, rule);
  return information_gain(parent, children);
}

}  // namespace mimic
