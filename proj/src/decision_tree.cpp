#include "mimic/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mimic/error.hpp"

namespace mimic {

const TreeNode& DecisionTreeModel::leaf_for(const RowRef& row) const {
  std::uint32_t idx = 0;
  while (true) {
    const TreeNode& node = nodes[idx];
    switch (node.kind) {
      case TreeNode::Kind::Leaf:
        return node;
      case TreeNode::Kind::Threshold:
        idx = row.number(node.column) <= node.threshold ? node.left : node.right;
        break;
      case TreeNode::Kind::Categorical: {
        const auto token = row.token(node.column);
        const auto it = std::lower_bound(node.branches.begin(), node.branches.end(), token,
                                         [](const auto& b, std::string_view t) { return b.first < t; });
        idx = (it != node.branches.end() && it->first == token) ? it->second : node.fallback;
        break;
      }
    }
  }
}

int DecisionTreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    deepest = std::max(deepest, d[i]);
    if (n.kind == TreeNode::Kind::Threshold) {
      d[n.left] = d[n.right] = d[i] + 1;
    } else if (n.kind == TreeNode::Kind::Categorical) {
      for (const auto& b : n.branches) d[b.second] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTreeModel::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.kind == TreeNode::Kind::Leaf; }));
}

TreeTrainingSet::TreeTrainingSet(const Dataset& ds, std::span<const std::size_t> rows) : dataset_(&ds) {
  if (!ds.labeled()) throw StateError("tree training requires a labeled dataset");
  labels_.reserve(rows.size());
  for (auto r : rows) labels_.push_back(ds.label(r));

  const auto& schema = ds.schema();
  columns_.reserve(schema.feature_count());
  for (std::size_t c = 0; c < schema.feature_count(); ++c) {
    Column col{schema.column(c).kind, {}, {}, {}, 0};
    col.key.resize(rows.size());
    if (col.kind == ColumnKind::Continuous) {
      col.distinct.reserve(rows.size());
      for (auto r : rows) col.distinct.push_back(ds.number(r, c));
      std::sort(col.distinct.begin(), col.distinct.end());
      col.distinct.erase(std::unique(col.distinct.begin(), col.distinct.end()), col.distinct.end());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto it = std::lower_bound(col.distinct.begin(), col.distinct.end(), ds.number(rows[i], c));
        col.key[i] = static_cast<std::uint32_t>(it - col.distinct.begin());
      }
      col.cardinality = col.distinct.size();
    } else {
      const auto& dict = ds.dictionary(c);
      for (std::size_t i = 0; i < rows.size(); ++i) col.key[i] = ds.code(rows[i], c);
      col.cardinality = dict.size();
      col.code_order.resize(dict.size());
      std::iota(col.code_order.begin(), col.code_order.end(), std::uint32_t{0});
      std::sort(col.code_order.begin(), col.code_order.end(),
                [&](std::uint32_t a, std::uint32_t b) { return dict.token(a) < dict.token(b); });
    }
    columns_.push_back(std::move(col));
  }
}

// Split search works on integer class counts. With n*H(n) expanded as
// n*log2(n) - b*log2(b) - m*log2(m), every entropy term is a table lookup.
class TreeGrower {
 public:
  TreeGrower(const TreeTrainingSet& set, std::span<const std::uint32_t> weights, const TreeParams& params,
             std::size_t features_per_split, Rng* rng)
      : set_(set), weights_(weights), params_(params), features_per_split_(features_per_split), rng_(rng) {
    if (weights.size() != set.size()) throw ContractError("grow_tree: weight vector size mismatch");
    std::uint64_t total = 0;
    for (std::uint32_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0) {
        samples_.push_back(i);
        total += weights[i];
      }
    }
    if (samples_.empty()) throw TrainingError("cannot grow a tree on an empty training set");
    xlogx_.resize(total + 1);
    xlogx_[0] = 0.0;
    for (std::uint64_t k = 1; k <= total; ++k) {
      const double x = static_cast<double>(k);
      xlogx_[k] = x * std::log2(x);
    }
    std::size_t widest = 0;
    for (const auto& c : set.columns_) widest = std::max(widest, c.cardinality);
    count_b_.assign(widest, 0);
    count_m_.assign(widest, 0);
    scratch_.resize(samples_.size());
    column_order_.resize(set.feature_count());
    std::iota(column_order_.begin(), column_order_.end(), std::uint32_t{0});
  }

  DecisionTreeModel run() {
    build(0, samples_.size(), 0);
    return DecisionTreeModel{std::move(nodes_)};
  }

 private:
  struct Candidate {
    bool valid = false;
    double gain = 0.0;
    std::uint32_t column = 0;
    std::uint32_t rank = 0;  // continuous: ranks <= rank go left
    double threshold = 0.0;
  };

  static bool better(const Candidate& a, const Candidate& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.column != b.column) return a.column < b.column;
    return a.rank < b.rank;
  }

  double weighted_entropy(std::uint64_t b, std::uint64_t m) const {
    return xlogx_[b + m] - xlogx_[b] - xlogx_[m];
  }

  void build(std::size_t begin, std::size_t end, int depth) {
    std::uint64_t b = 0, m = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto s = samples_[i];
      (set_.labels_[s] == Label::Malicious ? m : b) += weights_[s];
    }
    const std::uint64_t n = b + m;
    const auto self = static_cast<std::uint32_t>(nodes_.size());
    {
      TreeNode node;
      node.label = m >= b ? Label::Malicious : Label::Benign;
      node.malicious_fraction = static_cast<double>(m) / static_cast<double>(n);
      node.sample_count = n;
      nodes_.push_back(std::move(node));
    }
    if (b == 0 || m == 0 || depth >= params_.max_depth ||
        n < static_cast<std::uint64_t>(params_.min_samples_split)) {
      return;
    }

    const double parent = weighted_entropy(b, m);
    Candidate best;
    if (features_per_split_ > 0 && rng_ != nullptr) rng_->shuffle(column_order_);
    std::size_t examined = 0;
    for (const auto column : column_order_) {
      Candidate cand = set_.columns_[column].kind == ColumnKind::Continuous
                           ? search_continuous(column, begin, end, n, parent)
                           : search_categorical(column, begin, end, n, parent);
      if (cand.valid && cand.gain > params_.ig_epsilon && better(cand, best)) best = cand;
      ++examined;
      if (features_per_split_ > 0 && examined >= features_per_split_ && best.valid) break;
    }
    if (!best.valid) return;

    const auto& col = set_.columns_[best.column];
    if (col.kind == ColumnKind::Continuous) {
      const auto mid = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                      samples_.begin() + static_cast<std::ptrdiff_t>(end),
                                      [&](std::uint32_t s) { return col.key[s] <= best.rank; });
      const auto split = static_cast<std::size_t>(mid - samples_.begin());
      nodes_[self].kind = TreeNode::Kind::Threshold;
      nodes_[self].column = best.column;
      nodes_[self].threshold = best.threshold;
      nodes_[self].left = static_cast<std::uint32_t>(nodes_.size());
      build(begin, split, depth + 1);
      nodes_[self].right = static_cast<std::uint32_t>(nodes_.size());
      build(split, end, depth + 1);
      return;
    }

    // Group the node's samples by token, in token order.
    std::vector<std::uint64_t> group_size(col.cardinality, 0);
    for (std::size_t i = begin; i < end; ++i) group_size[col.key[samples_[i]]] += 1;
    std::vector<std::size_t> offset(col.cardinality, 0);
    std::vector<std::uint32_t> present;
    std::size_t cursor = begin;
    for (const auto code : col.code_order) {
      if (group_size[code] == 0) continue;
      present.push_back(code);
      offset[code] = cursor;
      cursor += group_size[code];
    }
    {
      std::vector<std::size_t> fill = offset;
      for (std::size_t i = begin; i < end; ++i) {
        const auto s = samples_[i];
        scratch_[fill[col.key[s]]++] = s;
      }
      std::copy(scratch_.begin() + static_cast<std::ptrdiff_t>(begin),
                scratch_.begin() + static_cast<std::ptrdiff_t>(end),
                samples_.begin() + static_cast<std::ptrdiff_t>(begin));
    }
    const auto& dict = set_.dataset().dictionary(best.column);
    nodes_[self].kind = TreeNode::Kind::Categorical;
    nodes_[self].column = best.column;
    std::uint64_t fallback_weight = 0;
    bool have_fallback = false;
    for (const auto code : present) {
      const auto child = static_cast<std::uint32_t>(nodes_.size());
      nodes_[self].branches.emplace_back(dict.token(code), child);
      build(offset[code], offset[code] + group_size[code], depth + 1);
      const auto w = nodes_[child].sample_count;
      if (!have_fallback || w > fallback_weight) {
        nodes_[self].fallback = child;
        fallback_weight = w;
        have_fallback = true;
      }
    }
  }

  Candidate search_continuous(std::uint32_t column, std::size_t begin, std::size_t end, std::uint64_t n,
                              double parent) {
    const auto& col = set_.columns_[column];
    touched_.clear();
    for (std::size_t i = begin; i < end; ++i) {
      const auto s = samples_[i];
      const auto r = col.key[s];
      if (count_b_[r] == 0 && count_m_[r] == 0) touched_.push_back(r);
      (set_.labels_[s] == Label::Malicious ? count_m_[r] : count_b_[r]) += weights_[s];
    }
    Candidate best;
    if (touched_.size() < 2) {
      reset_counts();
      return best;
    }
    if (col.cardinality > 4 * touched_.size()) {
      std::sort(touched_.begin(), touched_.end());
    } else {
      // Dense enough: walking the rank range is cheaper than sorting.
      const auto [lo, hi] = std::minmax_element(touched_.begin(), touched_.end());
      const auto first = *lo, last = *hi;
      touched_.clear();
      for (auto r = first; r <= last; ++r) {
        if (count_b_[r] != 0 || count_m_[r] != 0) touched_.push_back(r);
      }
    }
    const std::uint64_t min_leaf = static_cast<std::uint64_t>(params_.min_samples_leaf);
    std::uint64_t left_b = 0, left_m = 0, total_b = 0;
    for (const auto r : touched_) total_b += count_b_[r];
    const std::uint64_t total_m = n - total_b;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < touched_.size(); ++i) {
      left_b += count_b_[touched_[i]];
      left_m += count_m_[touched_[i]];
      const std::uint64_t left_n = left_b + left_m;
      if (left_n < min_leaf) continue;
      if (n - left_n < min_leaf) break;
      const double children = weighted_entropy(left_b, left_m) + weighted_entropy(total_b - left_b, total_m - left_m);
      const double gain = std::max(0.0, (parent - children) * inv_n);
      if (!best.valid || gain > best.gain) {
        best.valid = true;
        best.gain = gain;
        best.column = column;
        best.rank = touched_[i];
        const double lo = col.distinct[touched_[i]];
        const double hi = col.distinct[touched_[i + 1]];
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        best.threshold = mid;
      }
    }
    reset_counts();
    return best;
  }

  Candidate search_categorical(std::uint32_t column, std::size_t begin, std::size_t end, std::uint64_t n,
                               double parent) {
    const auto& col = set_.columns_[column];
    touched_.clear();
    for (std::size_t i = begin; i < end; ++i) {
      const auto s = samples_[i];
      const auto code = col.key[s];
      if (count_b_[code] == 0 && count_m_[code] == 0) touched_.push_back(code);
      (set_.labels_[s] == Label::Malicious ? count_m_[code] : count_b_[code]) += weights_[s];
    }
    Candidate best;
    if (touched_.size() >= 2) {
      const std::uint64_t min_leaf = static_cast<std::uint64_t>(params_.min_samples_leaf);
      double children = 0.0;
      bool ok = true;
      // Sum in token order so the result does not depend on sample order.
      std::sort(touched_.begin(), touched_.end(), [&](std::uint32_t a, std::uint32_t b) {
        return set_.dataset().dictionary(column).token(a) < set_.dataset().dictionary(column).token(b);
      });
      for (const auto code : touched_) {
        if (count_b_[code] + count_m_[code] < min_leaf) ok = false;
        children += weighted_entropy(count_b_[code], count_m_[code]);
      }
      if (ok) {
        best.valid = true;
        best.gain = std::max(0.0, (parent - children) / static_cast<double>(n));
        best.column = column;
      }
    }
    reset_counts();
    return best;
  }

  void reset_counts() {
    for (const auto r : touched_) count_b_[r] = count_m_[r] = 0;
  }

  const TreeTrainingSet& set_;
  std::span<const std::uint32_t> weights_;
  TreeParams params_;
  std::size_t features_per_split_;
  Rng* rng_;

  std::vector<std::uint32_t> samples_;
  std::vector<std::uint32_t> scratch_;
  std::vector<double> xlogx_;
  std::vector<std::uint64_t> count_b_, count_m_;
  std::vector<std::uint32_t> touched_;
  std::vector<std::uint32_t> column_order_;
  std::vector<TreeNode> nodes_;
};

DecisionTreeModel grow_tree(const TreeTrainingSet& set, std::span<const std::uint32_t> weights,
                            const TreeParams& params, std::size_t features_per_split, Rng* rng) {
  return TreeGrower(set, weights, params, features_per_split, rng).run();
}

DecisionTreeModel fit_decision_tree(const Dataset& ds, std::span<const std::size_t> rows, const TreeParams& params) {
  if (rows.empty()) throw TrainingError("decision tree: empty training set");
  TreeTrainingSet set(ds, rows);
  std::vector<std::uint32_t> weights(rows.size(), 1);
  return grow_tree(set, weights, params, 0, nullptr);
}

}  // namespace mimic
