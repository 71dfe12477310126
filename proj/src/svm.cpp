#include "mimic/svm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mimic/error.hpp"
#include "mimic/rng.hpp"

namespace mimic {

std::size_t SvmModel::dimension() const {
  std::size_t d = 0;
  for (const auto& e : encoding) d += e.width();
  return d;
}

double SvmModel::margin(const RowRef& row) const {
  double m = bias;
  for (std::size_t c = 0; c < encoding.size(); ++c) {
    const auto& e = encoding[c];
    if (e.kind == ColumnKind::Continuous) {
      m += weights[e.offset] * ((row.number(c) - e.mean) / e.stddev);
    } else {
      const auto token = row.token(c);
      const auto it = std::lower_bound(e.tokens.begin(), e.tokens.end(), token);
      if (it != e.tokens.end() && *it == token) m += weights[e.offset + static_cast<std::size_t>(it - e.tokens.begin())];
    }
  }
  return m;
}

double SvmModel::score(const RowRef& row) const { return 1.0 / (1.0 + std::exp(-margin(row))); }

namespace {

// Training rows in encoded form: standardized continuous values plus the
// active indicator slots.
struct EncodedRows {
  std::size_t continuous = 0;
  std::vector<std::size_t> continuous_slots;
  std::vector<double> values;             // rows x continuous
  std::vector<std::uint32_t> indicators;  // rows x categorical, UINT32_MAX when unseen
  std::size_t categorical = 0;
  std::vector<double> y;

  double margin(std::size_t i, const std::vector<double>& w, double b) const {
    double m = b;
    const double* x = values.data() + i * continuous;
    for (std::size_t j = 0; j < continuous; ++j) m += w[continuous_slots[j]] * x[j];
    const std::uint32_t* ind = indicators.data() + i * categorical;
    for (std::size_t j = 0; j < categorical; ++j) m += w[ind[j]];
    return m;
  }
};

double objective(const EncodedRows& data, const std::vector<double>& w, double b, double lambda) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.y.size(); ++i) hinge += std::max(0.0, 1.0 - data.y[i] * data.margin(i, w, b));
  double norm2 = b * b;
  for (double v : w) norm2 += v * v;
  return 0.5 * lambda * norm2 + hinge / static_cast<double>(data.y.size());
}

}  // namespace

SvmModel fit_svm(const Dataset& ds, std::span<const std::size_t> rows, const SvmParams& params, std::uint64_t seed,
                 SvmTrainingTrace* trace) {
  if (!ds.labeled()) throw StateError("svm: training data must be labeled");
  if (rows.empty()) throw TrainingError("svm: empty training set");
  const auto counts = [&] {
    ClassCounts cc;
    for (auto r : rows) cc.add(ds.label(r));
    return cc;
  }();
  if (counts.benign == 0 || counts.malicious == 0) throw TrainingError("svm: training data has a single class");

  const auto& schema = ds.schema();
  const double n = static_cast<double>(rows.size());
  SvmModel model;
  std::size_t offset = 0;
  for (std::size_t c = 0; c < schema.feature_count(); ++c) {
    SvmColumnEncoding e;
    e.kind = schema.column(c).kind;
    e.offset = offset;
    if (e.kind == ColumnKind::Continuous) {
      double mean = 0.0;
      for (auto r : rows) mean += ds.number(r, c);
      mean /= n;
      double var = 0.0;
      for (auto r : rows) var += (ds.number(r, c) - mean) * (ds.number(r, c) - mean);
      e.mean = mean;
      e.stddev = std::max(std::sqrt(var / n), kMinStddev);
    } else {
      std::map<std::string_view, int> seen;
      for (auto r : rows) seen[ds.token(r, c)];
      for (const auto& [tok, unused] : seen) e.tokens.emplace_back(tok);
    }
    offset += e.width();
    model.encoding.push_back(std::move(e));
  }
  model.weights.assign(offset, 0.0);

  EncodedRows data;
  for (const auto& e : model.encoding) {
    if (e.kind == ColumnKind::Continuous) {
      data.continuous_slots.push_back(e.offset);
    } else {
      ++data.categorical;
    }
  }
  data.continuous = data.continuous_slots.size();
  data.values.reserve(rows.size() * data.continuous);
  data.indicators.reserve(rows.size() * data.categorical);
  for (auto r : rows) {
    for (std::size_t c = 0; c < schema.feature_count(); ++c) {
      const auto& e = model.encoding[c];
      if (e.kind == ColumnKind::Continuous) {
        data.values.push_back((ds.number(r, c) - e.mean) / e.stddev);
      } else {
        const auto tok = ds.token(r, c);
        const auto it = std::lower_bound(e.tokens.begin(), e.tokens.end(), tok);
        data.indicators.push_back(static_cast<std::uint32_t>(e.offset + static_cast<std::size_t>(it - e.tokens.begin())));
      }
    }
    data.y.push_back(ds.label(r) == Label::Malicious ? 1.0 : -1.0);
  }

  const double lambda = params.lambda;
  const double radius2 = 1.0 / lambda;
  std::vector<double>& w = model.weights;
  double& b = model.bias;
  std::vector<double> saved_w = w;
  double saved_b = b;
  double best = objective(data, w, b, lambda);
  std::vector<std::size_t> order(rows.size());
  std::uint64_t t = 0;

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    for (const auto i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double m = data.margin(i, w, b);
      const double shrink = 1.0 - eta * lambda;
      for (double& v : w) v *= shrink;
      b *= shrink;
      if (data.y[i] * m < 1.0) {
        const double step = eta * data.y[i];
        const double* x = data.values.data() + i * data.continuous;
        for (std::size_t j = 0; j < data.continuous; ++j) w[data.continuous_slots[j]] += step * x[j];
        const std::uint32_t* ind = data.indicators.data() + i * data.categorical;
        for (std::size_t j = 0; j < data.categorical; ++j) w[ind[j]] += step;
        b += step;
      }
      double norm2 = b * b;
      for (double v : w) norm2 += v * v;
      if (norm2 > radius2) {
        const double scale = std::sqrt(radius2 / norm2);
        for (double& v : w) v *= scale;
        b *= scale;
      }
    }
    // Epoch-level acceptance: an epoch that raises the objective is rolled
    // back; the step counter keeps advancing so the next attempt is smaller.
    const double value = objective(data, w, b, lambda);
    if (value <= best) {
      best = value;
      saved_w = w;
      saved_b = b;
    } else {
      w = saved_w;
      b = saved_b;
    }
    if (trace) trace->objective.push_back(best);
  }
  return model;
}

}  // namespace mimic
