#include "mimic/eval.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mimic/error.hpp"
#include "mimic/rng.hpp"

namespace mimic {

void ConfusionMatrix::add(Label truth, Label predicted) {
  if (truth == Label::Malicious) {
    (predicted == Label::Malicious ? tp : fn) += 1;
  } else {
    (predicted == Label::Malicious ? fp : tn) += 1;
  }
}

ConfusionMatrix tally(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw ContractError("tally: length mismatch");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < truth.size(); ++i) c.add(truth[i], predicted[i]);
  return c;
}

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Rates metrics(const ConfusionMatrix& c) {
  if (c.total() == 0) throw ContractError("metrics: empty confusion matrix");
  Rates r;
  r.acc = ratio(c.tp + c.tn, c.total());
  r.tpr = ratio(c.tp, c.tp + c.fn);
  r.fpr = ratio(c.fp, c.fp + c.tn);
  r.tnr = ratio(c.tn, c.tn + c.fp);
  r.fnr = ratio(c.fn, c.fn + c.tp);
  return r;
}

RocResult roc_auc(std::span<const ScoredLabel> scores) {
  std::uint64_t positives = 0, negatives = 0;
  for (const auto& s : scores) (s.truth == Label::Malicious ? positives : negatives) += 1;
  if (positives == 0 || negatives == 0) throw ContractError("roc_auc: both classes are required");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a].score > scores[b].score; });

  RocResult out;
  out.points.push_back({0.0, 0.0});
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  std::uint64_t tp = 0, fp = 0;
  // Rank statistic, accumulated per tie group from the top: each malicious
  // row beats every benign row strictly below it and ties half of its group.
  double wins = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::uint64_t group_pos = 0, group_neg = 0;
    const double s = scores[order[i]].score;
    std::size_t j = i;
    for (; j < order.size() && scores[order[j]].score == s; ++j) {
      (scores[order[j]].truth == Label::Malicious ? group_pos : group_neg) += 1;
    }
    const double benign_below = static_cast<double>(negatives - fp - group_neg);
    wins += static_cast<double>(group_pos) * (benign_below + 0.5 * static_cast<double>(group_neg));
    tp += group_pos;
    fp += group_neg;
    out.points.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p});
    i = j;
  }
  out.auc = wins / (p * n);
  return out;
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

EvaluationReport evaluate_rows(const TrainedModel& model, const Dataset& data, std::span<const std::size_t> rows) {
  if (!data.labeled()) throw StateError("evaluation data must be labeled");
  if (rows.empty()) throw ContractError("evaluation data is empty");
  check_schema(model, data);
  EvaluationReport report;
  std::vector<ScoredLabel> scored;
  scored.reserve(rows.size());
  for (auto r : rows) {
    const auto row = data.ref(r);
    const Label truth = data.label(r);
    report.confusion.add(truth, predict_row(model, row));
    scored.push_back({score_row(model, row), truth});
  }
  report.rates = metrics(report.confusion);
  const auto& c = report.confusion;
  if (c.tp + c.fn > 0 && c.tn + c.fp > 0) {
    auto roc = roc_auc(scored);
    report.auc = roc.auc;
    report.roc = std::move(roc.points);
  }
  return report;
}

EvaluationReport evaluate(const TrainedModel& model, const Dataset& test) {
  std::vector<std::size_t> rows(test.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return evaluate_rows(model, test, rows);
}

ConfusionMatrix confusion(const TrainedModel& model, const Dataset& test) {
  if (!test.labeled()) throw StateError("confusion: test data must be labeled");
  if (test.empty()) throw ContractError("confusion: test data is empty");
  return tally(test.labels(), predict_all(model, test));
}

std::vector<std::vector<std::size_t>> assign_folds(const Dataset& data, const CvConfig& cfg) {
  if (cfg.k < 2) throw ConfigError("cross-validation needs k >= 2");
  const auto k = static_cast<std::size_t>(cfg.k);
  if (k > data.size()) {
    throw ConfigError("cross-validation: k=" + std::to_string(k) + " exceeds " + std::to_string(data.size()) +
                      " rows");
  }
  Rng rng(cfg.seed);
  std::vector<std::size_t> order;
  order.reserve(data.size());
  if (cfg.stratified) {
    std::vector<std::size_t> per_class[2];
    for (std::size_t i = 0; i < data.size(); ++i) per_class[static_cast<int>(data.label(i))].push_back(i);
    for (auto& cls : per_class) {
      rng.shuffle(cls);
      order.insert(order.end(), cls.begin(), cls.end());
    }
  } else {
    order.resize(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < order.size(); ++i) folds[i % k].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

namespace {

void accumulate(std::optional<double>& mean, const std::vector<std::optional<double>>& values,
                const char* name, std::vector<std::string>& warnings) {
  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++defined;
    }
  }
  if (defined < values.size()) {
    warnings.push_back(std::string(name) + " undefined in " + std::to_string(values.size() - defined) +
                       " fold(s); excluded from the mean");
  }
  mean = defined ? std::optional<double>(sum / static_cast<double>(defined)) : std::nullopt;
}

}  // namespace

CvResult cross_validate(const Dataset& data, const ClassifierSpec& spec, const CvConfig& cfg,
                        const TrainOptions& options) {
  if (!data.labeled()) throw StateError("cross-validation data must be labeled");
  const auto folds = assign_folds(data, cfg);
  CvResult result;
  std::vector<std::size_t> train_rows;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    train_rows.clear();
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    TrainedModel model;
    try {
      model = train(data, train_rows, spec, options);
    } catch (const TrainingError& e) {
      throw TrainingError("fold " + std::to_string(f) + ": " + e.what());
    }
    result.per_fold.push_back(evaluate_rows(model, data, folds[f]));
  }
  std::vector<std::optional<double>> acc, tpr, fpr, tnr, fnr, auc;
  for (const auto& r : result.per_fold) {
    acc.push_back(r.rates.acc);
    tpr.push_back(r.rates.tpr);
    fpr.push_back(r.rates.fpr);
    tnr.push_back(r.rates.tnr);
    fnr.push_back(r.rates.fnr);
    auc.push_back(r.auc);
  }
  accumulate(result.mean.acc, acc, "acc", result.warnings);
  accumulate(result.mean.tpr, tpr, "tpr", result.warnings);
  accumulate(result.mean.fpr, fpr, "fpr", result.warnings);
  accumulate(result.mean.tnr, tnr, "tnr", result.warnings);
  accumulate(result.mean.fnr, fnr, "fnr", result.warnings);
  accumulate(result.mean.auc, auc, "auc", result.warnings);
  return result;
}

std::size_t pick_winner(std::span<const SelectionRow> table) {
  if (table.empty()) throw SelectionError("select_best: empty roster");
  constexpr double kLowest = -std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& a = table[i].cv.mean;
    const auto& b = table[best].cv.mean;
    const double acc_a = a.acc.value_or(kLowest), acc_b = b.acc.value_or(kLowest);
    if (acc_a > acc_b || (acc_a == acc_b && a.auc.value_or(kLowest) > b.auc.value_or(kLowest))) best = i;
  }
  return best;
}

Selection select_best(std::span<const ClassifierSpec> roster, const Dataset& data, const CvConfig& cfg,
                      const TrainOptions& options) {
  if (roster.empty()) throw SelectionError("select_best: empty roster");
  Selection sel;
  for (const auto& spec : roster) {
    try {
      sel.table.push_back({spec, cross_validate(data, spec, cfg, options)});
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw SelectionError("classifier " + std::string(spec.name()) + " failed cross-validation: " + e.what());
    }
  }
  sel.winner_index = pick_winner(sel.table);
  sel.winner = sel.table[sel.winner_index].spec;
  return sel;
}

}  // namespace mimic
