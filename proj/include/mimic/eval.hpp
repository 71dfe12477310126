#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/dataset.hpp"
#include "mimic/model.hpp"

namespace mimic {

// Malicious is the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
  void add(Label truth, Label predicted);
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix tally(std::span<const Label> truth, std::span<const Label> predicted);

// A rate whose denominator is zero is nullopt ("undefined"), never 0.
struct Rates {
  std::optional<double> acc;
  std::optional<double> tpr;
  std::optional<double> fpr;
  std::optional<double> tnr;
  std::optional<double> fnr;

  bool operator==(const Rates&) const = default;
};

Rates metrics(const ConfusionMatrix& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  bool operator==(const RocPoint&) const = default;
};

struct ScoredLabel {
  double score = 0.0;
  Label truth = Label::Benign;
};

struct RocResult {
  double auc = 0.0;
  std::vector<RocPoint> points;
};

/// AUC as the Mann-Whitney statistic (ties count one half) and the ROC curve
/// swept over every distinct score, from (0,0) to (1,1). Needs both classes.
RocResult roc_auc(std::span<const ScoredLabel> scores);

double trapezoid_area(std::span<const RocPoint> points);

struct EvaluationReport {
  ConfusionMatrix confusion;
  Rates rates;
  std::optional<double> auc;  // undefined when the test set is single-class
  std::vector<RocPoint> roc;
};

ConfusionMatrix confusion(const TrainedModel& model, const Dataset& test);
EvaluationReport evaluate(const TrainedModel& model, const Dataset& test);
EvaluationReport evaluate_rows(const TrainedModel& model, const Dataset& data, std::span<const std::size_t> rows);

struct CvConfig {
  int k = 10;
  std::uint64_t seed = 0;
  bool stratified = true;

  bool operator==(const CvConfig&) const = default;
};

struct MetricMeans {
  std::optional<double> acc, tpr, fpr, tnr, fnr, auc;
};

struct CvResult {
  std::vector<EvaluationReport> per_fold;
  MetricMeans mean;
  std::vector<std::string> warnings;
};

/// Fold index lists. Rows are shuffled with cfg.seed (per class when
/// stratified, classes concatenated) and dealt round-robin, so fold sizes
/// differ by at most one and class counts per fold by at most one.
std::vector<std::vector<std::size_t>> assign_folds(const Dataset& data, const CvConfig& cfg);

CvResult cross_validate(const Dataset& data, const ClassifierSpec& spec, const CvConfig& cfg,
                        const TrainOptions& options = {});

struct SelectionRow {
  ClassifierSpec spec;
  CvResult cv;
};

struct Selection {
  std::size_t winner_index = 0;
  ClassifierSpec winner;
  std::vector<SelectionRow> table;
};

// Highest mean accuracy; then higher mean AUC; then earlier position.
std::size_t pick_winner(std::span<const SelectionRow> table);

Selection select_best(std::span<const ClassifierSpec> roster, const Dataset& data, const CvConfig& cfg,
                      const TrainOptions& options = {});

}  // namespace mimic
