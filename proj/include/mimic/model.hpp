#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/dataset.hpp"
#include "mimic/decision_tree.hpp"
#include "mimic/naive_bayes.hpp"
#include "mimic/parallel.hpp"
#include "mimic/random_forest.hpp"
#include "mimic/svm.hpp"

namespace mimic {

enum class ModelRole { None, Teacher, Student };

std::string_view role_name(ModelRole role);
std::optional<ModelRole> parse_role(std::string_view name);

struct ModelMetadata {
  ClassifierSpec spec;
  std::string schema_fingerprint;
  std::vector<ColumnKind> column_kinds;
  std::uint64_t training_rows = 0;
  // Seconds since the Unix epoch. Training leaves it at 0; callers that
  // publish a model stamp it, so training itself stays a pure function.
  std::int64_t created_at = 0;
  ModelRole role = ModelRole::None;

  bool operator==(const ModelMetadata&) const = default;
};

using ModelBody = std::variant<DecisionTreeModel, RandomForestModel, SvmModel, NaiveBayesModel>;

struct TrainedModel {
  ModelMetadata metadata;
  ModelBody body;

  Family family() const noexcept { return metadata.spec.family; }
  bool operator==(const TrainedModel&) const = default;
};

struct TrainOptions {
  unsigned threads = default_thread_count();
};

/// Trains spec.family on the given row indices of `data`; the second overload
/// uses every row. Throws TrainingError for an empty row set and for
/// single-class input to the SVM.
TrainedModel train(const Dataset& data, std::span<const std::size_t> rows, const ClassifierSpec& spec,
                   const TrainOptions& options = {});
TrainedModel train(const Dataset& data, const ClassifierSpec& spec, const TrainOptions& options = {});

TrainedModel train_decision_tree(const Dataset& data, const ClassifierSpec& spec);
TrainedModel train_random_forest(const Dataset& data, const ClassifierSpec& spec, const TrainOptions& options = {});
TrainedModel train_naive_bayes(const Dataset& data, const ClassifierSpec& spec);
TrainedModel train_svm(const Dataset& data, const ClassifierSpec& spec);

// Throws ContractError unless `row` has the model's arity and column kinds.
void check_row(const TrainedModel& model, const FeatureVector& row);
// Throws ContractError unless the dataset's schema fingerprint matches.
void check_schema(const TrainedModel& model, const Dataset& data);

Label predict(const TrainedModel& model, const FeatureVector& row);
double score(const TrainedModel& model, const FeatureVector& row);

// Unchecked per-row variants for callers that already validated the schema.
Label predict_row(const TrainedModel& model, const RowRef& row);
double score_row(const TrainedModel& model, const RowRef& row);

std::vector<Label> predict_all(const TrainedModel& model, const Dataset& data);
std::vector<double> score_all(const TrainedModel& model, const Dataset& data);

}  // namespace mimic
