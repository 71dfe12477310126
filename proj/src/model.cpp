#include "mimic/model.hpp"

#include <numeric>

#include "mimic/error.hpp"

namespace mimic {

std::string_view role_name(ModelRole role) {
  switch (role) {
    case ModelRole::Teacher: return "teacher";
    case ModelRole::Student: return "student";
    case ModelRole::None: break;
  }
  return "none";
}

std::optional<ModelRole> parse_role(std::string_view name) {
  if (name == "none") return ModelRole::None;
  if (name == "teacher") return ModelRole::Teacher;
  if (name == "student") return ModelRole::Student;
  return std::nullopt;
}

namespace {

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void require_family(const ClassifierSpec& spec, Family family) {
  if (spec.family != family) {
    throw ConfigError("expected a " + std::string(family_name(family)) + " spec, got " + std::string(spec.name()));
  }
}

}  // namespace

TrainedModel train(const Dataset& data, std::span<const std::size_t> rows, const ClassifierSpec& spec,
                   const TrainOptions& options) {
  spec.validate();
  if (!data.labeled()) throw StateError("training data must be labeled");
  if (rows.empty()) throw TrainingError(std::string(spec.name()) + ": empty training set");
  TrainedModel model;
  model.metadata.spec = spec;
  model.metadata.schema_fingerprint = data.schema().fingerprint();
  model.metadata.column_kinds = data.schema().kinds();
  model.metadata.training_rows = rows.size();
  switch (spec.family) {
    case Family::DecisionTree:
      model.body = fit_decision_tree(data, rows, spec.tree());
      break;
    case Family::RandomForest:
      model.body = fit_random_forest(data, rows, spec.forest(), spec.seed, options.threads);
      break;
    case Family::Svm:
      model.body = fit_svm(data, rows, spec.svm(), spec.seed);
      break;
    case Family::NaiveBayes:
      model.body = fit_naive_bayes(data, rows, spec.naive_bayes());
      break;
  }
  return model;
}

TrainedModel train(const Dataset& data, const ClassifierSpec& spec, const TrainOptions& options) {
  const auto rows = all_rows(data);
  return train(data, rows, spec, options);
}

TrainedModel train_decision_tree(const Dataset& data, const ClassifierSpec& spec) {
  require_family(spec, Family::DecisionTree);
  return train(data, spec);
}

TrainedModel train_random_forest(const Dataset& data, const ClassifierSpec& spec, const TrainOptions& options) {
  require_family(spec, Family::RandomForest);
  return train(data, spec, options);
}

TrainedModel train_naive_bayes(const Dataset& data, const ClassifierSpec& spec) {
  require_family(spec, Family::NaiveBayes);
  return train(data, spec);
}

TrainedModel train_svm(const Dataset& data, const ClassifierSpec& spec) {
  require_family(spec, Family::Svm);
  return train(data, spec);
}

void check_row(const TrainedModel& model, const FeatureVector& row) {
  const auto& kinds = model.metadata.column_kinds;
  if (row.values.size() != kinds.size()) {
    throw ContractError("row has " + std::to_string(row.values.size()) + " values, model expects " +
                        std::to_string(kinds.size()));
  }
  for (std::size_t c = 0; c < kinds.size(); ++c) {
    if (std::holds_alternative<double>(row.values[c]) != (kinds[c] == ColumnKind::Continuous)) {
      throw ContractError("row value " + std::to_string(c) + " does not match the model's column kind");
    }
  }
}

void check_schema(const TrainedModel& model, const Dataset& data) {
  if (data.schema().fingerprint() != model.metadata.schema_fingerprint) {
    throw ContractError("schema fingerprint mismatch: dataset " + data.schema().fingerprint().substr(0, 12) +
                        " vs model " + model.metadata.schema_fingerprint.substr(0, 12));
  }
}

Label predict_row(const TrainedModel& model, const RowRef& row) {
  return std::visit([&](const auto& m) { return m.predict(row); }, model.body);
}

double score_row(const TrainedModel& model, const RowRef& row) {
  return std::visit([&](const auto& m) { return m.score(row); }, model.body);
}

Label predict(const TrainedModel& model, const FeatureVector& row) {
  check_row(model, row);
  return predict_row(model, RowRef(row));
}

double score(const TrainedModel& model, const FeatureVector& row) {
  check_row(model, row);
  return score_row(model, RowRef(row));
}

std::vector<Label> predict_all(const TrainedModel& model, const Dataset& data) {
  check_schema(model, data);
  std::vector<Label> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict_row(model, data.ref(i));
  return out;
}

std::vector<double> score_all(const TrainedModel& model, const Dataset& data) {
  check_schema(model, data);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = score_row(model, data.ref(i));
  return out;
}

}  // namespace mimic
