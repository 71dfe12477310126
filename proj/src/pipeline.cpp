#include "mimic/pipeline.hpp"

#include <cmath>

namespace mimic {

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::Config: return "config";
    case Stage::Teacher: return "teacher";
    case Stage::Annotation: return "annotation";
    case Stage::Student: return "student";
    case Stage::Evaluation: return "evaluation";
  }
  return "?";
}

PipelineConfig PipelineConfig::defaults(std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.seed = seed;
  cfg.cv.seed = seed;
  for (const auto family : {Family::DecisionTree, Family::RandomForest, Family::Svm, Family::NaiveBayes}) {
    cfg.teacher_roster.push_back(ClassifierSpec::defaults(family, seed));
  }
  cfg.student_roster = cfg.teacher_roster;
  return cfg;
}

void PipelineConfig::validate() const {
  if (teacher_roster.empty()) throw ConfigError("teacher roster is empty");
  if (student_roster.empty()) throw ConfigError("student roster is empty");
  for (const auto& s : teacher_roster) s.validate();
  for (const auto& s : student_roster) s.validate();
  if (cv.k < 2) throw ConfigError("cross-validation needs k >= 2");
  if (!(release_threshold >= 0.0) || !std::isfinite(release_threshold)) {
    throw ConfigError("release threshold must be a finite value >= 0");
  }
}

namespace {

GeneratedModel generate(const Dataset& data, const std::vector<ClassifierSpec>& roster, const CvConfig& cv,
                        ModelRole role, std::int64_t timestamp, const TrainOptions& options) {
  if (!data.labeled()) throw StateError("model generation needs labeled data");
  if (data.empty()) throw TrainingError("model generation: empty dataset");
  GeneratedModel out;
  out.selection = select_best(roster, data, cv, options);
  out.model = train(data, out.selection.winner, options);
  out.model.metadata.role = role;
  out.model.metadata.created_at = timestamp;
  return out;
}

template <typename Fn>
auto staged(Stage stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.category(), e.what());
  }
}

}  // namespace

GeneratedModel teacher_model_generation(const Dataset& sensitive, const PipelineConfig& cfg,
                                        const TrainOptions& options) {
  return generate(sensitive, cfg.teacher_roster, cfg.cv, ModelRole::Teacher, cfg.timestamp, options);
}

GeneratedModel student_model_generation(const Dataset& annotated, const PipelineConfig& cfg,
                                        const TrainOptions& options) {
  return generate(annotated, cfg.student_roster, cfg.cv, ModelRole::Student, cfg.timestamp, options);
}

Dataset annotate(const TrainedModel& teacher, const Dataset& unlabeled) {
  if (unlabeled.labeled()) throw ContractError("annotate: input must be unlabeled");
  if (unlabeled.empty()) throw ContractError("annotate: input is empty");
  const auto labels = predict_all(teacher, unlabeled);
  return unlabeled.with_labels(labels);
}

double relative_score_difference(double teacher_accuracy, double student_accuracy) {
  if (teacher_accuracy == 0.0) throw ContractError("relative score difference: teacher accuracy is zero");
  return std::abs(teacher_accuracy - student_accuracy) / teacher_accuracy;
}

ModelComparison evaluate_models(const TrainedModel& teacher, const TrainedModel& student, const Dataset& test) {
  ModelComparison out;
  out.teacher = evaluate(teacher, test);
  out.student = evaluate(student, test);
  out.relative_score_difference = relative_score_difference(*out.teacher.rates.acc, *out.student.rates.acc);
  return out;
}

bool release_decision(double relative_difference, double threshold) { return relative_difference < threshold; }

PipelineReport run_pipeline(const Dataset& sensitive, const Dataset& unlabeled, const Dataset& test,
                            const PipelineConfig& cfg, const TrainOptions& options) {
  staged(Stage::Config, [&] {
    cfg.validate();
    const auto fp = sensitive.schema().fingerprint();
    if (unlabeled.schema().fingerprint() != fp || test.schema().fingerprint() != fp) {
      throw ContractError("the three datasets must share one schema");
    }
    if (!sensitive.labeled() || !test.labeled()) throw ContractError("sensitive and test data must be labeled");
    if (unlabeled.labeled()) throw ContractError("public data must be unlabeled");
    return 0;
  });

  PipelineReport report;
  auto teacher = staged(Stage::Teacher, [&] { return teacher_model_generation(sensitive, cfg, options); });
  report.teacher_selection = std::move(teacher.selection);
  report.teacher = std::move(teacher.model);

  report.annotated = staged(Stage::Annotation, [&] { return annotate(report.teacher, unlabeled); });
  const Dataset& annotated = *report.annotated;
  report.annotation.rows = annotated.size();
  report.annotation.malicious_fraction = count_labels(annotated).malicious / static_cast<double>(annotated.size());

  auto student = staged(Stage::Student, [&] { return student_model_generation(annotated, cfg, options); });
  report.student_selection = std::move(student.selection);
  report.student = std::move(student.model);

  auto comparison = staged(Stage::Evaluation, [&] { return evaluate_models(report.teacher, report.student, test); });
  report.teacher_eval = std::move(comparison.teacher);
  report.student_eval = std::move(comparison.student);
  report.relative_score_difference = comparison.relative_score_difference;
  report.release_threshold = cfg.release_threshold;
  report.released = release_decision(report.relative_score_difference, cfg.release_threshold);
  return report;
}

}  // namespace mimic
