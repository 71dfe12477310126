#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/dataset.hpp"
#include "mimic/error.hpp"
#include "mimic/eval.hpp"
#include "mimic/model.hpp"

namespace mimic {

enum class Stage { Config, Teacher, Annotation, Student, Evaluation };

std::string_view stage_name(Stage stage);

// Wraps a failure with the pipeline stage it came from; keeps the category
// of the underlying error.
class StageError : public Error {
 public:
  StageError(Stage stage, ErrorCategory category, const std::string& what)
      : Error(category, std::string(stage_name(stage)) + ": " + what), stage_(stage) {}

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

struct PipelineConfig {
  std::vector<ClassifierSpec> teacher_roster;
  std::vector<ClassifierSpec> student_roster;
  CvConfig cv;
  // Release iff relative_score_difference < release_threshold.
  double release_threshold = 0.01;
  std::uint64_t seed = 0;
  // Stamped into both models' metadata.
  std::int64_t timestamp = 0;

  // dt, rf, svm, nb for both rosters, every spec and the CV seeded with `seed`.
  static PipelineConfig defaults(std::uint64_t seed = 0);
  void validate() const;
};

struct GeneratedModel {
  TrainedModel model;
  Selection selection;
};

struct AnnotationSummary {
  std::size_t rows = 0;
  double malicious_fraction = 0.0;
};

struct ModelComparison {
  EvaluationReport teacher;
  EvaluationReport student;
  double relative_score_difference = 0.0;
};

struct PipelineReport {
  Selection teacher_selection;
  TrainedModel teacher;
  AnnotationSummary annotation;
  std::optional<Dataset> annotated;
  Selection student_selection;
  TrainedModel student;
  EvaluationReport teacher_eval;
  EvaluationReport student_eval;
  double relative_score_difference = 0.0;
  double release_threshold = 0.0;
  bool released = false;
};

/// Cross-validated selection over cfg.teacher_roster, then the winner is
/// retrained on every sensitive row and tagged as the teacher.
GeneratedModel teacher_model_generation(const Dataset& sensitive, const PipelineConfig& cfg,
                                        const TrainOptions& options = {});

/// Same procedure over cfg.student_roster and the annotated public rows.
GeneratedModel student_model_generation(const Dataset& annotated, const PipelineConfig& cfg,
                                        const TrainOptions& options = {});

/// Hard-labels every unlabeled row with the teacher's prediction, keeping row
/// order.
Dataset annotate(const TrainedModel& teacher, const Dataset& unlabeled);

/// |acc_teacher - acc_student| / acc_teacher. Throws ContractError when the
/// teacher accuracy is zero.
double relative_score_difference(double teacher_accuracy, double student_accuracy);

ModelComparison evaluate_models(const TrainedModel& teacher, const TrainedModel& student, const Dataset& test);

bool release_decision(double relative_difference, double threshold);

PipelineReport run_pipeline(const Dataset& sensitive, const Dataset& unlabeled, const Dataset& test,
                            const PipelineConfig& cfg, const TrainOptions& options = {});

}  // namespace mimic
