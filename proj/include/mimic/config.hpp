#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/pipeline.hpp"

namespace mimic {

// Comma list of family names ("dt,rf,svm,nb") to default specs.
std::vector<ClassifierSpec> parse_roster(std::string_view list, std::uint64_t seed);
std::string roster_to_string(const std::vector<ClassifierSpec>& roster);

/// Applies a config file on top of `base`. Same line grammar as the schema
/// file (`key: value`, `#` comments), keys namespaced per module:
///
///   pipeline.seed, pipeline.release_threshold, pipeline.timestamp,
///   pipeline.teacher_roster, pipeline.student_roster
///   eval.k, eval.seed, eval.stratified
///   classifiers.dt.{max_depth,min_samples_split,min_samples_leaf,ig_epsilon}
///   classifiers.rf.{tree_count,feature_subsample,bootstrap,max_depth,
///                   min_samples_split,min_samples_leaf,ig_epsilon}
///   classifiers.svm.{lambda,epochs}
///   classifiers.nb.{variance_floor,alpha}
///
/// `pipeline.seed` reseeds every spec and the CV unless `eval.seed` is also
/// given. Classifier keys apply to every roster entry of that family.
/// Unknown keys raise ConfigError.
PipelineConfig parse_config(std::string_view text, PipelineConfig base);
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base);

// Every key, in a fixed order; parse_config(config_to_text(c), x) == c for
// configs whose rosters share per-family parameters.
std::string config_to_text(const PipelineConfig& cfg);

}  // namespace mimic
