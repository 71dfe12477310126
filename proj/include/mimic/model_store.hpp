#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mimic/classifier_spec.hpp"
#include "mimic/eval.hpp"
#include "mimic/model.hpp"
#include "mimic/pipeline.hpp"

namespace mimic {

inline constexpr int kModelFormatVersion = 1;

/// Canonical JSON text of a model: sorted keys, shortest round-trip numbers,
/// tree nodes in pre-order, and a SHA-256 of the body in the metadata.
/// Identical models always produce identical bytes.
std::string model_to_string(const TrainedModel& model);

/// Inverse of model_to_string. Throws VersionError for an unknown
/// format_version and IntegrityError for unparsable text, a body digest
/// mismatch, or a body that violates its family's invariants.
TrainedModel model_from_string(std::string_view text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Re-checks the structural invariants of a model; throws IntegrityError.
void validate_model(const TrainedModel& model);

nlohmann::json spec_to_json(const ClassifierSpec& spec);
ClassifierSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Rates& rates);
nlohmann::json to_json(const EvaluationReport& report);
nlohmann::json to_json(const CvResult& cv);
nlohmann::json to_json(const Selection& selection);
nlohmann::json metadata_to_json(const ModelMetadata& metadata);
nlohmann::json to_json(const PipelineReport& report);

// Canonical text of any report document (sorted keys, 2-space indent,
// trailing newline).
std::string dump_canonical(const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mimic
