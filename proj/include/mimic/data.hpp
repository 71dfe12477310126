#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "mimic/dataset.hpp"
#include "mimic/schema.hpp"

namespace mimic {

std::string_view trim(std::string_view s);

/// Benign iff the trimmed token equals the schema's negative label. When the
/// schema carries a closed label vocabulary, tokens outside it raise
/// LabelError. An empty token also raises LabelError.
Label normalize_label(std::string_view raw, const Schema& schema);

/// Reads a comma-separated file. Each record holds feature_count() fields
/// (unlabeled) or feature_count()+1 fields with the label last (labeled); the
/// first record decides which, and every later record must agree. Tokens are
/// trimmed. Quoted fields are rejected. Errors carry the 1-based line number.
Dataset load_dataset(const std::filesystem::path& path, std::shared_ptr<const Schema> schema,
                     bool has_header);
Dataset parse_dataset(std::string_view text, std::shared_ptr<const Schema> schema,
                      bool has_header);

/// Inverse of load_dataset. Numbers use the shortest round-trip form; labels
/// are written as the schema's negative/positive tokens.
void write_dataset(const std::filesystem::path& path, const Dataset& ds, bool header);
std::string format_dataset(const Dataset& ds, bool header);

std::string format_number(double value);

struct SplitSpec {
  std::size_t labeled_count = 0;
  std::size_t unlabeled_count = 0;
  std::size_t test_count = 0;
  std::uint64_t seed = 0;
  bool stratified = false;
};

struct SplitResult {
  Dataset sensitive;
  Dataset public_unlabeled;
  Dataset test;
};

/// Seeded shuffle, then consecutive slices of the three sizes. The middle
/// slice has its labels removed. With `stratified`, each class is shuffled
/// separately and the classes are interleaved proportionally before slicing.
SplitResult split_dataset(const Dataset& source, const SplitSpec& spec);

/// The permutation split_dataset applies; exposed for audit and tests.
std::vector<std::size_t> split_order(const Dataset& source, const SplitSpec& spec);

struct ClassBalance {
  double benign_fraction = 0.0;
  double malicious_fraction = 0.0;
};

ClassBalance class_balance(const Dataset& ds);

}  // namespace mimic
