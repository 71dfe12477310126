#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mimic/classifier_spec.hpp"
#include "mimic/dataset.hpp"

namespace mimic {

// How one schema column maps into the encoded feature space.
struct SvmColumnEncoding {
  ColumnKind kind = ColumnKind::Continuous;
  std::size_t offset = 0;  // first slot in the weight vector
  double mean = 0.0;       // continuous only
  double stddev = 1.0;     // continuous only, >= 1e-12
  std::vector<std::string> tokens;  // categorical only: one indicator slot each, sorted

  std::size_t width() const noexcept { return kind == ColumnKind::Continuous ? 1 : tokens.size(); }
  bool operator==(const SvmColumnEncoding&) const = default;
};

struct SvmModel {
  std::vector<SvmColumnEncoding> encoding;
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t dimension() const;
  double margin(const RowRef& row) const;
  // sign(w.x + b); zero is Malicious.
  Label predict(const RowRef& row) const { return margin(row) >= 0.0 ? Label::Malicious : Label::Benign; }
  // Logistic squashing of the margin.
  double score(const RowRef& row) const;

  bool operator==(const SvmModel&) const = default;
};

inline constexpr double kMinStddev = 1e-12;

struct SvmTrainingTrace {
  // lambda/2 * (|w|^2 + b^2) + mean hinge loss, after each epoch.
  std::vector<double> objective;
};

/// Linear soft-margin SVM fitted by stochastic subgradient steps on
/// lambda/2 * |w|^2 + mean hinge loss, step 1/(lambda * t) at update t, with
/// the iterate projected onto the ball of radius 1/sqrt(lambda). The bias is
/// the weight of a constant input and is regularized with the rest. Row order
/// in epoch e is a shuffle seeded by derive_seed(seed, e).
SvmModel fit_svm(const Dataset& ds, std::span<const std::size_t> rows, const SvmParams& params, std::uint64_t seed,
                 SvmTrainingTrace* trace = nullptr);

}  // namespace mimic
