// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <span>
#include <vector>

namespace cutthumb {

struct LabelEntry {
  int class_index = 0;
  double weight = 0.0;

  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

/**
 * Sparse weighted distribution over class indices.
 *
 * Entries have distinct in-range class indices and strictly positive weights.
 * Weights need not sum to one: mixed-multiple labels are emitted unnormalized
 * unless the caller asks otherwise.
 */
class LabelDist {
 public:
  LabelDist(int num_classes, std::vector<LabelEntry> entries);

  /// One-hot label.
  static LabelDist pure(int num_classes, int class_index);

  int num_classes() const { return num_classes_; }
  const std::vector<LabelEntry>& entries() const { return entries_; }

  /// Weight for `class_index`, 0 if absent.
  double weight_of(int class_index) const;
  /// Compensated sum of all weights.
  double total_weight() const;
  /// Copy scaled so weights sum to one.
  LabelDist normalized() const;

  friend bool operator==(const LabelDist&, const LabelDist&) = default;

 private:
  int num_classes_;
  std::vector<LabelEntry> entries_;
};

/// Weighted sum of label distributions. Duplicate classes merge by addition,
/// in order of first appearance.
LabelDist mix_labels(std::span<const LabelDist> labels, std::span<const double> weights);

}  // namespace cutthumb
