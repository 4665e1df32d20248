// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/labels.hpp"

#include <cmath>
#include <string>

#include "cutthumb/error.hpp"

namespace cutthumb {

namespace {

// Neumaier summation; exact-rounded for the short weight lists seen here.
double compensated_sum(const std::vector<LabelEntry>& entries) {
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& e : entries) {
    const double t = sum + e.weight;
    if (std::fabs(sum) >= std::fabs(e.weight)) {
      comp += (sum - t) + e.weight;
    } else {
      comp += (e.weight - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

}  // namespace

LabelDist::LabelDist(int num_classes, std::vector<LabelEntry> entries)
    : num_classes_(num_classes), entries_(std::move(entries)) {
  if (num_classes < 1) {
    throw InvalidArgument("num_classes must be positive");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.class_index < 0 || e.class_index >= num_classes) {
      throw InvalidArgument("class index " + std::to_string(e.class_index) +
                            " outside [0, " + std::to_string(num_classes) + ")");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw InvalidArgument("label weights must be positive and finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j].class_index == e.class_index) {
        throw InvalidArgument("duplicate class index " + std::to_string(e.class_index));
      }
    }
  }
}

LabelDist LabelDist::pure(int num_classes, int class_index) {
  return LabelDist(num_classes, {{class_index, 1.0}});
}

double LabelDist::weight_of(int class_index) const {
  for (const auto& e : entries_) {
    if (e.class_index == class_index) {
      return e.weight;
    }
  }
  return 0.0;
}

double LabelDist::total_weight() const { return compensated_sum(entries_); }

LabelDist LabelDist::normalized() const {
  const double total = total_weight();
  std::vector<LabelEntry> out = entries_;
  for (auto& e : out) {
    e.weight /= total;
  }
  return LabelDist(num_classes_, std::move(out));
}

LabelDist mix_labels(std::span<const LabelDist> labels, std::span<const double> weights) {
  if (labels.empty()) {
    throw InvalidArgument("mix_labels needs at least one label");
  }
  if (labels.size() != weights.size()) {
    throw InvalidArgument("mix_labels got " + std::to_string(labels.size()) + " labels and " +
                          std::to_string(weights.size()) + " weights");
  }
  const int k = labels.front().num_classes();
  std::vector<LabelEntry> merged;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].num_classes() != k) {
      throw InvalidArgument("mix_labels: mismatched num_classes");
    }
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw InvalidArgument("mix_labels: weights must be positive and finite");
    }
    for (const auto& e : labels[i].entries()) {
      const double w = weights[i] * e.weight;
      bool found = false;
      for (auto& m : merged) {
        if (m.class_index == e.class_index) {
          m.weight += w;
          found = true;
          break;
        }
      }
      if (!found) {
        merged.push_back({e.class_index, w});
      }
    }
  }
  std::erase_if(merged, [](const LabelEntry& e) { return !(e.weight > 0.0); });
  return LabelDist(k, std::move(merged));
}

}  // namespace cutthumb
