// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cutthumb/image.hpp"
#include "cutthumb/labels.hpp"
#include "cutthumb/strategies.hpp"

namespace cutthumb {

struct Sample {
  std::string sample_id;
  Image image;
  LabelDist label;
};

struct Batch {
  std::uint64_t batch_index = 0;
  std::vector<Sample> samples;
};

/// Strategy recorded for one output; kNone marks a pass-through.
enum class AppliedStrategy { kNone, kST, kMST, kMMT };

std::string_view to_string(AppliedStrategy s);
AppliedStrategy parse_applied_strategy(std::string_view name);
AppliedStrategy applied(Strategy s);

struct SourceWeight {
  std::string sample_id;
  double weight = 0.0;
  friend bool operator==(const SourceWeight&, const SourceWeight&) = default;
};

/**
 * Provenance for one output image.
 *
 * sources[0] is always the base image. For ST boxes[0] holds the base's own
 * thumbnail; for MST and MMT boxes[i] holds the thumbnail of sources[i + 1].
 * A pass-through has a single source of weight 1 and no boxes.
 */
struct AugRecord {
  std::string output_id;
  AppliedStrategy strategy = AppliedStrategy::kNone;
  std::vector<SourceWeight> sources;
  std::vector<BBox> boxes;
  std::uint64_t batch_index = 0;
  std::uint64_t root_seed = 0;
  /// Why an augmentation degraded to pass-through (e.g. MMT placement failure).
  std::string note;

  friend bool operator==(const AugRecord&, const AugRecord&) = default;
};

struct AugOutput {
  Image image;
  LabelDist label;
  AugRecord record;
};

/// Gates, pairs and augments one batch. Output order matches input order.
std::vector<AugOutput> augment_batch(const Batch& batch, const AugConfig& cfg);

/// Pulls samples until it returns nullopt.
using SampleSource = std::function<std::optional<Sample>()>;
using OutputSink = std::function<void(AugOutput&&)>;

/// Splits the stream into consecutive batches of `batch_size` (last may be
/// short), augments each with increasing batch_index, and forwards outputs in
/// order. Returns the number of samples processed.
std::size_t run_corpus(const SampleSource& source, const AugConfig& cfg, int batch_size,
                       const OutputSink& sink);

/// Convenience overload over an in-memory corpus.
std::vector<AugOutput> run_corpus(std::vector<Sample> samples, const AugConfig& cfg,
                                  int batch_size);

/// Rebuilds the output image of `record` from its sources and boxes alone.
/// `lookup` maps a sample_id to its source image.
Image replay_record(const AugRecord& record,
                    const std::function<const Image&(const std::string&)>& lookup);

}  // namespace cutthumb
