// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <span>
#include <vector>

#include "cutthumb/image.hpp"
#include "cutthumb/labels.hpp"
#include "cutthumb/sampling.hpp"

namespace cutthumb {

enum class Strategy {
  kSelfThumbnail,          // ST
  kMixedSingleThumbnail,   // MST
  kMixedMultiThumbnails,   // MMT
};

std::string_view to_string(Strategy s);
/// Accepts "st", "mst", "mmt" (case-insensitive).
Strategy parse_strategy(std::string_view name);

struct ThumbSize {
  int w = 0;
  int h = 0;
  friend bool operator==(const ThumbSize&, const ThumbSize&) = default;
};

/// Half the image's width and height, never smaller than 1x1.
ThumbSize default_thumb_size(int width, int height);

/**
 * Strategy selection plus every hyperparameter of the three transforms.
 *
 * Defaults are the best-performing published settings: thumbnail at half the
 * input size, MST weight 0.25, MMT base/thumbnail weights 0.6/0.2 with two
 * thumbnails, and 80% of batches augmented.
 */
struct AugConfig {
  Strategy strategy = Strategy::kSelfThumbnail;
  /// Unset means half of the image being augmented.
  std::optional<ThumbSize> thumb;
  double lambda = 0.25;
  double lambda_base = 0.6;
  double lambda_thumb = 0.2;
  int num_thumbnails = 2;
  double participation_rate = 0.8;
  std::uint64_t root_seed = 0;
  bool normalize_labels = false;
  int max_attempts = kDefaultMaxAttempts;

  /// Thumbnail size to use on a width x height image.
  ThumbSize thumb_for(int width, int height) const;

  /// Throws InvalidArgument on out-of-range hyperparameters.
  void validate() const;

  friend bool operator==(const AugConfig&, const AugConfig&) = default;
};

/// Non-owning view of a labelled image.
struct SourceRef {
  const Image* image;
  const LabelDist* label;
};

template <class T>
struct Augmented {
  Image image;
  LabelDist label;
  T boxes;
};

/// Pastes x's own thumbnail into a random box of x. Label is returned as is.
Augmented<BBox> self_thumbnail(const Image& x, const LabelDist& y, const AugConfig& cfg,
                               RngStream& rng);

/// Pastes x2's thumbnail into a random box of x1; label (1-lambda)*y1 + lambda*y2.
Augmented<BBox> mixed_single(const Image& x1, const LabelDist& y1, const Image& x2,
                             const LabelDist& y2, const AugConfig& cfg, RngStream& rng);

/// Pastes one thumbnail per entry of `others` into disjoint boxes of x1.
/// Label lambda_base*y1 + sum(lambda_thumb*yi), normalized only on request.
Augmented<std::vector<BBox>> mixed_multi(
    const Image& x1, const LabelDist& y1,
    std::span<const SourceRef> others, const AugConfig& cfg, RngStream& rng);

}  // namespace cutthumb
