// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cutthumb/error.hpp"

namespace cutthumb {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kSelfThumbnail:
      return "st";
    case Strategy::kMixedSingleThumbnail:
      return "mst";
    case Strategy::kMixedMultiThumbnails:
      return "mmt";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "st") return Strategy::kSelfThumbnail;
  if (lower == "mst") return Strategy::kMixedSingleThumbnail;
  if (lower == "mmt") return Strategy::kMixedMultiThumbnails;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "' (expected st, mst or mmt)");
}

ThumbSize default_thumb_size(int width, int height) {
  return {std::max(1, width / 2), std::max(1, height / 2)};
}

ThumbSize AugConfig::thumb_for(int width, int height) const {
  return thumb ? *thumb : default_thumb_size(width, height);
}

void AugConfig::validate() const {
  if (thumb && (thumb->w < 1 || thumb->h < 1)) {
    throw InvalidArgument("thumbnail size must be positive");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument("lambda must lie in (0, 1)");
  }
  if (!(lambda_base > 0.0) || !std::isfinite(lambda_base)) {
    throw InvalidArgument("lambda_base must be positive");
  }
  if (!(lambda_thumb > 0.0) || !std::isfinite(lambda_thumb)) {
    throw InvalidArgument("lambda_thumb must be positive");
  }
  if (num_thumbnails < 1) {
    throw InvalidArgument("num_thumbnails must be at least 1");
  }
  if (!(participation_rate >= 0.0 && participation_rate <= 1.0)) {
    throw InvalidArgument("participation_rate must lie in [0, 1]");
  }
  if (max_attempts < 0) {
    throw InvalidArgument("max_attempts must be non-negative");
  }
}

Augmented<BBox> self_thumbnail(const Image& x, const LabelDist& y, const AugConfig& cfg,
                               RngStream& rng) {
  const ThumbSize t = cfg.thumb_for(x.width(), x.height());
  const BBox box = sample_box(rng, x.width(), x.height(), t.w, t.h);
  return {paste(x, thumbnail(x, t.w, t.h), box), y, box};
}

Augmented<BBox> mixed_single(const Image& x1, const LabelDist& y1, const Image& x2,
                             const LabelDist& y2, const AugConfig& cfg, RngStream& rng) {
  if (!x1.same_shape(x2)) {
    throw DimensionMismatch("mixed_single: images differ in shape");
  }
  const ThumbSize t = cfg.thumb_for(x1.width(), x1.height());
  const BBox box = sample_box(rng, x1.width(), x1.height(), t.w, t.h);
  const LabelDist labels[] = {y1, y2};
  const double weights[] = {1.0 - cfg.lambda, cfg.lambda};
  return {paste(x1, thumbnail(x2, t.w, t.h), box), mix_labels(labels, weights), box};
}

Augmented<std::vector<BBox>> mixed_multi(const Image& x1, const LabelDist& y1,
                                         std::span<const SourceRef> others, const AugConfig& cfg,
                                         RngStream& rng) {
  if (others.empty()) {
    throw InvalidArgument("mixed_multi needs at least one thumbnail source");
  }
  for (const auto& o : others) {
    if (!x1.same_shape(*o.image)) {
      throw DimensionMismatch("mixed_multi: images differ in shape");
    }
  }
  const ThumbSize t = cfg.thumb_for(x1.width(), x1.height());
  std::vector<BBox> boxes = sample_nonoverlapping_boxes(
      rng, static_cast<int>(others.size()), x1.width(), x1.height(), t.w, t.h, cfg.max_attempts);

  Image out = x1;
  std::vector<LabelDist> labels{y1};
  std::vector<double> weights{cfg.lambda_base};
  for (std::size_t i = 0; i < others.size(); ++i) {
    out = paste(out, thumbnail(*others[i].image, t.w, t.h), boxes[i]);
    labels.push_back(*others[i].label);
    weights.push_back(cfg.lambda_thumb);
  }
  LabelDist mixed = mix_labels(labels, weights);
  if (cfg.normalize_labels) {
    mixed = mixed.normalized();
  }
  return {std::move(out), std::move(mixed), std::move(boxes)};
}

}  // namespace cutthumb
