// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/sampling.hpp"

#include <string>
#include <utility>

#include "cutthumb/error.hpp"

namespace cutthumb {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void check_box_dims(int W, int H, int w, int h) {
  if (w < 1 || h < 1 || W < 1 || H < 1) {
    throw InvalidArgument("box and image dimensions must be positive");
  }
  if (w > W || h > H) {
    throw InvalidArgument("box " + std::to_string(w) + "x" + std::to_string(h) +
                          " larger than image " + std::to_string(W) + "x" + std::to_string(H));
  }
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t stream_id, std::uint64_t substream)
    : root_seed_(root_seed), stream_id_(stream_id), substream_(substream) {
  key_ = mix64(root_seed ^ mix64(stream_id + kGolden) ^ mix64(mix64(substream) + 2 * kGolden));
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw InvalidArgument("uniform_below needs a positive bound");
  }
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) {
      return r % bound;
    }
  }
}

int RngStream::uniform_int(int lo, int hi) {
  if (hi < lo) {
    throw InvalidArgument("uniform_int with empty range");
  }
  const auto span = static_cast<std::uint64_t>(static_cast<long long>(hi) - lo) + 1;
  return static_cast<int>(lo + static_cast<long long>(uniform_below(span)));
}

double RngStream::uniform_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t stream_id_for(Purpose purpose, std::uint64_t batch_index) {
  constexpr std::uint64_t kLowMask = (std::uint64_t{1} << 56) - 1;
  if (batch_index > kLowMask) {
    throw InvalidArgument("batch_index exceeds 2^56");
  }
  return (static_cast<std::uint64_t>(purpose) << 56) | batch_index;
}

RngStream derive_stream(std::uint64_t root_seed, Purpose purpose, std::uint64_t batch_index,
                        std::uint64_t substream) {
  return RngStream(root_seed, stream_id_for(purpose, batch_index), substream);
}

BBox sample_box(RngStream& rng, int W, int H, int w, int h) {
  check_box_dims(W, H, w, h);
  BBox box;
  box.w = w;
  box.h = h;
  box.x = rng.uniform_int(0, W - w);
  box.y = rng.uniform_int(0, H - h);
  return box;
}

bool bernoulli_gate(RngStream& rng, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw InvalidArgument("rate must lie in [0, 1], got " + std::to_string(rate));
  }
  return rng.uniform_unit() < rate;
}

std::vector<int> sample_pairing(RngStream& rng, int batch_size) {
  if (batch_size < 1) {
    throw InvalidArgument("batch_size must be at least 1");
  }
  std::vector<int> perm(static_cast<std::size_t>(batch_size));
  for (int i = 0; i < batch_size; ++i) {
    perm[i] = i;
  }
  for (int i = batch_size - 1; i > 0; --i) {
    const int j = rng.uniform_int(0, i);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

std::vector<BBox> sample_nonoverlapping_boxes(RngStream& rng, int n, int W, int H, int w, int h,
                                              int max_attempts) {
  if (n < 1) {
    throw InvalidArgument("need at least one box");
  }
  check_box_dims(W, H, w, h);
  if (static_cast<long long>(n) * w * h > static_cast<long long>(W) * H) {
    throw InvalidArgument(std::to_string(n) + " boxes of " + std::to_string(w) + "x" +
                          std::to_string(h) + " cannot fit in " + std::to_string(W) + "x" +
                          std::to_string(H));
  }
  std::vector<BBox> boxes;
  boxes.reserve(static_cast<std::size_t>(n));
  int rejections = 0;
  while (static_cast<int>(boxes.size()) < n) {
    const BBox candidate = sample_box(rng, W, H, w, h);
    bool overlaps = false;
    for (const BBox& b : boxes) {
      if (intersection_area(candidate, b) > 0) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) {
      boxes.push_back(candidate);
    } else if (++rejections > max_attempts) {
      throw PlacementFailure("could not place " + std::to_string(n) +
                             " disjoint boxes within " + std::to_string(max_attempts) +
                             " attempts");
    }
  }
  return boxes;
}

}  // namespace cutthumb
