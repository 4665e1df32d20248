// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "cutthumb/image.hpp"

namespace cutthumb {

/// What a random stream is used for. Values are part of the replay contract.
enum class Purpose : std::uint8_t {
  kGate = 1,
  kPairing = 2,
  kBox = 3,
  kPartner = 4,
};

/**
 * Counter-based deterministic random stream.
 *
 * Draw k of a stream is a pure function of (root_seed, stream_id, substream, k),
 * so results are identical across runs, compilers and platforms. Streams are
 * plain values; copy one to fork it at its current position. A single stream
 * must not be shared between threads.
 */
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t stream_id, std::uint64_t substream = 0);

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t substream() const { return substream_; }
  std::uint64_t position() const { return counter_; }

  /// Next raw 64-bit draw.
  std::uint64_t next_u64();
  /// Uniform integer in [0, bound); bound must be >= 1. Unbiased.
  std::uint64_t uniform_below(std::uint64_t bound);
  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_unit();

 private:
  std::uint64_t root_seed_;
  std::uint64_t stream_id_;
  std::uint64_t substream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// stream_id for a (purpose, batch_index) pair: purpose in the top byte,
/// batch index in the low 56 bits. Injective for batch_index < 2^56.
std::uint64_t stream_id_for(Purpose purpose, std::uint64_t batch_index);

RngStream derive_stream(std::uint64_t root_seed, Purpose purpose, std::uint64_t batch_index,
                        std::uint64_t substream = 0);

/// Box of size w x h with corner uniform over {0..W-w} x {0..H-h}; draws x then y.
BBox sample_box(RngStream& rng, int W, int H, int w, int h);

/// True with probability `rate`; rate must lie in [0, 1].
bool bernoulli_gate(RngStream& rng, double rate);

/// Uniform random permutation of [0, batch_size) (Fisher-Yates).
std::vector<int> sample_pairing(RngStream& rng, int batch_size);

inline constexpr int kDefaultMaxAttempts = 100;

/// n pairwise-disjoint w x h boxes by rejection sampling. Throws
/// InvalidArgument when n*w*h > W*H and PlacementFailure after
/// `max_attempts` rejected draws.
std::vector<BBox> sample_nonoverlapping_boxes(RngStream& rng, int n, int W, int H, int w, int h,
                                              int max_attempts = kDefaultMaxAttempts);

}  // namespace cutthumb
