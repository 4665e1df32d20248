// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cutthumb {

/**
 * Dense 8-bit raster, row-major and channel-interleaved.
 *
 * Sample (row, col, ch) lives at ((row * width) + col) * channels + ch.
 * Width and height are at least 1 and channels is 1 or 3; the constructors
 * enforce this, so every Image in circulation is well formed.
 */
class Image {
 public:
  /// Zero-filled image.
  Image(int width, int height, int channels);
  /// Takes ownership of an existing buffer; size must be width*height*channels.
  Image(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }

  std::uint8_t at(int row, int col, int ch) const { return pixels_[index(row, col, ch)]; }
  std::uint8_t& at(int row, int col, int ch) { return pixels_[index(row, col, ch)]; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels_ == other.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  int width_;
  int height_;
  int channels_;
  std::vector<std::uint8_t> pixels_;
};

/// Axis-aligned pixel box: left/top edge plus extent.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int area() const { return w * h; }
  bool contains(int row, int col) const {
    return col >= x && col < x + w && row >= y && row < y + h;
  }
  /// True iff the box is non-empty and lies entirely inside a width x height raster.
  bool fits(int width, int height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= width && y + h <= height;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Area of the intersection of two boxes (0 when disjoint or merely touching).
int intersection_area(const BBox& a, const BBox& b);

/// Nearest-stride subsample: out(i, j) = x(floor(i*H/h), floor(j*W/w)).
/// Throws InvalidArgument unless 1 <= w <= W and 1 <= h <= H.
Image thumbnail(const Image& x, int w, int h);

/// Copy of `x` with the region `box` replaced by `patch`.
Image paste(const Image& x, const Image& patch, const BBox& box);

/// BT.601 luma broadcast to three channels; rejects single-channel input.
Image to_grayscale(const Image& x);

}  // namespace cutthumb
