// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/image.hpp"

#include <algorithm>
#include <string>

#include "cutthumb/error.hpp"

namespace cutthumb {

namespace {

void check_shape(int width, int height, int channels) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("image dimensions must be positive, got " + std::to_string(width) +
                          "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("image channels must be 1 or 3, got " + std::to_string(channels));
  }
}

std::string box_str(const BBox& b) {
  return "(" + std::to_string(b.x) + "," + std::to_string(b.y) + "," + std::to_string(b.w) +
         "," + std::to_string(b.h) + ")";
}

}  // namespace

Image::Image(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  pixels_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
  check_shape(width, height, channels);
  if (pixels_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionMismatch("pixel buffer holds " + std::to_string(pixels_.size()) +
                            " samples, expected " +
                            std::to_string(static_cast<std::size_t>(width) * height * channels));
  }
}

int intersection_area(const BBox& a, const BBox& b) {
  const int w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const int h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return (w > 0 && h > 0) ? w * h : 0;
}

Image thumbnail(const Image& x, int w, int h) {
  if (w < 1 || h < 1) {
    throw InvalidArgument("thumbnail dimensions must be positive");
  }
  if (w > x.width() || h > x.height()) {
    throw InvalidArgument("thumbnail " + std::to_string(w) + "x" + std::to_string(h) +
                          " exceeds source " + std::to_string(x.width()) + "x" +
                          std::to_string(x.height()));
  }
  const int channels = x.channels();
  Image out(w, h, channels);
  // Column lookup is shared by every row.
  std::vector<int> src_col(static_cast<std::size_t>(w));
  for (int j = 0; j < w; ++j) {
    src_col[j] = static_cast<int>(static_cast<long long>(j) * x.width() / w);
  }
  for (int i = 0; i < h; ++i) {
    const int src_row = static_cast<int>(static_cast<long long>(i) * x.height() / h);
    for (int j = 0; j < w; ++j) {
      for (int c = 0; c < channels; ++c) {
        out.at(i, j, c) = x.at(src_row, src_col[j], c);
      }
    }
  }
  return out;
}

Image paste(const Image& x, const Image& patch, const BBox& box) {
  if (patch.channels() != x.channels()) {
    throw DimensionMismatch("patch has " + std::to_string(patch.channels()) +
                            " channels, image has " + std::to_string(x.channels()));
  }
  if (patch.width() != box.w || patch.height() != box.h) {
    throw DimensionMismatch("patch " + std::to_string(patch.width()) + "x" +
                            std::to_string(patch.height()) + " does not match box " +
                            box_str(box));
  }
  if (!box.fits(x.width(), x.height())) {
    throw OutOfBounds("box " + box_str(box) + " outside " + std::to_string(x.width()) + "x" +
                      std::to_string(x.height()) + " image");
  }
  Image out = x;
  const auto row_len = static_cast<std::size_t>(box.w) * x.channels();
  auto src = patch.pixels();
  auto dst = out.pixels();
  for (int r = 0; r < box.h; ++r) {
    const auto src_off = static_cast<std::size_t>(r) * row_len;
    const auto dst_off =
        (static_cast<std::size_t>(box.y + r) * x.width() + box.x) * x.channels();
    std::copy_n(src.begin() + src_off, row_len, dst.begin() + dst_off);
  }
  return out;
}

Image to_grayscale(const Image& x) {
  if (x.channels() != 3) {
    throw AlreadyGrayscale("to_grayscale expects a 3-channel image, got 1 channel");
  }
  Image out(x.width(), x.height(), 3);
  auto src = x.pixels();
  auto dst = out.pixels();
  for (std::size_t p = 0; p < src.size(); p += 3) {
    // Fixed-point BT.601 (weights scaled by 1000) with round-half-up.
    const int luma = (299 * src[p] + 587 * src[p + 1] + 114 * src[p + 2] + 500) / 1000;
    const auto v = static_cast<std::uint8_t>(luma);
    dst[p] = dst[p + 1] = dst[p + 2] = v;
  }
  return out;
}

}  // namespace cutthumb
