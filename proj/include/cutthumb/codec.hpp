// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cutthumb/image.hpp"

namespace cutthumb {

enum class ImageFormat { kPng, kPpm };

/// Channel layout requested from the decoder.
enum class ChannelMode {
  kRgb,   ///< always 3 channels; grayscale is replicated
  kKeep,  ///< grayscale PNG stays single-channel
};

/// Format implied by a file extension (.png, .ppm); throws UnsupportedFormat otherwise.
ImageFormat format_from_extension(const std::filesystem::path& path);

/// Decodes PNG or binary PPM (P6) bytes. Palette and low-bit-depth PNGs are
/// expanded to 8 bits, alpha is dropped, and 16-bit samples are rejected
/// since narrowing them is lossy.
Image decode_image(std::span<const std::uint8_t> bytes, ChannelMode mode = ChannelMode::kRgb);

/// Lossless encode. Single-channel images are written as grayscale PNG, or
/// as P6 with the channel replicated.
std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format);

Image load_image(const std::filesystem::path& path, ChannelMode mode = ChannelMode::kRgb);
void save_image(const Image& img, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace cutthumb
