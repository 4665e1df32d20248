// Copyright 2026 The cutthumb Authors
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0

#include "cutthumb/codec.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "cutthumb/error.hpp"

namespace cutthumb {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

// ---- PNG -------------------------------------------------------------------
//
// libpng reports errors through longjmp. The functions that call setjmp keep
// only trivially destructible locals; anything owning memory lives in the
// caller-owned structs below.

struct PngReadState {
  const std::uint8_t* data = nullptr;
  std::size_t size = 0;
  std::size_t offset = 0;
  char error[256] = {};
};

struct PngDecoded {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  bool unsupported = false;
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* err = static_cast<char*>(png_get_error_ptr(png));
  if (err != nullptr) {
    std::snprintf(err, 256, "%s", msg);
  }
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

void png_read_fn(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->size - st->offset < len) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, st->data + st->offset, len);
  st->offset += len;
}

bool decode_png_raw(PngReadState* st, PngDecoded* out, bool keep_gray) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, st->error, png_error_fn, png_warning_fn);
  if (png == nullptr) {
    std::snprintf(st->error, sizeof(st->error), "png_create_read_struct failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(st->error, sizeof(st->error), "png_create_info_struct failed");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, st, png_read_fn);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth == 16) {
    out->unsupported = true;
    std::snprintf(st->error, sizeof(st->error), "16-bit PNG is not supported");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  const bool gray = (color_type & PNG_COLOR_MASK_COLOR) == 0;
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (gray && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if ((color_type & PNG_COLOR_MASK_ALPHA) != 0) {
    png_set_strip_alpha(png);
  }
  if (gray && !keep_gray) {
    png_set_gray_to_rgb(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->channels = png_get_channels(png, info);
  const png_size_t rowbytes = png_get_rowbytes(png, info);
  if (out->channels != 1 && out->channels != 3) {
    std::snprintf(st->error, sizeof(st->error), "unexpected PNG channel count %d",
                  out->channels);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  out->pixels.resize(rowbytes * out->height);
  out->rows.resize(out->height);
  for (png_uint_32 r = 0; r < out->height; ++r) {
    out->rows[r] = out->pixels.data() + r * rowbytes;
  }
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

Image decode_png(std::span<const std::uint8_t> bytes, ChannelMode mode) {
  PngReadState st;
  st.data = bytes.data();
  st.size = bytes.size();
  PngDecoded dec;
  if (!decode_png_raw(&st, &dec, mode == ChannelMode::kKeep)) {
    if (dec.unsupported) {
      throw UnsupportedFormat(st.error);
    }
    throw CorruptData(std::string("corrupt PNG: ") + st.error);
  }
  if (dec.width > 1u << 24 || dec.height > 1u << 24) {
    throw CorruptData("PNG dimensions too large");
  }
  return Image(static_cast<int>(dec.width), static_cast<int>(dec.height), dec.channels,
               std::move(dec.pixels));
}

struct PngWriteState {
  std::vector<std::uint8_t>* out = nullptr;
  char error[256] = {};
};

void png_write_fn(png_structp png, png_bytep data, png_size_t len) {
  auto* st = static_cast<PngWriteState*>(png_get_io_ptr(png));
  st->out->insert(st->out->end(), data, data + len);
}

void png_flush_fn(png_structp) {}

bool encode_png_raw(PngWriteState* st, const Image* img, png_bytep* rows) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, st->error, png_error_fn, png_warning_fn);
  if (png == nullptr) {
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, st, png_write_fn, png_flush_fn);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img->width()),
               static_cast<png_uint_32>(img->height()), 8,
               img->channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> bytes;
  PngWriteState st;
  st.out = &bytes;
  // libpng wants non-const row pointers even for writing.
  std::vector<std::uint8_t> pixels(img.pixels().begin(), img.pixels().end());
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  for (int r = 0; r < img.height(); ++r) {
    rows[r] = pixels.data() + r * stride;
  }
  if (!encode_png_raw(&st, &img, rows.data())) {
    throw Error(std::string("PNG encode failed: ") + st.error);
  }
  return bytes;
}

// ---- PPM (P6) --------------------------------------------------------------

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  long read_uint() {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      ++pos_;
      if (++digits > 9) throw CorruptData("PPM header value too large");
    }
    if (digits == 0) throw CorruptData("malformed PPM header");
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  PpmHeaderReader reader(bytes);
  const long width = reader.read_uint();
  const long height = reader.read_uint();
  const long maxval = reader.read_uint();
  if (reader.pos() >= bytes.size() || !std::isspace(bytes[reader.pos()])) {
    throw CorruptData("malformed PPM header");
  }
  reader.advance();  // single whitespace before the raster
  if (width < 1 || height < 1) {
    throw CorruptData("PPM dimensions must be positive");
  }
  if (maxval != 255) {
    throw UnsupportedFormat("only 8-bit PPM (maxval 255) is supported, got " +
                            std::to_string(maxval));
  }
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - reader.pos() < need) {
    throw CorruptData("truncated PPM raster: need " + std::to_string(need) + " bytes, have " +
                      std::to_string(bytes.size() - reader.pos()));
  }
  auto first = bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos());
  return Image(static_cast<int>(width), static_cast<int>(height), 3,
               std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(need)));
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  if (img.channels() == 3) {
    bytes.insert(bytes.end(), img.pixels().begin(), img.pixels().end());
  } else {
    for (std::uint8_t v : img.pixels()) {
      bytes.insert(bytes.end(), 3, v);
    }
  }
  return bytes;
}

}  // namespace

ImageFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return ImageFormat::kPng;
  if (ext == ".ppm") return ImageFormat::kPpm;
  throw UnsupportedFormat("unsupported image extension '" + ext + "' for " + path.string() +
                          " (lossless .png or .ppm only)");
}

Image decode_image(std::span<const std::uint8_t> bytes, ChannelMode mode) {
  if (bytes.size() >= sizeof(kPngSignature) &&
      std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return decode_png(bytes, mode);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes);
  }
  if (bytes.empty()) {
    throw CorruptData("empty image data");
  }
  throw UnsupportedFormat("unrecognized image format (expected PNG or binary PPM)");
}

std::vector<std::uint8_t> encode_image(const Image& img, ImageFormat format) {
  return format == ImageFormat::kPng ? encode_png(img) : encode_ppm(img);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("error reading " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) {
    throw IoError("error writing " + path.string());
  }
}

Image load_image(const std::filesystem::path& path, ChannelMode mode) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes, mode);
  } catch (const CorruptData& e) {
    throw CorruptData(path.string() + ": " + e.what());
  } catch (const UnsupportedFormat& e) {
    throw UnsupportedFormat(path.string() + ": " + e.what());
  }
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const ImageFormat format = format_from_extension(path);
  write_file(path, encode_image(img, format));
}

}  // namespace cutthumb
