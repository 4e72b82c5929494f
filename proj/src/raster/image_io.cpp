// Copyright 2026 The Lumen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lumen/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "lumen/error.hpp"

namespace lumen {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};

bool HasPngSignature(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0;
}

// ---------------------------------------------------------------------------
// PNG decode

struct PngReadCursor {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
};

struct PngErrorState {
  char message[256];
};

void PngReadFromCursor(png_structp png, png_bytep out, png_size_t count) {
  auto* cursor = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cursor->size - cursor->offset < count) {
    png_error(png, "unexpected end of PNG stream");
  }
  std::memcpy(out, cursor->data + cursor->offset, count);
  cursor->offset += count;
}

void PngOnError(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png, 1);
}

void PngOnWarning(png_structp, png_const_charp) {}

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
};

// Raw decoded samples; 16-bit samples are stored big-endian as libpng
// delivers them. Returns false and fills `state` on a libpng error.
bool DecodePngRaw(std::span<const std::uint8_t> bytes, PngHeader* header,
                  std::vector<std::uint8_t>* pixels, std::size_t* row_bytes,
                  PngErrorState* state) {
  PngReadCursor cursor{bytes.data(), bytes.size(), 0};
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, state,
                                           PngOnError, PngOnWarning);
  if (png == nullptr) {
    std::snprintf(state->message, sizeof(state->message), "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(state->message, sizeof(state->message), "out of memory");
    return false;
  }
  // Row pointers live in a plain heap array so nothing with a destructor is
  // skipped by longjmp.
  png_bytep* volatile rows = nullptr;
  if (setjmp(png_jmpbuf(png))) {
    std::free(rows);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &cursor, PngReadFromCursor);
  png_read_info(png, info);
  header->width = png_get_image_width(png, info);
  header->height = png_get_image_height(png, info);
  header->bit_depth = png_get_bit_depth(png, info);
  header->color_type = png_get_color_type(png, info);
  if (header->color_type == PNG_COLOR_TYPE_PALETTE ||
      (header->bit_depth != 8 && header->bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return true;  // caller reports UnsupportedFormat
  }
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) {
    png_set_interlace_handling(png);
  }
  png_read_update_info(png, info);
  *row_bytes = png_get_rowbytes(png, info);
  pixels->resize(*row_bytes * header->height);
  rows = static_cast<png_bytep*>(std::malloc(sizeof(png_bytep) * header->height));
  if (rows == nullptr) png_error(png, "out of memory");
  for (png_uint_32 y = 0; y < header->height; ++y) {
    rows[y] = pixels->data() + y * *row_bytes;
  }
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  std::free(rows);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RasterImage DecodePng(std::span<const std::uint8_t> bytes) {
  PngHeader header;
  std::vector<std::uint8_t> pixels;
  std::size_t row_bytes = 0;
  PngErrorState state{};
  if (!DecodePngRaw(bytes, &header, &pixels, &row_bytes, &state)) {
    throw Error(ErrorCode::kDecodeError,
                std::string("malformed PNG: ") + state.message);
  }
  if (header.color_type == PNG_COLOR_TYPE_PALETTE) {
    throw Error(ErrorCode::kUnsupportedFormat, "palette PNG is not supported");
  }
  if (header.bit_depth != 8 && header.bit_depth != 16) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "PNG bit depth " + std::to_string(header.bit_depth) +
                    " is not supported");
  }

  int stored = 0;
  int channels = 0;
  switch (header.color_type) {
    case PNG_COLOR_TYPE_GRAY: stored = 1; channels = 1; break;
    case PNG_COLOR_TYPE_GRAY_ALPHA: stored = 2; channels = 1; break;
    case PNG_COLOR_TYPE_RGB: stored = 3; channels = 3; break;
    case PNG_COLOR_TYPE_RGB_ALPHA: stored = 4; channels = 3; break;
    default:
      throw Error(ErrorCode::kUnsupportedFormat, "unknown PNG color type");
  }
  if (stored != channels) {
    std::cerr << "warning: discarding PNG alpha channel\n";
  }

  const bool wide = header.bit_depth == 16;
  const double scale = wide ? 65535.0 : 255.0;
  const int width = static_cast<int>(header.width);
  const int height = static_cast<int>(header.height);
  std::vector<double> data(static_cast<std::size_t>(width) * height * channels);
  std::size_t k = 0;
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* row = pixels.data() + static_cast<std::size_t>(y) * row_bytes;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        const std::size_t s = static_cast<std::size_t>(x) * stored + c;
        const unsigned sample =
            wide ? (static_cast<unsigned>(row[2 * s]) << 8) | row[2 * s + 1]
                 : row[s];
        data[k++] = sample / scale;
      }
    }
  }
  return RasterImage(width, height, channels, std::move(data));
}

// ---------------------------------------------------------------------------
// Netpbm (P5/P6)

class NetpbmReader {
 public:
  explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int ReadHeaderInt() {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::kDecodeError, "malformed netpbm header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1 << 24) {
        throw Error(ErrorCode::kDecodeError, "netpbm header value too large");
      }
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void SkipRasterSeparator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kDecodeError, "malformed netpbm header");
    }
    ++pos_;
  }

  std::span<const std::uint8_t> Remaining() const {
    return bytes_.subspan(pos_);
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

RasterImage DecodeNetpbm(std::span<const std::uint8_t> bytes) {
  const int channels = bytes[1] == '6' ? 3 : 1;
  NetpbmReader reader(bytes);
  const int width = reader.ReadHeaderInt();
  const int height = reader.ReadHeaderInt();
  const int maxval = reader.ReadHeaderInt();
  reader.SkipRasterSeparator();
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    throw Error(ErrorCode::kDecodeError, "invalid netpbm dimensions or maxval");
  }
  const bool wide = maxval > 255;
  const std::size_t count = static_cast<std::size_t>(width) * height * channels;
  auto raster = reader.Remaining();
  if (raster.size() < count * (wide ? 2 : 1)) {
    throw Error(ErrorCode::kDecodeError, "truncated netpbm raster");
  }
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned sample =
        wide ? (static_cast<unsigned>(raster[2 * i]) << 8) | raster[2 * i + 1]
             : raster[i];
    data[i] = std::min(sample, static_cast<unsigned>(maxval)) /
              static_cast<double>(maxval);
  }
  return RasterImage(width, height, channels, std::move(data));
}

// ---------------------------------------------------------------------------
// PNG encode

void PngWriteToVector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void PngFlushNoop(png_structp) {}

bool EncodePngRaw(const std::uint8_t* samples, int width, int height,
                  int channels, std::vector<std::uint8_t>* out,
                  PngErrorState* state) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, state,
                                            PngOnError, PngOnWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, PngWriteToVector, PngFlushNoop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(samples + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

std::vector<std::uint8_t> QuantizeAll(const RasterImage& image) {
  auto src = image.data();
  std::vector<std::uint8_t> samples(src.size());
  std::transform(src.begin(), src.end(), samples.begin(), QuantizeSample);
  return samples;
}

std::vector<std::uint8_t> EncodeSamplesPng(const std::vector<std::uint8_t>& samples,
                                           int width, int height, int channels) {
  std::vector<std::uint8_t> out;
  PngErrorState state{};
  if (!EncodePngRaw(samples.data(), width, height, channels, &out, &state)) {
    throw Error(ErrorCode::kIoError,
                std::string("PNG encoding failed: ") + state.message);
  }
  return out;
}

std::string LowerExtension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext;
}

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
  if (HasPngSignature(bytes)) return DecodePng(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6')) {
    return DecodeNetpbm(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '1' &&
      bytes[1] <= '4') {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only binary PGM (P5) and PPM (P6) are supported");
  }
  throw Error(ErrorCode::kDecodeError, "not a PNG, PGM or PPM stream");
}

RasterImage load_image(const std::filesystem::path& path) {
  return decode_image(ReadFileBytes(path));
}

std::uint8_t QuantizeSample(double v) noexcept {
  const double scaled = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<std::uint8_t>(scaled);
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  return EncodeSamplesPng(QuantizeAll(image), image.width(), image.height(),
                          image.channels());
}

std::vector<std::uint8_t> encode_netpbm(const RasterImage& image) {
  const std::string header = std::string(image.channels() == 3 ? "P6" : "P5") +
                             "\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  auto samples = QuantizeAll(image);
  out.insert(out.end(), samples.begin(), samples.end());
  return out;
}

void save_image(const RasterImage& image, const std::filesystem::path& path) {
  const std::string ext = LowerExtension(path);
  if (ext == ".pgm" || ext == ".ppm") {
    if ((ext == ".ppm") != (image.channels() == 3)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "use .pgm for 1-channel and .ppm for 3-channel images");
    }
    WriteFileBytes(path, encode_netpbm(image));
  } else {
    WriteFileBytes(path, encode_png(image));
  }
}

BinaryMask decode_mask(std::span<const std::uint8_t> bytes) {
  const RasterImage gray = to_grayscale(decode_image(bytes));
  std::vector<std::uint8_t> bits(gray.pixel_count());
  auto values = gray.data();
  constexpr double kThreshold = 128.0 / 255.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = values[i] >= kThreshold ? 1 : 0;
  }
  return BinaryMask(gray.width(), gray.height(), std::move(bits));
}

BinaryMask load_mask(const std::filesystem::path& path) {
  return decode_mask(ReadFileBytes(path));
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
  std::vector<std::uint8_t> samples(mask.pixel_count());
  auto bits = mask.bits();
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = bits[i] ? 255 : 0;
  return EncodeSamplesPng(samples, mask.width(), mask.height(), 1);
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  WriteFileBytes(path, encode_mask_png(mask));
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  }
}

}  // namespace lumen
