#pragma once

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vortexcrypt/grid.hpp"
#include "vortexcrypt/image.hpp"
#include "vortexcrypt/parallel.hpp"
#include "vortexcrypt/pixel_map.hpp"

namespace vortexcrypt {

inline constexpr std::string_view kToolVersion = "vortexcrypt 1.0.0";

enum class SourceFormat { Idx, Cifar10Bin, Png };

inline std::string_view to_string(SourceFormat f) {
  switch (f) {
    case SourceFormat::Idx: return "idx";
    case SourceFormat::Cifar10Bin: return "cifar10";
    case SourceFormat::Png: return "png";
  }
  return "?";
}

// A stack of equally shaped 8-bit images, stored count x channels x rows x cols.
struct Dataset {
  std::size_t count = 0;
  std::size_t channels = 1;
  GridShape shape{1, 1};
  std::vector<std::uint8_t> images;
  std::optional<std::vector<std::uint8_t>> labels;
  SourceFormat source_format = SourceFormat::Idx;

  std::size_t image_bytes() const noexcept { return channels * shape.size(); }

  void validate() const {
    if (images.size() != count * image_bytes()) {
      throw FormatError("dataset buffer holds " + std::to_string(images.size()) + " bytes, expected " +
                        std::to_string(count * image_bytes()));
    }
    if (labels && labels->size() != count) {
      throw FormatError("dataset has " + std::to_string(labels->size()) + " labels for " +
                        std::to_string(count) + " images");
    }
  }

  Image image(std::size_t k) const {
    const auto first = images.begin() + static_cast<std::ptrdiff_t>(k * image_bytes());
    return Image(shape, channels, std::vector<std::uint8_t>(first, first + static_cast<std::ptrdiff_t>(image_bytes())));
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path.string());
}

inline std::uint32_t get_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

inline void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// IDX (MNIST / Fashion-MNIST)
//
// Big-endian header: magic 0x00000803 (u8, 3 dims) for images, 0x00000801
// (u8, 1 dim) for labels, followed by one u32 per dimension, then the payload.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

inline Dataset parse_idx_images(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw FormatError("IDX image file too short for its header");
  const auto magic = detail::get_be32(bytes, 0);
  if (magic != kIdxImagesMagic) throw FormatError("bad IDX image magic " + std::to_string(magic));
  const std::size_t count = detail::get_be32(bytes, 4);
  const std::size_t rows = detail::get_be32(bytes, 8);
  const std::size_t cols = detail::get_be32(bytes, 12);
  if (rows == 0 || cols == 0) throw FormatError("IDX image dimensions must be nonzero");
  if (bytes.size() != 16 + count * rows * cols) {
    throw FormatError("IDX payload is " + std::to_string(bytes.size() - 16) + " bytes, header declares " +
                      std::to_string(count * rows * cols));
  }
  Dataset ds;
  ds.count = count;
  ds.channels = 1;
  ds.shape = GridShape(static_cast<std::int64_t>(cols), static_cast<std::int64_t>(rows));
  ds.images.assign(bytes.begin() + 16, bytes.end());
  ds.source_format = SourceFormat::Idx;
  return ds;
}

inline std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError("IDX label file too short for its header");
  const auto magic = detail::get_be32(bytes, 0);
  if (magic != kIdxLabelsMagic) throw FormatError("bad IDX label magic " + std::to_string(magic));
  const std::size_t count = detail::get_be32(bytes, 4);
  if (bytes.size() != 8 + count) throw FormatError("IDX label payload length mismatch");
  return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.end());
}

inline std::vector<std::uint8_t> encode_idx_images(const Dataset& ds) {
  ds.validate();
  if (ds.channels != 1) throw FormatError("IDX images are single-channel");
  std::vector<std::uint8_t> out;
  out.reserve(16 + ds.images.size());
  detail::put_be32(out, kIdxImagesMagic);
  detail::put_be32(out, static_cast<std::uint32_t>(ds.count));
  detail::put_be32(out, static_cast<std::uint32_t>(ds.shape.rows()));
  detail::put_be32(out, static_cast<std::uint32_t>(ds.shape.cols()));
  out.insert(out.end(), ds.images.begin(), ds.images.end());
  return out;
}

inline std::vector<std::uint8_t> encode_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  detail::put_be32(out, kIdxLabelsMagic);
  detail::put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

inline Dataset read_idx(const std::filesystem::path& images,
                        const std::optional<std::filesystem::path>& labels = std::nullopt) {
  auto ds = parse_idx_images(detail::read_file(images));
  if (labels) {
    ds.labels = parse_idx_labels(detail::read_file(*labels));
    ds.validate();
  }
  return ds;
}

inline void write_idx(const Dataset& ds, const std::filesystem::path& images,
                      const std::optional<std::filesystem::path>& labels = std::nullopt) {
  detail::write_file(images, encode_idx_images(ds));
  if (labels) {
    if (!ds.labels) throw FormatError("dataset has no labels to write");
    detail::write_file(*labels, encode_idx_labels(*ds.labels));
  }
}

// ---------------------------------------------------------------------------
// CIFAR-10 binary batches: records of 1 label byte + 3072 image bytes
// (R, G, B planes of 32x32, row-major). A standard batch has 10000 records.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kCifarSide = 32;
inline constexpr std::size_t kCifarImageBytes = 3 * kCifarSide * kCifarSide;
inline constexpr std::size_t kCifarRecordBytes = 1 + kCifarImageBytes;
inline constexpr std::size_t kCifarBatchRecords = 10000;

inline Dataset parse_cifar10(std::span<const std::uint8_t> bytes) {
  if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
    throw FormatError("CIFAR-10 batch of " + std::to_string(bytes.size()) +
                      " bytes is not a whole number of 3073-byte records");
  }
  Dataset ds;
  ds.count = bytes.size() / kCifarRecordBytes;
  ds.channels = 3;
  ds.shape = GridShape(kCifarSide, kCifarSide);
  ds.source_format = SourceFormat::Cifar10Bin;
  ds.images.resize(ds.count * kCifarImageBytes);
  ds.labels.emplace(ds.count);
  for (std::size_t r = 0; r < ds.count; ++r) {
    const auto* rec = bytes.data() + r * kCifarRecordBytes;
    (*ds.labels)[r] = rec[0];
    std::memcpy(ds.images.data() + r * kCifarImageBytes, rec + 1, kCifarImageBytes);
  }
  return ds;
}

inline std::vector<std::uint8_t> encode_cifar10(const Dataset& ds) {
  ds.validate();
  if (ds.channels != 3 || ds.shape != GridShape(kCifarSide, kCifarSide)) {
    throw FormatError("CIFAR-10 records are 3x32x32, dataset is " + std::to_string(ds.channels) + "x" +
                      ds.shape.to_string());
  }
  if (!ds.labels) throw FormatError("CIFAR-10 records need labels");
  std::vector<std::uint8_t> out(ds.count * kCifarRecordBytes);
  for (std::size_t r = 0; r < ds.count; ++r) {
    auto* rec = out.data() + r * kCifarRecordBytes;
    rec[0] = (*ds.labels)[r];
    std::memcpy(rec + 1, ds.images.data() + r * kCifarImageBytes, kCifarImageBytes);
  }
  return out;
}

// Reads and concatenates one or more batch files in order.
inline Dataset read_cifar10(std::span<const std::filesystem::path> paths) {
  if (paths.empty()) throw FormatError("no CIFAR-10 batch files given");
  Dataset all = parse_cifar10(detail::read_file(paths[0]));
  for (std::size_t k = 1; k < paths.size(); ++k) {
    auto part = parse_cifar10(detail::read_file(paths[k]));
    all.images.insert(all.images.end(), part.images.begin(), part.images.end());
    all.labels->insert(all.labels->end(), part.labels->begin(), part.labels->end());
    all.count += part.count;
  }
  return all;
}

inline Dataset read_cifar10(const std::filesystem::path& path) {
  return read_cifar10(std::span<const std::filesystem::path>(&path, 1));
}

inline void write_cifar10(const Dataset& ds, const std::filesystem::path& path) {
  detail::write_file(path, encode_cifar10(ds));
}

// ---------------------------------------------------------------------------
// PNG (single images; 8-bit gray, gray+alpha, RGB or RGBA)
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint32_t png_format_for(std::size_t channels) {
  switch (channels) {
    case 1: return PNG_FORMAT_GRAY;
    case 2: return PNG_FORMAT_GA;
    case 3: return PNG_FORMAT_RGB;
    case 4: return PNG_FORMAT_RGBA;
  }
  throw FormatError("PNG supports 1-4 channels, got " + std::to_string(channels));
}

}  // namespace detail

inline Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw FormatError(std::string("not a readable PNG: ") + img.message);
  }
  const bool color = img.format & PNG_FORMAT_FLAG_COLOR;
  const bool alpha = img.format & PNG_FORMAT_FLAG_ALPHA;
  const std::size_t channels = (color ? 3 : 1) + (alpha ? 1 : 0);
  img.format = detail::png_format_for(channels);
  std::vector<std::uint8_t> interleaved(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, interleaved.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw FormatError("PNG decode failed: " + msg);
  }
  Image out(GridShape(img.width, img.height), channels);
  const std::size_t plane = out.shape.size();
  for (std::size_t p = 0; p < plane; ++p)
    for (std::size_t c = 0; c < channels; ++c) out.pixels[c * plane + p] = interleaved[p * channels + c];
  return out;
}

inline std::vector<std::uint8_t> encode_png(const Image& image) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.shape.cols());
  img.height = static_cast<png_uint_32>(image.shape.rows());
  img.format = detail::png_format_for(image.channels);
  const std::size_t plane = image.shape.size();
  std::vector<std::uint8_t> interleaved(plane * image.channels);
  for (std::size_t p = 0; p < plane; ++p)
    for (std::size_t c = 0; c < image.channels; ++c) interleaved[p * image.channels + c] = image.pixels[c * plane + p];
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, interleaved.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, interleaved.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

inline Image read_png(const std::filesystem::path& path) { return decode_png(detail::read_file(path)); }

inline void write_png(const Image& image, const std::filesystem::path& path) {
  detail::write_file(path, encode_png(image));
}

inline Dataset dataset_from_image(const Image& image, SourceFormat format = SourceFormat::Png) {
  Dataset ds;
  ds.count = 1;
  ds.channels = image.channels;
  ds.shape = image.shape;
  ds.images = image.pixels;
  ds.source_format = format;
  return ds;
}

// ---------------------------------------------------------------------------
// Transformation and manifests
// ---------------------------------------------------------------------------

// Applies `map` to every channel of every image; labels travel unchanged.
inline Dataset transform_dataset(const Dataset& ds, const PixelMap& map, std::optional<unsigned> threads = {}) {
  ds.validate();
  if (!(ds.shape == map.shape())) {
    throw KeyError("map shape " + map.shape().to_string() + " does not match image shape " + ds.shape.to_string());
  }
  Dataset out = ds;
  const std::size_t stride = ds.image_bytes();
  const std::span<const std::uint8_t> in(ds.images);
  const std::span<std::uint8_t> dst(out.images);
  parallel_for(ds.count, threads.value_or(default_threads()), [&](std::size_t k) {
    map.apply<std::uint8_t>(in.subspan(k * stride, stride), dst.subspan(k * stride, stride));
  });
  return out;
}

enum class ManifestOperation { Vortex, Permute, Identity };

inline std::string_view to_string(ManifestOperation op) {
  switch (op) {
    case ManifestOperation::Vortex: return "vortex";
    case ManifestOperation::Permute: return "permute";
    case ManifestOperation::Identity: return "identity";
  }
  return "?";
}

// Sidecar describing how a transformed file was produced.
struct Manifest {
  ManifestOperation operation = ManifestOperation::Vortex;
  std::string direction = "encrypt";
  std::string key_digest;
  std::string map_digest;
  GridShape shape{1, 1};
  double upsilon = 1.0;
  double shear = 0.0;
  int key_format_version = 1;
  std::string tool_version{kToolVersion};
  std::string prng{Prng::kName};
  std::string input_digest;
  std::string output_digest;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["operation"] = to_string(operation);
    j["direction"] = direction;
    j["key_digest"] = key_digest;
    j["map_digest"] = map_digest;
    j["shape"] = {shape.cols(), shape.rows()};
    j["upsilon"] = upsilon;
    j["shear"] = shear;
    j["key_format_version"] = key_format_version;
    j["tool_version"] = tool_version;
    j["prng"] = prng;
    j["input_digest"] = input_digest;
    j["output_digest"] = output_digest;
    return j;
  }
};

inline std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

inline void write_manifest(const Manifest& m, const std::filesystem::path& output) {
  const auto text = m.to_json().dump(2) + "\n";
  detail::write_file(manifest_path_for(output),
                     std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace vortexcrypt
