#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "vortexcrypt/digest.hpp"
#include "vortexcrypt/grid.hpp"
#include "vortexcrypt/prng.hpp"

namespace vortexcrypt {

// A bijection on the pixel positions of a grid, stored densely:
// forward()[src] is the row-major index that the pixel at src moves to.
class PixelMap {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  // Audits bijectivity; throws InvalidMapError otherwise.
  PixelMap(GridShape shape, std::vector<std::uint32_t> forward)
      : shape_{shape}, forward_{std::move(forward)} {
    audit();
  }

  static PixelMap identity(GridShape shape) {
    std::vector<std::uint32_t> fw(shape.size());
    std::iota(fw.begin(), fw.end(), 0u);
    return PixelMap(shape, std::move(fw), Trusted{});
  }

  static PixelMap transposition(const Coord& a, const Coord& b, GridShape shape) {
    const auto ia = shape.index_of(a);
    const auto ib = shape.index_of(b);
    if (ia == ib) throw DegenerateSwapError("transposition requires two distinct coordinates");
    auto map = identity(shape);
    std::swap(map.forward_[ia], map.forward_[ib]);
    return map;
  }

  // Uniform permutation (Fisher-Yates, descending) drawn from Prng(seed).
  static PixelMap random_permutation(GridShape shape, std::uint64_t seed) {
    Prng rng(seed);
    auto map = identity(shape);
    auto& fw = map.forward_;
    for (std::size_t k = fw.size(); k > 1; --k) {
      const auto r = static_cast<std::size_t>(rng.below(k));
      std::swap(fw[k - 1], fw[r]);
    }
    return map;
  }

  // (compose(outer, inner))(p) = outer(inner(p)).
  static PixelMap compose(const PixelMap& outer, const PixelMap& inner) {
    if (!(outer.shape_ == inner.shape_)) {
      throw InvalidMapError("cannot compose maps of shape " + outer.shape_.to_string() + " and " +
                            inner.shape_.to_string());
    }
    std::vector<std::uint32_t> fw(inner.forward_.size());
    for (std::size_t k = 0; k < fw.size(); ++k) fw[k] = outer.forward_[inner.forward_[k]];
    return PixelMap(inner.shape_, std::move(fw), Trusted{});
  }

  PixelMap inverse() const {
    std::vector<std::uint32_t> inv(forward_.size());
    for (std::size_t k = 0; k < forward_.size(); ++k) inv[forward_[k]] = static_cast<std::uint32_t>(k);
    return PixelMap(shape_, std::move(inv), Trusted{});
  }

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const std::uint32_t> forward() const noexcept { return forward_; }
  std::size_t size() const noexcept { return forward_.size(); }

  Coord operator()(const Coord& c) const { return shape_.coord_of(forward_[shape_.index_of(c)]); }

  bool is_identity() const noexcept {
    for (std::size_t k = 0; k < forward_.size(); ++k)
      if (forward_[k] != k) return false;
    return true;
  }

  std::size_t moved_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t k = 0; k < forward_.size(); ++k) n += forward_[k] != k;
    return n;
  }

  // Moves every pixel of every channel plane: out[c][forward[k]] = in[c][k].
  // Layout is channel-planar, each plane row-major with shape().size() samples.
  template <typename T>
  void apply(std::span<const T> in, std::span<T> out) const {
    const auto plane = forward_.size();
    if (in.size() != out.size() || plane == 0 || in.size() % plane != 0) {
      throw KeyError("image buffer of " + std::to_string(in.size()) +
                     " samples does not match map shape " + shape_.to_string());
    }
    for (std::size_t base = 0; base < in.size(); base += plane) {
      for (std::size_t k = 0; k < plane; ++k) out[base + forward_[k]] = in[base + k];
    }
  }

  template <typename T>
  std::vector<T> apply(std::span<const T> in) const {
    std::vector<T> out(in.size());
    apply(in, std::span<T>(out));
    return out;
  }

  // "PMAP", u32 version, u32 cols, u32 rows, then cols*rows u32 targets; all little-endian.
  std::vector<std::uint8_t> serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(16 + 4 * forward_.size());
    for (const char c : {'P', 'M', 'A', 'P'}) out.push_back(static_cast<std::uint8_t>(c));
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(shape_.cols()));
    put_u32(out, static_cast<std::uint32_t>(shape_.rows()));
    for (auto v : forward_) put_u32(out, v);
    return out;
  }

  static PixelMap deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), "PMAP", 4) != 0) {
      throw FormatError("not a PMAP buffer");
    }
    const auto version = get_u32(bytes, 4);
    if (version != kFormatVersion) throw FormatError("unsupported PMAP version " + std::to_string(version));
    const auto cols = get_u32(bytes, 8);
    const auto rows = get_u32(bytes, 12);
    if (cols == 0 || rows == 0) throw FormatError("PMAP has an empty shape");
    GridShape shape(cols, rows);
    if (bytes.size() != 16 + 4 * shape.size()) throw FormatError("PMAP payload length mismatch");
    std::vector<std::uint32_t> fw(shape.size());
    for (std::size_t k = 0; k < fw.size(); ++k) fw[k] = get_u32(bytes, 16 + 4 * k);
    return PixelMap(shape, std::move(fw));
  }

  std::string digest() const { return sha256_hex(std::span<const std::uint8_t>(serialize())); }

  friend bool operator==(const PixelMap& a, const PixelMap& b) {
    return a.shape_ == b.shape_ && a.forward_ == b.forward_;
  }

 private:
  struct Trusted {};
  PixelMap(GridShape shape, std::vector<std::uint32_t> forward, Trusted)
      : shape_{shape}, forward_{std::move(forward)} {}

  void audit() const {
    if (forward_.size() != shape_.size()) {
      throw InvalidMapError("map has " + std::to_string(forward_.size()) + " entries, shape " +
                            shape_.to_string() + " needs " + std::to_string(shape_.size()));
    }
    std::vector<bool> seen(forward_.size(), false);
    for (auto v : forward_) {
      if (v >= forward_.size() || seen[v]) throw InvalidMapError("map is not a bijection");
      seen[v] = true;
    }
  }

  static void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }

  static std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + b]) << (8 * b);
    return v;
  }

  GridShape shape_;
  std::vector<std::uint32_t> forward_;
};

inline PixelMap compose(const PixelMap& outer, const PixelMap& inner) {
  return PixelMap::compose(outer, inner);
}

inline PixelMap invert(const PixelMap& map) { return map.inverse(); }

}  // namespace vortexcrypt
