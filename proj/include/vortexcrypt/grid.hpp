#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vortexcrypt {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class InvalidMapError : public Error {
 public:
  using Error::Error;
};

class DegenerateSwapError : public Error {
 public:
  using Error::Error;
};

class KeyError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Grid geometry
// ---------------------------------------------------------------------------

// 1-based pixel coordinate: i is the column in [1, cols], j the row in [1, rows].
struct Coord {
  std::int64_t i{1};
  std::int64_t j{1};

  friend constexpr bool operator==(const Coord&, const Coord&) = default;
};

class GridShape {
 public:
  GridShape(std::int64_t cols, std::int64_t rows) : cols_{cols}, rows_{rows} {
    if (cols < 1 || rows < 1) {
      throw BoundsError("grid shape must be at least 1x1, got " +
                        std::to_string(cols) + "x" + std::to_string(rows));
    }
  }

  std::int64_t cols() const noexcept { return cols_; }
  std::int64_t rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(cols_ * rows_); }

  // Diagonal length sqrt(m^2 + n^2); note it is the full extent, not (m-1, n-1).
  double max_distance() const noexcept {
    return std::sqrt(static_cast<double>(cols_ * cols_ + rows_ * rows_));
  }

  // Largest squared distance realised between two grid points.
  std::int64_t max_sq_distance() const noexcept {
    return (cols_ - 1) * (cols_ - 1) + (rows_ - 1) * (rows_ - 1);
  }

  bool contains(const Coord& c) const noexcept {
    return c.i >= 1 && c.i <= cols_ && c.j >= 1 && c.j <= rows_;
  }

  void check(const Coord& c) const {
    if (!contains(c)) {
      throw BoundsError("coordinate (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                        ") outside " + to_string());
    }
  }

  // Row-major 0-based index; conversions happen only at module edges.
  std::size_t index_of(const Coord& c) const {
    check(c);
    return static_cast<std::size_t>((c.j - 1) * cols_ + (c.i - 1));
  }

  Coord coord_of(std::size_t index) const {
    if (index >= size()) throw BoundsError("pixel index out of range");
    const auto k = static_cast<std::int64_t>(index);
    return Coord{k % cols_ + 1, k / cols_ + 1};
  }

  std::string to_string() const { return std::to_string(cols_) + "x" + std::to_string(rows_); }

  friend constexpr bool operator==(const GridShape&, const GridShape&) = default;

 private:
  std::int64_t cols_;
  std::int64_t rows_;
};

inline std::int64_t sq_distance(const Coord& p, const Coord& q) noexcept {
  const auto di = p.i - q.i;
  const auto dj = p.j - q.j;
  return di * di + dj * dj;
}

}  // namespace vortexcrypt
