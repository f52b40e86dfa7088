#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "vortexcrypt/grid.hpp"
#include "vortexcrypt/parallel.hpp"
#include "vortexcrypt/pixel_map.hpp"

namespace vortexcrypt {

// ---------------------------------------------------------------------------
// Pair information
//
// The information shared by two pixels decays with their reduced distance
// d~ = d / d_max along a Z-shaped logistic:
//
//   m(d~) = 1 - 1 / (1 + exp(6 - 18 d~))
//
// which is 1/2 at d~ = 1/3 and ~6e-6 at d~ = 1. Pixel values never enter.
// ---------------------------------------------------------------------------

inline double reduced_distance(const Coord& p, const Coord& q, const GridShape& shape) {
  shape.check(p);
  shape.check(q);
  return std::sqrt(static_cast<double>(sq_distance(p, q))) / shape.max_distance();
}

// Evaluated as the logistic 1/(1+e^{-x}), algebraically identical to 1 - 1/(1+e^{x}).
inline double pair_info_at(double reduced) noexcept {
  return 1.0 / (1.0 + std::exp(-(6.0 - 18.0 * reduced)));
}

inline double pair_info(const Coord& p, const Coord& q, const GridShape& shape) {
  return pair_info_at(reduced_distance(p, q, shape));
}

// Pair information tabulated by integer squared distance. Every pair of grid
// points has an integer squared distance in [0, (n-1)^2 + (m-1)^2], so this
// table is exact, not an approximation.
class NeighborKernel {
 public:
  explicit NeighborKernel(GridShape shape) : shape_{shape} {
    const auto len = static_cast<std::size_t>(shape.max_sq_distance()) + 1;
    const double dmax = shape.max_distance();
    table_.resize(len);
    for (std::size_t q = 0; q < len; ++q) {
      table_[q] = pair_info_at(std::sqrt(static_cast<double>(q)) / dmax);
    }
  }

  const GridShape& shape() const noexcept { return shape_; }
  const std::vector<double>& table() const noexcept { return table_; }

  double at_sq(std::int64_t sq) const { return table_.at(static_cast<std::size_t>(sq)); }
  double operator()(const Coord& p, const Coord& q) const {
    shape_.check(p);
    shape_.check(q);
    return table_[static_cast<std::size_t>(sq_distance(p, q))];
  }

 private:
  GridShape shape_;
  std::vector<double> table_;
};

inline NeighborKernel build_kernel(GridShape shape) { return NeighborKernel(shape); }

// Neighbouring information of one pixel: its pair information summed over
// every grid point, the pixel itself included.
inline double pixel_neighbor_info(const Coord& p, const NeighborKernel& kernel) {
  const auto& shape = kernel.shape();
  shape.check(p);
  CompensatedSum acc;
  for (std::int64_t t = 1; t <= shape.rows(); ++t)
    for (std::int64_t s = 1; s <= shape.cols(); ++s) acc.add(kernel.at_sq(sq_distance(p, Coord{s, t})));
  return acc.value();
}

// Pair information after moving pixels by `map`:
//   [1 - (m(p,q) - m(map p, map q))] * m(p,q)
// Pairs that move closer can gain; only totals under a swap are guaranteed to lose.
inline double transformed_pair_info(const Coord& p, const Coord& q, const PixelMap& map,
                                    const GridShape& shape) {
  if (!(map.shape() == shape)) throw InvalidMapError("map shape differs from grid shape");
  const double before = pair_info(p, q, shape);
  const double after = pair_info(map(p), map(q), shape);
  return (1.0 - (before - after)) * before;
}

struct InfoReport {
  GridShape shape;
  double total_original = 0.0;
  double total_transformed = 0.0;
  double upsilon = 0.0;
};

struct InfoOptions {
  // Worker count; nullopt uses default_threads(). Totals do not depend on it.
  std::optional<unsigned> threads;
};

// Totals over all ordered pixel pairs, self pairs included. Each source pixel
// accumulates its own compensated partial; partials are then reduced in pixel
// order, so the result is bit-identical for any thread count.
inline InfoReport remaining_info(const PixelMap& map, const NeighborKernel& kernel,
                                 InfoOptions options = {}) {
  const auto& shape = kernel.shape();
  if (!(map.shape() == shape)) {
    throw InvalidMapError("map shape " + map.shape().to_string() + " differs from kernel shape " +
                          shape.to_string());
  }
  const std::size_t count = shape.size();
  const auto cols = shape.cols();
  const auto fw = map.forward();
  const double* table = kernel.table().data();

  std::vector<std::int32_t> col(count), row(count), mcol(count), mrow(count);
  for (std::size_t k = 0; k < count; ++k) {
    col[k] = static_cast<std::int32_t>(k % cols);
    row[k] = static_cast<std::int32_t>(k / cols);
    mcol[k] = static_cast<std::int32_t>(fw[k] % cols);
    mrow[k] = static_cast<std::int32_t>(fw[k] / cols);
  }

  std::vector<double> part_orig(count), part_trans(count);
  parallel_for(count, options.threads.value_or(default_threads()), [&](std::size_t a) {
    CompensatedSum orig, trans;
    const auto ca = col[a], ra = row[a], ma = mcol[a], na = mrow[a];
    for (std::size_t b = 0; b < count; ++b) {
      const auto di = ca - col[b], dj = ra - row[b];
      const auto mi = ma - mcol[b], mj = na - mrow[b];
      const double before = table[di * di + dj * dj];
      const double after = table[mi * mi + mj * mj];
      orig.add(before);
      trans.add((1.0 - (before - after)) * before);
    }
    part_orig[a] = orig.value();
    part_trans[a] = trans.value();
  });

  CompensatedSum total_orig, total_trans;
  for (std::size_t a = 0; a < count; ++a) {
    total_orig.add(part_orig[a]);
    total_trans.add(part_trans[a]);
  }
  InfoReport report{shape, total_orig.value(), total_trans.value(), 0.0};
  report.upsilon = report.total_transformed / report.total_original;
  return report;
}

inline InfoReport remaining_info(const PixelMap& map, InfoOptions options = {}) {
  return remaining_info(map, NeighborKernel(map.shape()), options);
}

// Change in total information, M(P*) - M(P), when the pixels at a and b trade
// places. With g_a(s) = 1 - m(a, s) and g_b(s) = 1 - m(b, s), every pixel s
// outside {a, b} loses (g_a - g_b)^2 once as a source row and once as a target
// column; pairs within {a, b} keep their distance. Never positive.
inline double swap_delta(const Coord& a, const Coord& b, const NeighborKernel& kernel) {
  const auto& shape = kernel.shape();
  shape.check(a);
  shape.check(b);
  if (a == b) throw DegenerateSwapError("swap_delta requires two distinct coordinates");
  CompensatedSum rows_loss, cols_loss;
  for (std::int64_t t = 1; t <= shape.rows(); ++t) {
    for (std::int64_t s = 1; s <= shape.cols(); ++s) {
      const Coord p{s, t};
      if (p == a || p == b) continue;
      // Rows of the swapped pixels against p (gamma_1, gamma_2).
      const double g1 = 1.0 - kernel.at_sq(sq_distance(a, p));
      const double g2 = 1.0 - kernel.at_sq(sq_distance(b, p));
      rows_loss.add((g1 - g2) * (g1 - g2));
      // Row of p against the swapped pixels (gamma_3, gamma_4).
      const double g3 = 1.0 - kernel.at_sq(sq_distance(p, a));
      const double g4 = 1.0 - kernel.at_sq(sq_distance(p, b));
      cols_loss.add((g3 - g4) * (g3 - g4));
    }
  }
  return -(cols_loss.value() + rows_loss.value());
}

}  // namespace vortexcrypt
