#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vortexcrypt/digest.hpp"
#include "vortexcrypt/grid.hpp"
#include "vortexcrypt/image.hpp"
#include "vortexcrypt/pixel_map.hpp"
#include "vortexcrypt/prng.hpp"

namespace vortexcrypt {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Vortex coefficient functions
// ---------------------------------------------------------------------------

enum class TermKind { Sin, Cos, Poly, Sqrt, Ln1p, Log10_1p, Exp, Exp2d, Pow2 };

inline constexpr std::array<std::pair<TermKind, std::string_view>, 9> kTermKindNames{{
    {TermKind::Sin, "sin"},
    {TermKind::Cos, "cos"},
    {TermKind::Poly, "poly"},
    {TermKind::Sqrt, "sqrt"},
    {TermKind::Ln1p, "ln1p"},
    {TermKind::Log10_1p, "log10_1p"},
    {TermKind::Exp, "exp"},
    {TermKind::Exp2d, "exp2d"},
    {TermKind::Pow2, "pow2"},
}};

inline std::string_view to_string(TermKind kind) {
  for (const auto& [k, name] : kTermKindNames)
    if (k == kind) return name;
  throw KeyError("unknown term kind");
}

inline TermKind term_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kTermKindNames)
    if (n == name) return k;
  throw KeyError("unknown term kind \"" + std::string(name) + "\"");
}

struct FunctionTerm {
  TermKind kind = TermKind::Sin;
  double amplitude = 0.0;
  double inner_scale = 0.0;  // sin/cos frequency
  double inner_shift = 0.0;  // sin/cos phase
  int degree = 1;            // poly exponent

  double operator()(double d) const {
    switch (kind) {
      case TermKind::Sin: return amplitude * std::sin(inner_scale * d + inner_shift);
      case TermKind::Cos: return amplitude * std::cos(inner_scale * d + inner_shift);
      case TermKind::Poly: return amplitude * std::pow(d, degree);
      case TermKind::Sqrt: return amplitude * std::sqrt(d);
      case TermKind::Ln1p: return amplitude * std::log1p(d);
      case TermKind::Log10_1p: return amplitude * std::log10(d + 1.0);
      case TermKind::Exp: return amplitude * std::exp(d);
      case TermKind::Exp2d: return amplitude * std::exp(2.0 * d);
      case TermKind::Pow2: return amplitude * std::exp2(d);
    }
    return 0.0;
  }

  void validate() const {
    if (!std::isfinite(amplitude) || !std::isfinite(inner_scale) || !std::isfinite(inner_shift)) {
      throw KeyError("function term has non-finite coefficients");
    }
    if (kind == TermKind::Poly && (degree < 1 || degree > 5)) {
      throw KeyError("poly degree " + std::to_string(degree) + " outside [1, 5]");
    }
  }

  friend bool operator==(const FunctionTerm&, const FunctionTerm&) = default;
};

struct RandomFunction {
  static constexpr std::size_t kMinTerms = 2;
  static constexpr std::size_t kMaxTerms = 5;

  std::vector<FunctionTerm> terms;

  double operator()(double d) const {
    double sum = 0.0;
    for (const auto& t : terms) sum += t(d);
    return sum;
  }

  void validate() const {
    if (terms.size() < kMinTerms || terms.size() > kMaxTerms) {
      throw KeyError("random function needs 2-5 terms, has " + std::to_string(terms.size()));
    }
    for (const auto& t : terms) t.validate();
  }

  friend bool operator==(const RandomFunction&, const RandomFunction&) = default;
};

// Draw order per function: term count in [2, 5]; then per term: kind, amplitude
// in [-2, 2], and frequency + phase in [0, 2] (sin/cos) or degree in [1, 5] (poly).
inline RandomFunction sample_function(Prng& rng) {
  RandomFunction f;
  const auto count = rng.between(RandomFunction::kMinTerms, RandomFunction::kMaxTerms);
  for (std::int64_t k = 0; k < count; ++k) {
    FunctionTerm t;
    t.kind = kTermKindNames[rng.below(kTermKindNames.size())].first;
    t.amplitude = rng.uniform(-2.0, 2.0);
    if (t.kind == TermKind::Sin || t.kind == TermKind::Cos) {
      t.inner_scale = rng.uniform(0.0, 2.0);
      t.inner_shift = rng.uniform(0.0, 2.0);
    } else if (t.kind == TermKind::Poly) {
      t.degree = static_cast<int>(rng.between(1, 5));
    }
    f.terms.push_back(t);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Single vortex
// ---------------------------------------------------------------------------

struct VortexSpec {
  Coord center;
  double radius = 1.0;
  RandomFunction function;

  // Largest radius whose disk stays inside the image around `center`.
  static std::int64_t max_radius(const Coord& center, const GridShape& shape) {
    return std::min({shape.cols() - center.i, center.i, shape.rows() - center.j, center.j});
  }

  void validate(const GridShape& shape) const {
    if (!shape.contains(center)) throw KeyError("vortex center outside " + shape.to_string());
    if (!(radius > 0.0) || !std::isfinite(radius)) throw KeyError("vortex radius must be positive");
    if (radius > static_cast<double>(max_radius(center, shape))) {
      throw KeyError("vortex radius " + std::to_string(radius) + " leaves the image around (" +
                     std::to_string(center.i) + "," + std::to_string(center.j) + ")");
    }
    function.validate();
  }

  friend bool operator==(const VortexSpec&, const VortexSpec&) = default;
};

// Angular offset (R - d) * f(d) at distance d from the center, reduced into [0, 2pi).
// Only the reduced angle is observable, so large raw values are harmless as long as finite.
inline double eval_angle_offset(const VortexSpec& spec, double d) {
  if (d < 0.0 || d > spec.radius) {
    throw BoundsError("distance " + std::to_string(d) + " outside vortex disk of radius " +
                      std::to_string(spec.radius));
  }
  const double raw = (spec.radius - d) * spec.function(d);
  if (!std::isfinite(raw)) {
    throw KeyError("vortex coefficient function is not finite at d=" + std::to_string(d));
  }
  double r = std::fmod(raw, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Grid points at one exact squared distance from the center, in increasing polar angle.
struct RingBand {
  std::int64_t sq_dist = 0;
  std::vector<Coord> members;
};

namespace detail {

// Exact comparison of atan2(dj, di) for two nonzero integer offsets; no floating point,
// so the ordering is identical on every platform. Angles run over (-pi, pi].
inline bool angle_less(std::int64_t ai, std::int64_t aj, std::int64_t bi, std::int64_t bj) {
  // Half 0 holds (-pi, 0], half 1 holds (0, pi].
  const auto half = [](std::int64_t di, std::int64_t dj) { return (dj < 0 || (dj == 0 && di > 0)) ? 0 : 1; };
  const int ha = half(ai, aj);
  const int hb = half(bi, bj);
  if (ha != hb) return ha < hb;
  return ai * bj - aj * bi > 0;
}

}  // namespace detail

inline std::vector<RingBand> ring_decomposition(const VortexSpec& spec, const GridShape& shape) {
  shape.check(spec.center);
  const double r2 = spec.radius * spec.radius;
  std::map<std::int64_t, std::vector<Coord>> by_sq;
  for (std::int64_t j = 1; j <= shape.rows(); ++j) {
    for (std::int64_t i = 1; i <= shape.cols(); ++i) {
      const Coord p{i, j};
      const auto q = sq_distance(p, spec.center);
      if (q > 0 && static_cast<double>(q) <= r2) by_sq[q].push_back(p);
    }
  }
  std::vector<RingBand> bands;
  bands.reserve(by_sq.size());
  for (auto& [q, members] : by_sq) {
    const auto& c = spec.center;
    std::sort(members.begin(), members.end(), [&](const Coord& a, const Coord& b) {
      return detail::angle_less(a.i - c.i, a.j - c.j, b.i - c.i, b.j - c.j);
    });
    bands.push_back(RingBand{q, std::move(members)});
  }
  return bands;
}

// Cyclic shift for a ring of `band_size` points turned by delta_theta radians:
// round(delta_theta * size / 2pi) mod size, rounding half away from zero.
inline std::int64_t band_shift(std::size_t band_size, double delta_theta) {
  if (band_size == 0) throw KeyError("band_shift on an empty band");
  const auto size = static_cast<std::int64_t>(band_size);
  const auto k = static_cast<std::int64_t>(std::round(delta_theta * static_cast<double>(size) / kTwoPi));
  return ((k % size) + size) % size;
}

inline std::int64_t band_shift(const RingBand& band, double delta_theta) {
  return band_shift(band.members.size(), delta_theta);
}

// Rotates every ring band of the disk by its own cyclic shift. The center and
// everything outside the disk stay put.
inline PixelMap vortex_map(const VortexSpec& spec, const GridShape& shape) {
  spec.validate(shape);
  std::vector<std::uint32_t> fw(shape.size());
  for (std::size_t k = 0; k < fw.size(); ++k) fw[k] = static_cast<std::uint32_t>(k);
  for (const auto& band : ring_decomposition(spec, shape)) {
    const double d = std::min(std::sqrt(static_cast<double>(band.sq_dist)), spec.radius);
    const auto k = band_shift(band, eval_angle_offset(spec, d));
    if (k == 0) continue;
    const auto size = band.members.size();
    for (std::size_t idx = 0; idx < size; ++idx) {
      const auto& from = band.members[idx];
      const auto& to = band.members[(idx + static_cast<std::size_t>(k)) % size];
      fw[shape.index_of(from)] = static_cast<std::uint32_t>(shape.index_of(to));
    }
  }
  return PixelMap(shape, std::move(fw));
}

// Largest circular angle difference between consecutive bands: how hard the
// vortex shears neighbouring rings against each other.
inline double band_shear(const VortexSpec& spec, const GridShape& shape) {
  double worst = 0.0;
  double prev = 0.0;
  bool first = true;
  for (const auto& band : ring_decomposition(spec, shape)) {
    const double d = std::min(std::sqrt(static_cast<double>(band.sq_dist)), spec.radius);
    const double a = eval_angle_offset(spec, d);
    if (!first) {
      const double diff = std::abs(a - prev);
      worst = std::max(worst, std::min(diff, kTwoPi - diff));
    }
    prev = a;
    first = false;
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Keys
// ---------------------------------------------------------------------------

struct VortexKey {
  static constexpr int kFormatVersion = 1;

  GridShape shape{1, 1};
  std::vector<VortexSpec> specs;  // application order: specs[0] first
  std::uint64_t seed = 0;
  int format_version = kFormatVersion;

  void validate() const {
    if (format_version != kFormatVersion) {
      throw KeyError("unsupported key format_version " + std::to_string(format_version));
    }
    for (const auto& s : specs) s.validate(shape);
  }

  friend bool operator==(const VortexKey&, const VortexKey&) = default;
};

namespace detail {

inline bool angles_finite(const VortexSpec& spec) {
  const auto r2 = static_cast<std::int64_t>(std::floor(spec.radius * spec.radius));
  for (std::int64_t q = 0; q <= r2; ++q) {
    const double d = std::min(std::sqrt(static_cast<double>(q)), spec.radius);
    if (!std::isfinite((spec.radius - d) * spec.function(d))) return false;
  }
  return true;
}

}  // namespace detail

// Draw order per vortex: center column in [1, n-1], center row in [1, m-1],
// integer radius in [1, max_radius], then the coefficient function (redrawn
// until finite over the disk).
inline VortexKey keygen(const GridShape& shape, std::size_t vortex_count, std::uint64_t seed) {
  if (shape.cols() < 3 || shape.rows() < 3) {
    throw KeyError("shape " + shape.to_string() + " is too small for a vortex (needs at least 3x3)");
  }
  if (vortex_count < 1) throw KeyError("keygen needs at least one vortex");
  Prng rng(seed);
  VortexKey key{shape, {}, seed, VortexKey::kFormatVersion};
  for (std::size_t v = 0; v < vortex_count; ++v) {
    VortexSpec spec;
    spec.center.i = rng.between(1, shape.cols() - 1);
    spec.center.j = rng.between(1, shape.rows() - 1);
    spec.radius = static_cast<double>(rng.between(1, VortexSpec::max_radius(spec.center, shape)));
    do {
      spec.function = sample_function(rng);
    } while (!detail::angles_finite(spec));
    key.specs.push_back(std::move(spec));
  }
  return key;
}

inline PixelMap apply_key(const VortexKey& key, const GridShape& shape) {
  if (!(key.shape == shape)) {
    throw KeyError("key shape " + key.shape.to_string() + " does not match data shape " + shape.to_string());
  }
  key.validate();
  auto map = PixelMap::identity(shape);
  for (const auto& spec : key.specs) map = compose(vortex_map(spec, shape), map);
  return map;
}

inline double key_shear(const VortexKey& key) {
  double worst = 0.0;
  for (const auto& spec : key.specs) worst = std::max(worst, band_shear(spec, key.shape));
  return worst;
}

inline Image encrypt_image(const Image& image, const PixelMap& map) {
  if (!(image.shape == map.shape())) {
    throw KeyError("image shape " + image.shape.to_string() + " does not match key shape " +
                   map.shape().to_string());
  }
  Image out(image.shape, image.channels);
  map.apply<std::uint8_t>(image.pixels, out.pixels);
  return out;
}

inline Image encrypt_image(const Image& image, const VortexKey& key) {
  return encrypt_image(image, apply_key(key, image.shape));
}

inline Image decrypt_image(const Image& image, const VortexKey& key) {
  return encrypt_image(image, apply_key(key, image.shape).inverse());
}

// ---------------------------------------------------------------------------
// Key JSON
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const FunctionTerm& t) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(t.kind);
  j["amplitude"] = t.amplitude;
  if (t.kind == TermKind::Sin || t.kind == TermKind::Cos) {
    j["inner_scale"] = t.inner_scale;
    j["inner_shift"] = t.inner_shift;
  } else if (t.kind == TermKind::Poly) {
    j["degree"] = t.degree;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const VortexKey& key) {
  nlohmann::ordered_json j;
  j["format_version"] = key.format_version;
  j["shape"] = {key.shape.cols(), key.shape.rows()};
  j["seed"] = key.seed;
  j["specs"] = nlohmann::ordered_json::array();
  for (const auto& s : key.specs) {
    nlohmann::ordered_json spec;
    spec["center"] = {s.center.i, s.center.j};
    if (s.radius == std::floor(s.radius)) {
      spec["radius"] = static_cast<std::int64_t>(s.radius);
    } else {
      spec["radius"] = s.radius;
    }
    spec["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : s.function.terms) spec["terms"].push_back(to_json(t));
    j["specs"].push_back(std::move(spec));
  }
  return j;
}

inline std::string key_to_string(const VortexKey& key) { return to_json(key).dump(); }

inline std::string key_digest(const VortexKey& key) { return sha256_hex(key_to_string(key)); }

inline VortexKey key_from_json(const nlohmann::json& j) {
  try {
    VortexKey key;
    key.format_version = j.at("format_version").get<int>();
    const auto& shape = j.at("shape");
    if (!shape.is_array() || shape.size() != 2) throw KeyError("key shape must be [n, m]");
    key.shape = GridShape(shape[0].get<std::int64_t>(), shape[1].get<std::int64_t>());
    key.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& js : j.at("specs")) {
      VortexSpec spec;
      const auto& c = js.at("center");
      if (!c.is_array() || c.size() != 2) throw KeyError("vortex center must be [i0, j0]");
      spec.center = Coord{c[0].get<std::int64_t>(), c[1].get<std::int64_t>()};
      spec.radius = js.at("radius").get<double>();
      for (const auto& jt : js.at("terms")) {
        FunctionTerm t;
        t.kind = term_kind_from_string(jt.at("kind").get<std::string>());
        t.amplitude = jt.at("amplitude").get<double>();
        if (t.kind == TermKind::Sin || t.kind == TermKind::Cos) {
          t.inner_scale = jt.at("inner_scale").get<double>();
          t.inner_shift = jt.at("inner_shift").get<double>();
        } else if (t.kind == TermKind::Poly) {
          t.degree = jt.at("degree").get<int>();
        }
        spec.function.terms.push_back(t);
      }
      key.specs.push_back(std::move(spec));
    }
    key.validate();
    return key;
  } catch (const nlohmann::json::exception& e) {
    throw KeyError(std::string("malformed key JSON: ") + e.what());
  }
}

inline VortexKey key_from_string(std::string_view text) {
  try {
    return key_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw KeyError(std::string("key is not valid JSON: ") + e.what());
  }
}

}  // namespace vortexcrypt
