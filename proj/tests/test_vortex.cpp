#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "fixtures.hpp"
#include "vortexcrypt/info_model.hpp"
#include "vortexcrypt/vortex.hpp"

using namespace vortexcrypt;

namespace {

RandomFunction zero_function() {
  return RandomFunction{{FunctionTerm{TermKind::Sin, 0.0, 1.0, 0.0, 1}, FunctionTerm{TermKind::Exp, 0.0}}};
}

// f(d) = c * d, padded with a zero term to satisfy the 2-term minimum.
RandomFunction linear_function(double c) {
  return RandomFunction{{FunctionTerm{TermKind::Poly, c, 0.0, 0.0, 1}, FunctionTerm{TermKind::Sqrt, 0.0}}};
}

}  // namespace

TEST(FunctionTerm, Families) {
  const double d = 1.7;
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Sin, 2.0, 0.5, 0.25})(d), 2.0 * std::sin(0.5 * d + 0.25));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Cos, 2.0, 0.5, 0.25})(d), 2.0 * std::cos(0.5 * d + 0.25));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Poly, 1.5, 0, 0, 3})(d), 1.5 * d * d * d);
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Sqrt, 1.5})(d), 1.5 * std::sqrt(d));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Ln1p, 1.5})(d), 1.5 * std::log(d + 1));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Log10_1p, 1.5})(d), 1.5 * std::log10(d + 1));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Exp, 1.5})(d), 1.5 * std::exp(d));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Exp2d, 1.5})(d), 1.5 * std::exp(2 * d));
  EXPECT_DOUBLE_EQ((FunctionTerm{TermKind::Pow2, 1.5})(d), 1.5 * std::pow(2.0, d));
}

TEST(FunctionTerm, Validation) {
  EXPECT_THROW((FunctionTerm{TermKind::Poly, 1.0, 0, 0, 6}).validate(), KeyError);
  EXPECT_THROW((FunctionTerm{TermKind::Poly, 1.0, 0, 0, 0}).validate(), KeyError);
  EXPECT_THROW((FunctionTerm{TermKind::Sin, NAN, 0, 0}).validate(), KeyError);
  EXPECT_THROW((RandomFunction{{FunctionTerm{TermKind::Exp, 1.0}}}).validate(), KeyError);
}

TEST(SampleFunction, FirstFixtureFunctionValues) {
  // -1.88 sin(1.20 d + 0.95) + 1.17 cos(0.68 d + 0.74), values evaluated independently.
  const auto key = load_fixture_key("vortex-1.json");
  const auto& f = key.specs[0].function;
  EXPECT_NEAR(f(0.0), -0.66521293529040482, 1e-12);
  EXPECT_NEAR(f(1.0), -1.3976059269045034, 1e-12);
  EXPECT_EQ(key.specs[0].radius, 4.0);
  EXPECT_NEAR(eval_angle_offset(key.specs[0], 1.0), 2.0903675264660766, 1e-12);
}

TEST(SampleFunction, DeterministicAndInRange) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Prng a(seed), b(seed);
    const auto fa = sample_function(a);
    ASSERT_EQ(fa, sample_function(b));
    ASSERT_GE(fa.terms.size(), 2u);
    ASSERT_LE(fa.terms.size(), 5u);
    for (const auto& t : fa.terms) {
      ASSERT_GE(t.amplitude, -2.0);
      ASSERT_LE(t.amplitude, 2.0);
      if (t.kind == TermKind::Sin || t.kind == TermKind::Cos) {
        ASSERT_GE(t.inner_scale, 0.0);
        ASSERT_LE(t.inner_scale, 2.0);
        ASSERT_GE(t.inner_shift, 0.0);
        ASSERT_LE(t.inner_shift, 2.0);
      }
      if (t.kind == TermKind::Poly) {
        ASSERT_GE(t.degree, 1);
        ASSERT_LE(t.degree, 5);
      }
    }
    EXPECT_NO_THROW(fa.validate());
    for (double d = 0.0; d <= 16.0; d += 0.25) ASSERT_TRUE(std::isfinite(fa(d)));
  }
}

TEST(SampleFunction, CoversEveryTermKind) {
  std::set<TermKind> seen;
  Prng rng(3);
  for (int k = 0; k < 200; ++k)
    for (const auto& t : sample_function(rng).terms) seen.insert(t.kind);
  EXPECT_EQ(seen.size(), kTermKindNames.size());
}

TEST(AngleOffset, BoundaryAndZero) {
  VortexSpec spec{Coord{5, 5}, 4.0, load_fixture_key("vortex-1.json").specs[1].function};
  EXPECT_EQ(eval_angle_offset(spec, 4.0), 0.0);
  EXPECT_THROW(eval_angle_offset(spec, 4.5), BoundsError);
  EXPECT_THROW(eval_angle_offset(spec, -0.1), BoundsError);
  spec.function = zero_function();
  for (double d = 0.0; d <= 4.0; d += 0.5) EXPECT_EQ(eval_angle_offset(spec, d), 0.0);
}

TEST(AngleOffset, ReducedIntoTurn) {
  // Large raw angles from the exponential families still land in [0, 2pi).
  for (const auto& name : {"vortex-1.json", "vortex-2.json", "vortex-3.json"}) {
    for (const auto& spec : load_fixture_key(name).specs) {
      for (double d = 0.0; d <= spec.radius; d += 0.125) {
        const double a = eval_angle_offset(spec, d);
        ASSERT_GE(a, 0.0);
        ASSERT_LT(a, kTwoPi);
      }
    }
  }
}

TEST(AngleOrder, MatchesAtan2) {
  Prng rng(8);
  for (int k = 0; k < 20000; ++k) {
    const auto ai = rng.between(-20, 20), aj = rng.between(-20, 20);
    const auto bi = rng.between(-20, 20), bj = rng.between(-20, 20);
    if ((ai == 0 && aj == 0) || (bi == 0 && bj == 0)) continue;
    const double ta = std::atan2(double(aj), double(ai)), tb = std::atan2(double(bj), double(bi));
    if (std::abs(ta - tb) < 1e-12) continue;
    ASSERT_EQ(detail::angle_less(ai, aj, bi, bj), ta < tb) << ai << "," << aj << " vs " << bi << "," << bj;
  }
}

TEST(RingDecomposition, UnitRing) {
  const VortexSpec spec{Coord{3, 3}, 1.0, zero_function()};
  const auto bands = ring_decomposition(spec, GridShape(5, 5));
  ASSERT_EQ(bands.size(), 1u);
  EXPECT_EQ(bands[0].sq_dist, 1);
  const std::vector<Coord> expected{{3, 2}, {4, 3}, {3, 4}, {2, 3}};
  EXPECT_EQ(bands[0].members, expected);
}

TEST(RingDecomposition, RadiusTwo) {
  const VortexSpec spec{Coord{3, 3}, 2.0, zero_function()};
  const auto bands = ring_decomposition(spec, GridShape(5, 5));
  ASSERT_EQ(bands.size(), 3u);
  EXPECT_EQ(bands[0].sq_dist, 1);
  EXPECT_EQ(bands[1].sq_dist, 2);
  EXPECT_EQ(bands[2].sq_dist, 4);
  for (const auto& b : bands) EXPECT_EQ(b.members.size(), 4u);
}

TEST(RingDecomposition, PartitionsTheGrid) {
  const GridShape g(28, 28);
  for (const auto& spec : load_fixture_key("vortex-1.json").specs) {
    std::vector<int> hits(g.size(), 0);
    hits[g.index_of(spec.center)] += 1;
    for (const auto& band : ring_decomposition(spec, g)) {
      ASSERT_FALSE(band.members.empty());
      ASSERT_LE(static_cast<double>(band.sq_dist), spec.radius * spec.radius);
      for (const auto& p : band.members) {
        ASSERT_EQ(sq_distance(p, spec.center), band.sq_dist);
        hits[g.index_of(p)] += 1;
      }
      for (std::size_t k = 1; k < band.members.size(); ++k) {
        const auto& a = band.members[k - 1];
        const auto& b = band.members[k];
        ASSERT_LT(std::atan2(double(a.j - spec.center.j), double(a.i - spec.center.i)),
                  std::atan2(double(b.j - spec.center.j), double(b.i - spec.center.i)));
      }
    }
    for (std::size_t k = 0; k < g.size(); ++k) {
      const bool inside = static_cast<double>(sq_distance(g.coord_of(k), spec.center)) <= spec.radius * spec.radius;
      ASSERT_EQ(hits[k], inside ? 1 : 0);
    }
  }
}

TEST(BandShift, Examples) {
  EXPECT_EQ(band_shift(4, std::numbers::pi / 2), 1);
  EXPECT_EQ(band_shift(4, std::numbers::pi / 4), 1);  // 0.5 rounds away from zero
  EXPECT_EQ(band_shift(4, 0.0), 0);
  EXPECT_EQ(band_shift(8, kTwoPi - 1e-9), 0);
  EXPECT_EQ(band_shift(12, std::numbers::pi), 6);
  EXPECT_THROW(band_shift(0, 1.0), KeyError);
}

TEST(VortexMap, ZeroFunctionIsIdentity) {
  const VortexSpec spec{Coord{10, 12}, 7.0, zero_function()};
  EXPECT_TRUE(vortex_map(spec, GridShape(28, 28)).is_identity());
}

TEST(VortexMap, QuarterTurnOnInnerRing) {
  // R = 2 and f(d) = (pi/2) d give the q = 1 ring (R - 1) f(1) = pi/2: one step.
  const GridShape g(5, 5);
  const VortexSpec spec{Coord{3, 3}, 2.0, linear_function(std::numbers::pi / 2)};
  const auto map = vortex_map(spec, g);
  EXPECT_EQ(map(Coord{4, 3}), (Coord{3, 4}));
  EXPECT_EQ(map(Coord{3, 4}), (Coord{2, 3}));
  EXPECT_EQ(map(Coord{2, 3}), (Coord{3, 2}));
  EXPECT_EQ(map(Coord{3, 2}), (Coord{4, 3}));
  EXPECT_EQ(map(Coord{3, 3}), (Coord{3, 3}));
  // The q = R^2 ring has zero offset and stays.
  for (const Coord c : {Coord{5, 3}, Coord{3, 5}, Coord{1, 3}, Coord{3, 1}}) EXPECT_EQ(map(c), c);
}

TEST(VortexMap, UnitRadiusVortexIsIdentity) {
  // Its only ring sits on the boundary where (R - d) vanishes.
  const VortexSpec spec{Coord{12, 26}, 1.0, load_fixture_key("vortex-2.json").specs[0].function};
  EXPECT_TRUE(vortex_map(spec, GridShape(28, 28)).is_identity());
}

TEST(VortexMap, FixesCenterAndExterior) {
  const GridShape g(28, 28);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto key = keygen(g, 1, seed);
    const auto& spec = key.specs[0];
    const auto map = vortex_map(spec, g);
    EXPECT_EQ(map(spec.center), spec.center);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto p = g.coord_of(k);
      const auto q = sq_distance(p, spec.center);
      if (static_cast<double>(q) >= spec.radius * spec.radius) {
        ASSERT_EQ(map(p), p);
      }
      ASSERT_EQ(sq_distance(map(p), spec.center), q);  // rings are preserved
    }
  }
}

TEST(VortexMap, RejectsInvalidSpec) {
  const GridShape g(28, 28);
  EXPECT_THROW(vortex_map(VortexSpec{Coord{5, 11}, 6.0, zero_function()}, g), KeyError);
  EXPECT_THROW(vortex_map(VortexSpec{Coord{30, 11}, 1.0, zero_function()}, g), KeyError);
  EXPECT_THROW(vortex_map(VortexSpec{Coord{5, 11}, 0.0, zero_function()}, g), KeyError);
  const VortexSpec huge{Coord{14, 14}, 5.0,
                        RandomFunction{{FunctionTerm{TermKind::Poly, 1e307, 0, 0, 5}, FunctionTerm{TermKind::Exp, 1.0}}}};
  EXPECT_THROW(vortex_map(huge, g), KeyError);  // (R - d) f(d) overflows at d = 2
}

TEST(Keygen, SatisfiesRadiusConstraint) {
  const GridShape g(28, 28);
  const auto key = keygen(g, 5, 7);
  ASSERT_EQ(key.specs.size(), 5u);
  EXPECT_EQ(key.seed, 7u);
  for (const auto& s : key.specs) {
    EXPECT_GE(s.radius, 1.0);
    EXPECT_EQ(s.radius, std::floor(s.radius));
    EXPECT_LE(s.radius, double(std::min({28 - s.center.i, s.center.i, 28 - s.center.j, s.center.j})));
  }
  EXPECT_EQ(keygen(g, 5, 7), key);
  EXPECT_NE(key_digest(keygen(g, 5, 8)), key_digest(key));
}

TEST(Keygen, LargeShapesStayFinite) {
  const auto key = keygen(GridShape(512, 512), 6, 1);
  EXPECT_NO_THROW(apply_key(key, key.shape));
}

TEST(Keygen, Errors) {
  EXPECT_THROW(keygen(GridShape(2, 28), 1, 0), KeyError);
  EXPECT_THROW(keygen(GridShape(28, 2), 1, 0), KeyError);
  EXPECT_THROW(keygen(GridShape(28, 28), 0, 0), KeyError);
  EXPECT_NO_THROW(keygen(GridShape(3, 3), 4, 0));
}

TEST(FixtureKeys, ValidateOn28x28) {
  const std::vector<std::vector<std::pair<Coord, double>>> expected{
      {{{5, 11}, 4}, {{18, 18}, 9}, {{10, 6}, 5}, {{8, 12}, 7}, {{19, 15}, 8}},
      {{{12, 26}, 1}, {{19, 21}, 6}, {{8, 10}, 7}, {{12, 11}, 10}},
      {{{23, 22}, 4}, {{8, 12}, 7}, {{14, 10}, 9}, {{15, 26}, 1}, {{20, 19}, 7}},
  };
  const char* names[] = {"vortex-1.json", "vortex-2.json", "vortex-3.json"};
  for (std::size_t f = 0; f < 3; ++f) {
    const auto key = load_fixture_key(names[f]);
    EXPECT_EQ(key.shape, GridShape(28, 28));
    ASSERT_EQ(key.specs.size(), expected[f].size());
    for (std::size_t s = 0; s < key.specs.size(); ++s) {
      EXPECT_EQ(key.specs[s].center, expected[f][s].first);
      EXPECT_EQ(key.specs[s].radius, expected[f][s].second);
    }
    EXPECT_NO_THROW(key.validate());
  }
}

TEST(ApplyKey, CompositionOrder) {
  const GridShape g(28, 28);
  VortexKey empty{g, {}, 0};
  EXPECT_TRUE(apply_key(empty, g).is_identity());

  const auto key = keygen(g, 3, 99);
  VortexKey single{g, {key.specs[0]}, 0};
  EXPECT_EQ(apply_key(single, g), vortex_map(key.specs[0], g));

  auto manual = PixelMap::identity(g);
  for (const auto& s : key.specs) manual = compose(vortex_map(s, g), manual);
  EXPECT_EQ(apply_key(key, g), manual);
  EXPECT_THROW(apply_key(key, GridShape(28, 27)), KeyError);
}

TEST(ApplyKey, RandomKeysAreBijective) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GridShape g(3 + seed % 30, 3 + (seed * 7) % 30);
    const auto key = keygen(g, 1 + seed % 5, seed);
    const auto map = apply_key(key, g);
    // The constructor audits bijectivity; re-check via the inverse.
    ASSERT_TRUE(compose(map, map.inverse()).is_identity());
  }
}

TEST(ApplyKey, FixtureRetainsMoreThanRandomPermutation) {
  const GridShape g(28, 28);
  const auto kernel = build_kernel(g);
  const double random = remaining_info(PixelMap::random_permutation(g, 1), kernel).upsilon;
  for (const auto& name : {"vortex-1.json", "vortex-2.json", "vortex-3.json"}) {
    const auto r = remaining_info(apply_key(load_fixture_key(name), g), kernel);
    EXPECT_GT(r.upsilon, random + 0.15) << name;
    EXPECT_LT(r.upsilon, 1.0) << name;
  }
}

TEST(EncryptImage, ConstantImageUnchanged) {
  const auto key = load_fixture_key("vortex-1.json");
  Image img(key.shape, 3);
  std::fill(img.pixels.begin(), img.pixels.end(), 173);
  EXPECT_EQ(encrypt_image(img, key), img);
}

TEST(EncryptImage, DeltaMovesToMappedPosition) {
  const auto key = load_fixture_key("vortex-1.json");
  const auto map = apply_key(key, key.shape);
  const Coord p{18, 16};
  Image img(key.shape, 1);
  img.at(0, p) = 255;
  const auto enc = encrypt_image(img, key);
  EXPECT_EQ(enc.at(0, map(p)), 255);
  EXPECT_EQ(std::count(enc.pixels.begin(), enc.pixels.end(), 255), 1);
}

TEST(EncryptImage, RoundTripIsExact) {
  const auto key = load_fixture_key("vortex-3.json");
  Prng rng(5);
  for (std::size_t channels : {1u, 3u}) {
    Image img(key.shape, channels);
    for (auto& v : img.pixels) v = static_cast<std::uint8_t>(rng.below(256));
    const auto enc = encrypt_image(img, key);
    EXPECT_NE(enc, img);
    EXPECT_EQ(decrypt_image(enc, key), img);
  }
  EXPECT_THROW(encrypt_image(Image(GridShape(27, 28), 1), key), KeyError);
}

TEST(KeyJson, CanonicalLayout) {
  VortexKey key{GridShape(28, 28),
                {VortexSpec{Coord{5, 11}, 4.0,
                            RandomFunction{{FunctionTerm{TermKind::Sin, -1.5, 1.25, 0.5},
                                            FunctionTerm{TermKind::Poly, 0.25, 0, 0, 3}}}}},
                42};
  EXPECT_EQ(key_to_string(key),
            R"({"format_version":1,"shape":[28,28],"seed":42,"specs":[{"center":[5,11],"radius":4,"terms":[)"
            R"({"kind":"sin","amplitude":-1.5,"inner_scale":1.25,"inner_shift":0.5},)"
            R"({"kind":"poly","amplitude":0.25,"degree":3}]}]})");
}

TEST(KeyJson, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto key = keygen(GridShape(28, 32), 1 + seed % 5, seed);
    const auto back = key_from_string(to_json(key).dump(2));
    ASSERT_EQ(back, key);
    ASSERT_EQ(apply_key(back, back.shape), apply_key(key, key.shape));
  }
}

TEST(KeyJson, RejectsMalformedKeys) {
  EXPECT_THROW(key_from_string("{"), KeyError);
  EXPECT_THROW(key_from_string(R"({"format_version":1})"), KeyError);
  EXPECT_THROW(key_from_string(R"({"format_version":2,"shape":[28,28],"seed":0,"specs":[]})"), KeyError);
  EXPECT_THROW(key_from_string(
                   R"({"format_version":1,"shape":[28,28],"seed":0,"specs":[{"center":[5,11],"radius":6,)"
                   R"("terms":[{"kind":"exp","amplitude":1},{"kind":"sqrt","amplitude":1}]}]})"),
               KeyError);
  EXPECT_THROW(key_from_string(
                   R"({"format_version":1,"shape":[28,28],"seed":0,"specs":[{"center":[5,11],"radius":2,)"
                   R"("terms":[{"kind":"tan","amplitude":1},{"kind":"sqrt","amplitude":1}]}]})"),
               KeyError);
}

TEST(Shear, ZeroForStillVortexAndBounded) {
  const GridShape g(28, 28);
  EXPECT_EQ(band_shear(VortexSpec{Coord{14, 14}, 9.0, zero_function()}, g), 0.0);
  const double s = key_shear(load_fixture_key("vortex-1.json"));
  EXPECT_GT(s, 0.0);
  EXPECT_LE(s, std::numbers::pi);
}
