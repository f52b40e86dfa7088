// Swirls a PNG with a fresh vortex key, then restores it.
//
//   swirl_png [input.png] [output.png] [seed]
//
// Without an input, a 64x64 gradient test card is generated.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "vortexcrypt/vortexcrypt.hpp"

using namespace vortexcrypt;

namespace {

Image test_card(GridShape shape) {
  Image img(shape, 3);
  for (std::int64_t j = 1; j <= shape.rows(); ++j) {
    for (std::int64_t i = 1; i <= shape.cols(); ++i) {
      const auto k = shape.index_of(Coord{i, j});
      img.pixels[k] = static_cast<std::uint8_t>(255 * (i - 1) / (shape.cols() - 1));
      img.pixels[shape.size() + k] = static_cast<std::uint8_t>(255 * (j - 1) / (shape.rows() - 1));
      img.pixels[2 * shape.size() + k] = ((i / 8 + j / 8) % 2) ? 220 : 40;
    }
  }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const Image img = argc > 1 ? read_png(argv[1]) : test_card(GridShape(64, 64));
    const std::string out = argc > 2 ? argv[2] : "swirl.png";
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

    const auto key = keygen(img.shape, 5, seed);
    const auto map = apply_key(key, img.shape);
    const auto enc = encrypt_image(img, map);
    write_png(enc, out);

    const bool restored = decrypt_image(enc, key) == img;
    std::cout << "key " << key_digest(key) << "\n"
              << "remaining information " << remaining_info(map).upsilon << "\n"
              << "moved pixels " << map.moved_count() << " of " << map.size() << "\n"
              << "restored " << (restored ? "yes" : "NO") << "\n";
    return restored ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
