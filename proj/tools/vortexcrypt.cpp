// vortexcrypt: key generation, dataset encryption/decryption, information
// measurement and transformation sweeps.
//
// Exit codes: 0 success, 2 usage error, 3 data/format error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vortexcrypt/vortexcrypt.hpp"

namespace fs = std::filesystem;
using namespace vortexcrypt;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

void emit(const std::optional<fs::path>& out, const std::string& text) {
  if (out) {
    write_text(*out, text);
  } else {
    std::cout << text;
  }
}

Coord parse_coord(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("coordinate \"" + s + "\" must be written i,j");
  try {
    return Coord{std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("coordinate \"" + s + "\" must be two integers i,j");
  }
}

SourceFormat parse_format(const std::string& s) {
  if (s == "idx") return SourceFormat::Idx;
  if (s == "cifar10") return SourceFormat::Cifar10Bin;
  if (s == "png") return SourceFormat::Png;
  throw UsageError("unknown format \"" + s + "\"");
}

Dataset load_dataset(const fs::path& path, SourceFormat format) {
  switch (format) {
    case SourceFormat::Idx: return read_idx(path);
    case SourceFormat::Cifar10Bin: return read_cifar10(path);
    case SourceFormat::Png: return dataset_from_image(read_png(path));
  }
  throw UsageError("unsupported format");
}

void store_dataset(const Dataset& ds, const fs::path& path, SourceFormat format) {
  switch (format) {
    case SourceFormat::Idx: write_idx(ds, path); return;
    case SourceFormat::Cifar10Bin: write_cifar10(ds, path); return;
    case SourceFormat::Png: write_png(ds.image(0), path); return;
  }
}

std::string file_digest(const fs::path& path) {
  const auto bytes = detail::read_file(path);
  return sha256_hex(std::span<const std::uint8_t>(bytes));
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::int64_t vortices = 5;
  std::uint64_t seed = 0;
  fs::path out;
};

int run_keygen(const KeygenArgs& a) {
  if (a.width < 3 || a.height < 3) {
    throw UsageError("shape " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                     " admits no vortex; width and height must be at least 3");
  }
  if (a.vortices < 1) throw UsageError("--vortices must be at least 1");
  const auto key = keygen(GridShape(a.width, a.height), static_cast<std::size_t>(a.vortices), a.seed);
  write_text(a.out, to_json(key).dump(2) + "\n");
  std::cout << key_digest(key) << "\n";
  return 0;
}

struct TransformArgs {
  fs::path key;
  std::optional<std::uint64_t> permute_seed;
  fs::path in;
  std::string format;
  fs::path out;
};

// Encrypts (forward) or decrypts (inverse) a file with a vortex key or a seeded permutation.
int run_transform(const TransformArgs& a, bool forward) {
  const auto format = parse_format(a.format);
  Manifest manifest;
  manifest.direction = forward ? "encrypt" : "decrypt";

  auto ds = load_dataset(a.in, format);
  std::optional<PixelMap> map;
  if (a.permute_seed) {
    map = PixelMap::random_permutation(ds.shape, *a.permute_seed);
    manifest.operation = ManifestOperation::Permute;
    manifest.key_digest = sha256_hex("permute:" + std::to_string(*a.permute_seed) + ":" + std::string(Prng::kName));
  } else {
    const auto key = key_from_string(read_text(a.key));
    map = apply_key(key, ds.shape);
    manifest.operation = key.specs.empty() ? ManifestOperation::Identity : ManifestOperation::Vortex;
    manifest.key_digest = key_digest(key);
    manifest.key_format_version = key.format_version;
    manifest.shear = key_shear(key);
  }
  manifest.shape = ds.shape;
  manifest.map_digest = map->digest();
  manifest.upsilon = remaining_info(*map).upsilon;

  const auto out = transform_dataset(ds, forward ? *map : map->inverse());
  store_dataset(out, a.out, format);
  manifest.input_digest = file_digest(a.in);
  manifest.output_digest = file_digest(a.out);
  write_manifest(manifest, a.out);
  std::cout << manifest.map_digest << "\n";
  return 0;
}

struct InfoArgs {
  std::optional<fs::path> key;
  std::optional<std::uint64_t> permute_seed;
  std::vector<std::string> swap;
  bool identity = false;
  std::optional<std::int64_t> width;
  std::optional<std::int64_t> height;
  std::optional<fs::path> out;
};

int run_info(const InfoArgs& a) {
  const int sources = (a.key ? 1 : 0) + (a.permute_seed ? 1 : 0) + (a.swap.empty() ? 0 : 1) + (a.identity ? 1 : 0);
  if (sources != 1) throw UsageError("give exactly one of --key, --permute-seed, --swap, --identity");
  if (!a.key && (!a.width || !a.height)) throw UsageError("--width and --height are required without --key");
  if (a.width && *a.width < 1) throw UsageError("--width must be positive");
  if (a.height && *a.height < 1) throw UsageError("--height must be positive");

  std::optional<PixelMap> map;
  if (a.key) {
    const auto key = key_from_string(read_text(*a.key));
    if ((a.width && *a.width != key.shape.cols()) || (a.height && *a.height != key.shape.rows())) {
      throw KeyError("key shape " + key.shape.to_string() + " differs from --width/--height");
    }
    map = apply_key(key, key.shape);
  } else {
    const GridShape shape(*a.width, *a.height);
    if (a.permute_seed) {
      map = PixelMap::random_permutation(shape, *a.permute_seed);
    } else if (!a.swap.empty()) {
      const auto p = parse_coord(a.swap.at(0));
      const auto q = parse_coord(a.swap.at(1));
      if (!shape.contains(p) || !shape.contains(q)) throw UsageError("--swap coordinate outside the grid");
      if (p == q) throw UsageError("--swap needs two distinct coordinates");
      map = PixelMap::transposition(p, q, shape);
    } else {
      map = PixelMap::identity(shape);
    }
  }
  const auto report = remaining_info(*map);
  nlohmann::ordered_json j;
  j["total_original"] = report.total_original;
  j["total_transformed"] = report.total_transformed;
  j["upsilon"] = report.upsilon;
  j["shape"] = {report.shape.cols(), report.shape.rows()};
  j["map_digest"] = map->digest();
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

struct SweepArgs {
  std::string mode = "permute";
  std::int64_t steps = 10;
  std::int64_t seeds = 10;
  std::int64_t width = 28;
  std::int64_t height = 28;
  std::uint64_t seed = 0;
  std::optional<fs::path> out;
};

int run_sweep_cmd(const SweepArgs& a) {
  if (a.mode != "vortex" && a.mode != "permute") throw UsageError("--mode must be vortex or permute");
  if (a.steps < 0) throw UsageError("--steps must be non-negative");
  if (a.seeds < 1) throw UsageError("--seeds must be at least 1");
  if (a.mode == "vortex" && (a.width < 3 || a.height < 3)) throw UsageError("vortex sweeps need at least 3x3");
  if (a.width < 1 || a.height < 1) throw UsageError("--width and --height must be positive");
  SweepConfig cfg;
  cfg.mode = sweep_mode_from_string(a.mode);
  cfg.steps = static_cast<std::size_t>(a.steps);
  cfg.seeds = static_cast<std::size_t>(a.seeds);
  cfg.shape = GridShape(a.width, a.height);
  cfg.base_seed = a.seed;
  std::ostringstream csv;
  write_sweep_csv(csv, run_sweep(cfg));
  emit(a.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vortex image encryption and information-content toolkit"};
  app.require_subcommand(1);

  KeygenArgs kg;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a random vortex key");
  keygen_cmd->add_option("--width", kg.width, "Image width n (columns)")->required();
  keygen_cmd->add_option("--height", kg.height, "Image height m (rows)")->required();
  keygen_cmd->add_option("--vortices", kg.vortices, "Number of superposed vortices")->capture_default_str();
  keygen_cmd->add_option("--seed", kg.seed, "PRNG seed")->capture_default_str();
  keygen_cmd->add_option("--out", kg.out, "Key JSON output path")->required();

  TransformArgs enc, dec;
  auto add_transform = [&](const char* name, const char* help, TransformArgs& t) {
    auto* cmd = app.add_subcommand(name, help);
    auto* key = cmd->add_option("--key", t.key, "Vortex key JSON");
    auto* perm = cmd->add_option("--permute-seed", t.permute_seed, "Use a seeded uniform permutation instead of a key");
    key->excludes(perm);
    cmd->add_option("--in", t.in, "Input file")->required();
    cmd->add_option("--format", t.format, "idx | cifar10 | png")->required();
    cmd->add_option("--out", t.out, "Output file (a .manifest.json sidecar is written next to it)")->required();
    return std::make_pair(cmd, std::make_pair(key, perm));
  };
  auto [encrypt_cmd, enc_src] = add_transform("encrypt", "Encrypt a dataset or image", enc);
  auto [decrypt_cmd, dec_src] = add_transform("decrypt", "Decrypt a dataset or image", dec);

  InfoArgs info;
  auto* info_cmd = app.add_subcommand("info", "Report remaining information content for a transformation");
  info_cmd->add_option("--key", info.key, "Vortex key JSON");
  info_cmd->add_option("--permute-seed", info.permute_seed, "Seed of a uniform random permutation");
  info_cmd->add_option("--swap", info.swap, "Two coordinates i,j to transpose")->expected(2);
  info_cmd->add_flag("--identity", info.identity, "Identity transformation");
  info_cmd->add_option("--width", info.width, "Image width n (columns)");
  info_cmd->add_option("--height", info.height, "Image height m (rows)");
  info_cmd->add_option("--out", info.out, "Report JSON path (stdout when omitted)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Upsilon after repeated transformations (CSV)");
  sweep_cmd->add_option("--mode", sw.mode, "vortex | permute")->required();
  sweep_cmd->add_option("--steps", sw.steps, "Number of composed transformations")->capture_default_str();
  sweep_cmd->add_option("--seeds", sw.seeds, "Independent runs averaged per step")->capture_default_str();
  sweep_cmd->add_option("--width", sw.width, "Image width n (columns)")->capture_default_str();
  sweep_cmd->add_option("--height", sw.height, "Image height m (rows)")->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--out", sw.out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (keygen_cmd->parsed()) return run_keygen(kg);
    if (encrypt_cmd->parsed() || decrypt_cmd->parsed()) {
      const bool forward = encrypt_cmd->parsed();
      const auto& args = forward ? enc : dec;
      const auto& src = forward ? enc_src : dec_src;
      if (src.first->count() + src.second->count() != 1) throw UsageError("give exactly one of --key or --permute-seed");
      return run_transform(args, forward);
    }
    if (info_cmd->parsed()) return run_info(info);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sw);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
