#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavsem/dct.hpp"
#include "uavsem/image.hpp"

namespace uavsem {

inline constexpr int kTextureGridSize = 4;
inline constexpr int kNumTextureBlocks = kTextureGridSize * kTextureGridSize;

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Block geometry of the codec: one global structure block of r_s samples
// plus 16 texture blocks of r_t samples each on a 4x4 tile grid.
struct CodecProfile {
  int r_s = 128;
  int r_t = 24;
  int width = 256;
  int height = 256;

  int tile_width() const { return width / kTextureGridSize; }
  int tile_height() const { return height / kTextureGridSize; }
};

// Serialized block samples. float matches the 32-bit wire/file format, so
// export-import round trips are exact. scale_meta holds each block's RMS
// (structure first, textures row-major, zero blocks get 1.0), the factor
// the PHY uses for power normalization.
struct BlockSet {
  std::vector<float> structure;
  std::array<std::vector<float>, kNumTextureBlocks> textures;
  std::vector<float> scale_meta;

  friend bool operator==(const BlockSet& a, const BlockSet& b) {
    return a.structure == b.structure && a.textures == b.textures;
  }
};

// Receiver-side view: a block is either a received sample vector or
// MISSING (nullopt), which is distinct from an all-zero vector.
struct ReceptionState {
  std::optional<std::vector<float>> structure;
  std::array<std::optional<std::vector<float>>, kNumTextureBlocks> textures;
};

enum class CompletionMode { kZeroFill, kConditional };

// Coefficient bookkeeping
// -----------------------
// Per color channel a 2-D orthonormal DCT-II is applied to the full image
// (structure) and to each tile of the structure residual (texture).
// Coefficients are picked in zigzag order (see zigzag_scan). A budget of
// r samples is split across the three channels as evenly as possible with
// the remainder going to channels in luminance order G, R, B; blocks are
// serialized channel 0 (R), then 1 (G), then 2 (B). Texture blocks skip
// the tile DC term (zigzag index 0): tile means are already carried by
// the structure block. Everything below is deterministic, so encode is
// bit-reproducible.
inline std::array<int, 3> split_counts(int total) {
  std::array<int, 3> counts{total / 3, total / 3, total / 3};
  const int rem = total % 3;
  if (rem >= 1) counts[1] += 1;  // G
  if (rem >= 2) counts[0] += 1;  // R
  return counts;
}

namespace detail {

inline Eigen::MatrixXd channel_matrix(const ImageBuffer& img, int c) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      img.ch[c].data(), img.height, img.width);
}

inline float block_scale(const std::vector<float>& block) {
  double energy = 0.0;
  for (float v : block) energy += static_cast<double>(v) * v;
  if (block.empty() || energy == 0.0) return 1.0f;
  return static_cast<float>(std::sqrt(energy / block.size()));
}

inline void validate_profile(const CodecProfile& p) {
  if (p.width <= 0 || p.height <= 0) throw ProfileError("profile: bad dimensions");
  if (p.width % kTextureGridSize != 0 || p.height % kTextureGridSize != 0)
    throw ProfileError("profile: dimensions not divisible by the texture grid");
  if (p.r_s < 1 || p.r_t < 1) throw ProfileError("profile: block lengths must be >= 1");
  const auto counts_s = split_counts(p.r_s);
  const auto counts_t = split_counts(p.r_t);
  const long tile_coeffs =
      static_cast<long>(p.tile_width()) * p.tile_height();
  for (int c = 0; c < 3; ++c) {
    if (counts_s[c] > static_cast<long>(p.width) * p.height)
      throw ProfileError("profile: r_s exceeds available coefficients");
    if (counts_t[c] > tile_coeffs - 1)
      throw ProfileError("profile: r_t exceeds available tile AC coefficients");
  }
}

// Rebuilds the three full-image coefficient grids from a serialized
// structure block and inverts them. Shared by encode (residual reference)
// and decode (base layer); missing structure means an all-zero block.
inline std::array<Eigen::MatrixXd, 3> structure_base(
    const std::vector<float>* structure, const CodecProfile& p) {
  const auto counts = split_counts(p.r_s);
  const auto& scan = zigzag_scan(p.height, p.width);
  std::array<Eigen::MatrixXd, 3> base;
  std::size_t offset = 0;
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(p.height, p.width);
    if (structure != nullptr) {
      for (int i = 0; i < counts[c]; ++i) {
        const auto [row, col] = scan[i];
        coeffs(row, col) = (*structure)[offset + i];
      }
    }
    offset += counts[c];
    base[c] = idct2(coeffs);
  }
  return base;
}

}  // namespace detail

// Splits an image into the structure block (lowest-frequency full-image
// coefficients) and 16 texture blocks (lowest-frequency AC coefficients of
// each tile of the residual left after the structure reconstruction).
inline BlockSet encode(const ImageBuffer& img, const CodecProfile& profile) {
  detail::validate_profile(profile);
  if (img.width != profile.width || img.height != profile.height)
    throw ProfileError("encode: image size differs from profile");

  const auto counts_s = split_counts(profile.r_s);
  const auto counts_t = split_counts(profile.r_t);
  const auto& full_scan = zigzag_scan(profile.height, profile.width);
  const int tile_h = profile.tile_height();
  const int tile_w = profile.tile_width();
  const auto& tile_scan = zigzag_scan(tile_h, tile_w);

  BlockSet out;
  out.structure.reserve(profile.r_s);
  std::array<Eigen::MatrixXd, 3> channels;
  for (int c = 0; c < 3; ++c) {
    channels[c] = detail::channel_matrix(img, c);
    const Eigen::MatrixXd coeffs = dct2(channels[c]);
    for (int i = 0; i < counts_s[c]; ++i) {
      const auto [row, col] = full_scan[i];
      out.structure.push_back(static_cast<float>(coeffs(row, col)));
    }
  }

  // Residual against the quantized structure, i.e. exactly what the
  // receiver will be able to rebuild from the structure block.
  const auto base = detail::structure_base(&out.structure, profile);

  for (int tr = 0; tr < kTextureGridSize; ++tr) {
    for (int tc = 0; tc < kTextureGridSize; ++tc) {
      std::vector<float>& block = out.textures[tr * kTextureGridSize + tc];
      block.reserve(profile.r_t);
      for (int c = 0; c < 3; ++c) {
        const Eigen::MatrixXd residual =
            channels[c].block(tr * tile_h, tc * tile_w, tile_h, tile_w) -
            base[c].block(tr * tile_h, tc * tile_w, tile_h, tile_w);
        const Eigen::MatrixXd coeffs = dct2(residual);
        for (int i = 1; i <= counts_t[c]; ++i) {  // skip the DC term
          const auto [row, col] = tile_scan[i];
          block.push_back(static_cast<float>(coeffs(row, col)));
        }
      }
    }
  }

  out.scale_meta.reserve(1 + kNumTextureBlocks);
  out.scale_meta.push_back(detail::block_scale(out.structure));
  for (const auto& t : out.textures) out.scale_meta.push_back(detail::block_scale(t));
  return out;
}

// Fills every MISSING texture block. zero_fill inserts zeros; conditional
// synthesizes the coefficient-wise mean of the received 4-neighbors scaled
// by 0.5 (falling back to zeros when no neighbor was received). Only
// blocks received in the input count as neighbors, never synthesized
// ones. The structure entry is passed through untouched.
inline ReceptionState complete_missing(const ReceptionState& rx,
                                       CompletionMode mode,
                                       const CodecProfile& profile) {
  ReceptionState out = rx;
  for (int tr = 0; tr < kTextureGridSize; ++tr) {
    for (int tc = 0; tc < kTextureGridSize; ++tc) {
      const int idx = tr * kTextureGridSize + tc;
      if (out.textures[idx].has_value()) continue;
      std::vector<float> filled(static_cast<std::size_t>(profile.r_t), 0.0f);
      if (mode == CompletionMode::kConditional) {
        const int neighbor_offsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        int received = 0;
        std::vector<double> acc(static_cast<std::size_t>(profile.r_t), 0.0);
        for (const auto& d : neighbor_offsets) {
          const int nr = tr + d[0];
          const int nc = tc + d[1];
          if (nr < 0 || nr >= kTextureGridSize || nc < 0 || nc >= kTextureGridSize)
            continue;
          const auto& neighbor = rx.textures[nr * kTextureGridSize + nc];
          if (!neighbor.has_value()) continue;
          for (std::size_t i = 0; i < acc.size() && i < neighbor->size(); ++i)
            acc[i] += (*neighbor)[i];
          ++received;
        }
        if (received > 0) {
          for (std::size_t i = 0; i < acc.size(); ++i)
            filled[i] = static_cast<float>(0.5 * acc[i] / received);
        }
      }
      out.textures[idx] = std::move(filled);
    }
  }
  return out;
}

// Inverse of the encode placement: structure coefficients back into the
// full-image grids, texture coefficients back into per-tile grids, inverse
// transforms, overlay, clamp to [-1, 1]. A missing structure block decodes
// as the zero vector (receiver fallback); textures must all be present
// (run complete_missing first).
inline ImageBuffer decode(const ReceptionState& rx, const CodecProfile& profile) {
  detail::validate_profile(profile);
  const auto counts_t = split_counts(profile.r_t);
  const int tile_h = profile.tile_height();
  const int tile_w = profile.tile_width();
  const auto& tile_scan = zigzag_scan(tile_h, tile_w);

  if (rx.structure.has_value() &&
      rx.structure->size() != static_cast<std::size_t>(profile.r_s))
    throw std::invalid_argument("decode: structure length differs from profile");

  auto base = detail::structure_base(
      rx.structure.has_value() ? &*rx.structure : nullptr, profile);

  for (int tr = 0; tr < kTextureGridSize; ++tr) {
    for (int tc = 0; tc < kTextureGridSize; ++tc) {
      const auto& block = rx.textures[tr * kTextureGridSize + tc];
      if (!block.has_value())
        throw std::invalid_argument("decode: missing texture block");
      if (block->size() != static_cast<std::size_t>(profile.r_t))
        throw std::invalid_argument("decode: texture length differs from profile");
      std::size_t offset = 0;
      for (int c = 0; c < 3; ++c) {
        Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(tile_h, tile_w);
        for (int i = 1; i <= counts_t[c]; ++i) {
          const auto [row, col] = tile_scan[i];
          coeffs(row, col) = (*block)[offset + i - 1];
        }
        offset += counts_t[c];
        base[c].block(tr * tile_h, tc * tile_w, tile_h, tile_w) += idct2(coeffs);
      }
    }
  }

  ImageBuffer img = ImageBuffer::zeros(profile.width, profile.height);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < profile.height; ++y)
      for (int x = 0; x < profile.width; ++x)
        img.at(c, y, x) = std::clamp(base[c](y, x), -1.0, 1.0);
  return img;
}

// Single-stream baseline codec: the top n_tot full-image coefficients as
// one undivided vector (same channel split and zigzag rules as the
// structure block, without any block partition).
inline std::vector<float> encode_global_stream(const ImageBuffer& img, int n_tot) {
  if (n_tot < 1) throw ProfileError("global stream: budget must be >= 1");
  const auto counts = split_counts(n_tot);
  const auto& scan = zigzag_scan(img.height, img.width);
  for (int c = 0; c < 3; ++c)
    if (counts[c] > static_cast<long>(img.width) * img.height)
      throw ProfileError("global stream: budget exceeds available coefficients");
  std::vector<float> stream;
  stream.reserve(n_tot);
  for (int c = 0; c < 3; ++c) {
    const Eigen::MatrixXd coeffs = dct2(detail::channel_matrix(img, c));
    for (int i = 0; i < counts[c]; ++i) {
      const auto [row, col] = scan[i];
      stream.push_back(static_cast<float>(coeffs(row, col)));
    }
  }
  return stream;
}

// Erased stream positions are expected to be zeroed by the caller.
inline ImageBuffer decode_global_stream(const std::vector<float>& stream,
                                        int width, int height) {
  const auto counts = split_counts(static_cast<int>(stream.size()));
  const auto& scan = zigzag_scan(height, width);
  ImageBuffer img = ImageBuffer::zeros(width, height);
  std::size_t offset = 0;
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(height, width);
    for (int i = 0; i < counts[c]; ++i) {
      const auto [row, col] = scan[i];
      coeffs(row, col) = stream[offset + i];
    }
    offset += counts[c];
    const Eigen::MatrixXd pixels = idct2(coeffs);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        img.at(c, y, x) = std::clamp(pixels(y, x), -1.0, 1.0);
  }
  return img;
}

// Block-exchange seam
// -------------------
// A directory with manifest.json plus one raw little-endian float32 file
// per block (structure.bin, tex_{row}_{col}.bin). This is the plug-in
// point for an external codec: anything that writes the same layout can
// feed blocks into the pipeline.

namespace detail {

inline void write_block_file(const std::filesystem::path& path,
                             const std::vector<float>& data) {
  static_assert(std::endian::native == std::endian::little,
                "block files are little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ManifestError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
}

inline std::vector<float> read_block_file(const std::filesystem::path& path,
                                          std::size_t expected_values) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path.string());
  std::vector<float> data(expected_values);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(expected_values * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != expected_values * sizeof(float))
    throw ManifestError(path.string() + ": payload shorter than declared");
  in.get();
  if (!in.eof()) throw ManifestError(path.string() + ": payload longer than declared");
  return data;
}

}  // namespace detail

inline void export_reception(const ReceptionState& rx, const CodecProfile& profile,
                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["r_s"] = profile.r_s;
  manifest["r_t"] = profile.r_t;
  manifest["grid"] = kTextureGridSize;
  manifest["endianness"] = "little";
  nlohmann::json blocks = nlohmann::json::array();
  if (rx.structure.has_value()) {
    detail::write_block_file(dir / "structure.bin", *rx.structure);
    blocks.push_back({{"file", "structure.bin"},
                      {"kind", "structure"},
                      {"bytes", rx.structure->size() * sizeof(float)}});
  }
  for (int tr = 0; tr < kTextureGridSize; ++tr) {
    for (int tc = 0; tc < kTextureGridSize; ++tc) {
      const auto& block = rx.textures[tr * kTextureGridSize + tc];
      if (!block.has_value()) continue;
      const std::string name =
          "tex_" + std::to_string(tr) + "_" + std::to_string(tc) + ".bin";
      detail::write_block_file(dir / name, *block);
      blocks.push_back({{"file", name},
                        {"kind", "texture"},
                        {"row", tr},
                        {"col", tc},
                        {"bytes", block->size() * sizeof(float)}});
    }
  }
  manifest["blocks"] = std::move(blocks);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw ManifestError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

// Reads a complete block set (structure plus all 16 textures) from a
// manifest directory. Validation failures throw ManifestError.
inline BlockSet import_external_blocks(const std::filesystem::path& dir) {
  const std::filesystem::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw ManifestError("cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(manifest_path.string() + ": " + e.what());
  }

  for (const char* key : {"r_s", "r_t", "grid", "endianness", "blocks"})
    if (!manifest.contains(key))
      throw ManifestError(std::string("manifest: missing field ") + key);
  if (manifest["grid"].get<int>() != kTextureGridSize)
    throw ManifestError("manifest: unsupported grid size");
  if (manifest["endianness"].get<std::string>() != "little")
    throw ManifestError("manifest: unsupported endianness");
  const int r_s = manifest["r_s"].get<int>();
  const int r_t = manifest["r_t"].get<int>();
  if (r_s < 1 || r_t < 1) throw ManifestError("manifest: non-positive block length");

  BlockSet out;
  std::array<bool, kNumTextureBlocks> seen{};
  bool seen_structure = false;
  for (const auto& entry : manifest["blocks"]) {
    const std::string kind = entry.at("kind").get<std::string>();
    const std::string file = entry.at("file").get<std::string>();
    const std::size_t bytes = entry.at("bytes").get<std::size_t>();
    const int declared = kind == "structure" ? r_s : r_t;
    if (bytes != static_cast<std::size_t>(declared) * sizeof(float))
      throw ManifestError(file + ": byte length does not match declared r");
    if (kind == "structure") {
      if (seen_structure) throw ManifestError("manifest: duplicate structure block");
      seen_structure = true;
      out.structure = detail::read_block_file(dir / file, r_s);
    } else if (kind == "texture") {
      const int row = entry.at("row").get<int>();
      const int col = entry.at("col").get<int>();
      if (row < 0 || row >= kTextureGridSize || col < 0 || col >= kTextureGridSize)
        throw ManifestError(file + ": grid cell out of range");
      const int idx = row * kTextureGridSize + col;
      if (seen[idx]) throw ManifestError(file + ": duplicate grid cell");
      seen[idx] = true;
      out.textures[idx] = detail::read_block_file(dir / file, r_t);
    } else {
      throw ManifestError(file + ": unknown block kind");
    }
  }
  if (!seen_structure) throw ManifestError("manifest: structure block missing");
  for (bool s : seen)
    if (!s) throw ManifestError("manifest: incomplete texture grid");

  out.scale_meta.reserve(1 + kNumTextureBlocks);
  out.scale_meta.push_back(detail::block_scale(out.structure));
  for (const auto& t : out.textures) out.scale_meta.push_back(detail::block_scale(t));
  return out;
}

}  // namespace uavsem
