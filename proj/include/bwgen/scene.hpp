#pragma once

// Flat-shaded procedural renderer: integer-only layout and rasterization,
// exact bounding boxes, and nearest-neighbor object patches.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bwgen/catalog.hpp"
#include "bwgen/core.hpp"
#include "bwgen/error.hpp"
#include "bwgen/rng.hpp"

namespace bwgen {

inline constexpr int kImageWidth = 300;
inline constexpr int kImageHeight = 200;
inline constexpr int kFloorY = 190;
inline constexpr int kTopMargin = 4;
inline constexpr int kMaxJitter = 3;
inline constexpr int kPatchSize = 32;
inline constexpr std::size_t kPatchBytes = kPatchSize * kPatchSize * 3;
inline constexpr Rgb kBackground{64, 64, 64};

/// Half-open pixel box [x1, x2) x [y1, y2), top-left origin.
struct BBox {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  bool contains(int x, int y) const { return x >= x1 && x < x2 && y >= y1 && y < y2; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

struct BlockGeometry {
  Shape shape = Shape::Cube;
  Rgb fill;
  bool metal = false;
  int side = 0;
  BBox bbox;
  std::size_t draw_order = 0;
  friend bool operator==(const BlockGeometry&, const BlockGeometry&) = default;
};

struct SceneGeometry {
  std::vector<BlockGeometry> blocks;  // indexed by BlockId
  friend bool operator==(const SceneGeometry&, const SceneGeometry&) = default;
};

struct Image {
  int width = kImageWidth;
  int height = kImageHeight;
  std::vector<std::uint8_t> rgb = std::vector<std::uint8_t>(std::size_t(kImageWidth) * kImageHeight * 3);

  std::uint8_t* at(int x, int y) { return rgb.data() + (std::size_t(y) * width + x) * 3; }
  const std::uint8_t* at(int x, int y) const { return rgb.data() + (std::size_t(y) * width + x) * 3; }
  Rgb pixel(int x, int y) const {
    const auto* p = at(x, y);
    return {p[0], p[1], p[2]};
  }
  friend bool operator==(const Image&, const Image&) = default;
};

struct Patch {
  std::array<std::uint8_t, kPatchBytes> pixels{};
  std::array<float, 4> bbox{};  // x1, y1, x2, y2
};

constexpr int footprint_width(Shape shape, int side) {
  return shape == Shape::Cube ? side : (8 * side + 5) / 10;  // round(0.8 * side)
}

/// round((j + 0.5) * W / k), halves rounded up.
constexpr int stack_center_x(std::size_t j, std::size_t k) {
  return static_cast<int>(((2 * j + 1) * kImageWidth + k) / (2 * k));
}

/// Throws CanvasOverflow unless every state of the environment fits:
/// the tallest possible stack holds every block, and the widest footprint
/// must fit in the first and last columns at maximal jitter.
inline void check_renderable(std::size_t k, const BlockCatalog& catalog, bool jitter) {
  int total_height = 0;
  int widest = 0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    total_height += catalog.side(i);
    widest = std::max(widest, footprint_width(catalog.block(i).shape, catalog.side(i)));
  }
  if (total_height > kFloorY - kTopMargin) {
    throw Error(ErrorKind::CanvasOverflow, "stack of " + std::to_string(catalog.size()) +
                                               " blocks exceeds the canvas height");
  }
  const int slack = jitter ? kMaxJitter : 0;
  for (std::size_t j = 0; j < k; ++j) {
    const int cx = stack_center_x(j, k);
    if (cx - slack - widest / 2 < 0 || cx + slack - widest / 2 + widest > kImageWidth) {
      throw Error(ErrorKind::CanvasOverflow, std::to_string(k) + " stacks do not fit the canvas width");
    }
    if (j + 1 < k && stack_center_x(j + 1, k) - cx - 2 * slack < widest) {
      throw Error(ErrorKind::CanvasOverflow, std::to_string(k) + " stacks would overlap");
    }
  }
}

/// Per-stack horizontal offsets in [-3, 3], one draw per stack in order.
inline std::vector<int> stack_jitter(std::size_t k, std::optional<std::uint64_t> seed) {
  std::vector<int> delta(k, 0);
  if (!seed) return delta;
  Xoshiro256 rng(*seed);
  for (auto& d : delta) d = static_cast<int>(rng.below(2 * kMaxJitter + 1)) - kMaxJitter;
  return delta;
}

inline SceneGeometry layout(const WorldState& s, const BlockCatalog& catalog,
                            std::optional<std::uint64_t> jitter_seed = std::nullopt) {
  if (catalog.size() != s.num_blocks()) {
    throw Error(ErrorKind::InvalidArgument, "catalog has " + std::to_string(catalog.size()) +
                                                " blocks, state has " + std::to_string(s.num_blocks()));
  }
  const std::size_t k = s.num_stacks();
  check_renderable(k, catalog, jitter_seed.has_value());
  const std::vector<int> delta = stack_jitter(k, jitter_seed);

  SceneGeometry g;
  g.blocks.resize(s.num_blocks());
  std::size_t order = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const int cx = stack_center_x(j, k) + delta[j];
    int floor = kFloorY;
    for (BlockId b : s.stack(j)) {
      const BlockSpec& spec = catalog.block(b);
      const int side = side_length(spec.size);
      const int w = footprint_width(spec.shape, side);
      BlockGeometry& bg = g.blocks[b];
      bg.shape = spec.shape;
      bg.fill = catalog.color(b);
      bg.metal = s.is_metal(b);
      bg.side = side;
      bg.bbox = {cx - w / 2, floor - side, cx - w / 2 + w, floor};
      bg.draw_order = order++;
      floor -= side;
    }
  }
  return g;
}

/// Whether pixel (x, y) is covered by the block's silhouette. Cylinders are
/// the ellipse inscribed in the footprint, tested at pixel centers in
/// doubled integer coordinates.
inline bool covers(const BlockGeometry& b, int x, int y) {
  if (!b.bbox.contains(x, y)) return false;
  if (b.shape == Shape::Cube) return true;
  const std::int64_t w = b.bbox.width();
  const std::int64_t h = b.bbox.height();
  const std::int64_t dx = 2 * std::int64_t(x - b.bbox.x1) + 1 - w;
  const std::int64_t dy = 2 * std::int64_t(y - b.bbox.y1) + 1 - h;
  return dx * dx * h * h + dy * dy * w * w <= w * w * h * h;
}

inline bool in_highlight(const BlockGeometry& b, int x) {
  const int start = b.bbox.x1 + b.bbox.width() / 4;
  const int width = std::max(2, b.side / 8);
  return x >= start && x < start + width;
}

constexpr Rgb highlight(Rgb c) {
  return {static_cast<std::uint8_t>((c.r + 255) / 2), static_cast<std::uint8_t>((c.g + 255) / 2),
          static_cast<std::uint8_t>((c.b + 255) / 2)};
}

inline void paint_block(Image& img, const BlockGeometry& b) {
  const Rgb stripe = highlight(b.fill);
  for (int y = std::max(0, b.bbox.y1); y < std::min(img.height, b.bbox.y2); ++y) {
    for (int x = std::max(0, b.bbox.x1); x < std::min(img.width, b.bbox.x2); ++x) {
      if (!covers(b, x, y)) continue;
      const Rgb c = b.metal && in_highlight(b, x) ? stripe : b.fill;
      auto* p = img.at(x, y);
      p[0] = c.r;
      p[1] = c.g;
      p[2] = c.b;
    }
  }
}

inline Image blank_image() {
  Image img;
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
    img.rgb[i] = kBackground.r;
    img.rgb[i + 1] = kBackground.g;
    img.rgb[i + 2] = kBackground.b;
  }
  return img;
}

/// Blocks painted in draw order, optionally leaving one out.
inline Image rasterize(const SceneGeometry& g, std::optional<BlockId> omit = std::nullopt) {
  Image img = blank_image();
  std::vector<const BlockGeometry*> order(g.blocks.size());
  for (std::size_t b = 0; b < g.blocks.size(); ++b) order[g.blocks[b].draw_order] = &g.blocks[b];
  for (const BlockGeometry* b : order) {
    if (omit && b == &g.blocks[*omit]) continue;
    paint_block(img, *b);
  }
  return img;
}

inline Patch extract_patch(const Image& img, const BBox& box) {
  Patch p;
  const int w = box.width();
  const int h = box.height();
  for (int dy = 0; dy < kPatchSize; ++dy) {
    const int sy = box.y1 + dy * h / kPatchSize;
    for (int dx = 0; dx < kPatchSize; ++dx) {
      const int sx = box.x1 + dx * w / kPatchSize;
      const auto* src = img.at(sx, sy);
      auto* dst = p.pixels.data() + (std::size_t(dy) * kPatchSize + dx) * 3;
      dst[0] = src[0];
      dst[1] = src[1];
      dst[2] = src[2];
    }
  }
  p.bbox = {float(box.x1), float(box.y1), float(box.x2), float(box.y2)};
  return p;
}

/// One patch per block, in BlockId order. Neighbouring objects are not masked out.
inline std::vector<Patch> extract_patches(const Image& img, const SceneGeometry& g) {
  std::vector<Patch> out;
  out.reserve(g.blocks.size());
  for (const auto& b : g.blocks) out.push_back(extract_patch(img, b.bbox));
  return out;
}

/// Binary PPM (P6).
inline void write_ppm(std::ostream& os, const Image& img) {
  os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

inline std::string to_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + ' ' + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

}  // namespace bwgen
