#pragma once

// Visual attributes per block. These never enter state identity.

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bwgen/error.hpp"

namespace bwgen {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

enum class Shape : std::uint8_t { Cube = 0, Cylinder = 1 };
enum class SizeClass : std::uint8_t { Large = 0, Small = 1 };

inline constexpr std::array<Shape, 2> kShapes{Shape::Cube, Shape::Cylinder};
inline constexpr std::array<SizeClass, 2> kSizes{SizeClass::Large, SizeClass::Small};

constexpr int side_length(SizeClass size) { return size == SizeClass::Large ? 40 : 28; }

constexpr std::string_view to_string(Shape s) { return s == Shape::Cube ? "cube" : "cylinder"; }
constexpr std::string_view to_string(SizeClass s) { return s == SizeClass::Large ? "large" : "small"; }

struct NamedColor {
  std::string name;
  Rgb rgb;
  friend bool operator==(const NamedColor&, const NamedColor&) = default;
};

inline std::vector<NamedColor> default_palette() {
  return {
      {"gray", {87, 87, 87}},     {"red", {173, 35, 35}},    {"blue", {42, 75, 215}},
      {"green", {29, 105, 20}},   {"brown", {129, 74, 25}},  {"purple", {129, 38, 192}},
      {"cyan", {41, 208, 208}},   {"yellow", {255, 238, 51}},
  };
}

struct BlockSpec {
  std::size_t color_index = 0;
  Shape shape = Shape::Cube;
  SizeClass size = SizeClass::Large;
  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

class BlockCatalog {
 public:
  BlockCatalog() : palette_(default_palette()) {}

  BlockCatalog(std::vector<BlockSpec> blocks, std::vector<NamedColor> palette = default_palette())
      : blocks_(std::move(blocks)), palette_(std::move(palette)) {
    validate();
  }

  /// Block i gets palette color i and the i-th (shape, size) pair in the
  /// order (cube, large), (cylinder, large), (cube, small), (cylinder, small).
  static BlockCatalog make_default(std::size_t n) {
    const auto palette = default_palette();
    if (n > palette.size() || n > kShapes.size() * kSizes.size()) {
      throw Error(ErrorKind::InvalidCatalog,
                  "default catalog supports at most " + std::to_string(kShapes.size() * kSizes.size()) +
                      " blocks");
    }
    std::vector<BlockSpec> blocks;
    for (std::size_t i = 0; i < n; ++i) {
      blocks.push_back({i, kShapes[i % kShapes.size()], kSizes[i / kShapes.size()]});
    }
    return BlockCatalog(std::move(blocks), palette);
  }

  std::size_t size() const noexcept { return blocks_.size(); }
  const BlockSpec& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<BlockSpec>& blocks() const noexcept { return blocks_; }
  const std::vector<NamedColor>& palette() const noexcept { return palette_; }
  Rgb color(std::size_t i) const { return palette_.at(blocks_.at(i).color_index).rgb; }
  const std::string& color_name(std::size_t i) const { return palette_.at(blocks_.at(i).color_index).name; }
  int side(std::size_t i) const { return side_length(blocks_.at(i).size); }

  friend bool operator==(const BlockCatalog&, const BlockCatalog&) = default;

 private:
  void validate() const {
    std::set<std::size_t> colors;
    std::set<std::pair<Shape, SizeClass>> kinds;
    for (const auto& b : blocks_) {
      if (b.color_index >= palette_.size()) throw Error(ErrorKind::InvalidCatalog, "color index outside palette");
      if (!colors.insert(b.color_index).second) throw Error(ErrorKind::InvalidCatalog, "two blocks share a color");
      if (!kinds.insert({b.shape, b.size}).second) {
        throw Error(ErrorKind::InvalidCatalog, "two blocks share shape and size");
      }
    }
  }

  std::vector<BlockSpec> blocks_;
  std::vector<NamedColor> palette_;
};

}  // namespace bwgen
