#include <gtest/gtest.h>

#include <optional>
#include <set>

#include "bwgen/enumerate.hpp"
#include "bwgen/scene.hpp"

using namespace bwgen;

namespace {

// Extent of pixels that differ between two images, or nullopt.
std::optional<BBox> diff_extent(const Image& a, const Image& b) {
  std::optional<BBox> box;
  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      if (a.pixel(x, y) == b.pixel(x, y)) continue;
      if (!box) {
        box = BBox{x, y, x + 1, y + 1};
      } else {
        box->x1 = std::min(box->x1, x);
        box->y1 = std::min(box->y1, y);
        box->x2 = std::max(box->x2, x + 1);
        box->y2 = std::max(box->y2, y + 1);
      }
    }
  }
  return box;
}

}  // namespace

TEST(Layout, SeparateStacksCentered) {
  const auto catalog = BlockCatalog::make_default(3);
  const auto g = layout(WorldState({{0}, {1}, {2}}, 0), catalog);
  const int centers[] = {50, 150, 250};
  for (int b = 0; b < 3; ++b) {
    const BBox& box = g.blocks[b].bbox;
    EXPECT_EQ(box.x1 + box.x2, 2 * centers[b]) << b;
    EXPECT_EQ(box.y2, kFloorY);
  }
  EXPECT_EQ(g.blocks[0].bbox, (BBox{30, 150, 70, 190}));  // large cube
  EXPECT_EQ(g.blocks[1].bbox, (BBox{134, 150, 166, 190}));  // large cylinder, 32 wide
  EXPECT_EQ(g.blocks[2].bbox, (BBox{236, 162, 264, 190}));  // small cube
}

TEST(Layout, StackedContactAndSharedCenter) {
  const auto catalog = BlockCatalog::make_default(4);
  const auto g = layout(WorldState({{}, {3, 0, 2, 1}, {}}, 0), catalog);
  const Stack order{3, 0, 2, 1};
  for (std::size_t i = 1; i < order.size(); ++i) {
    const BBox& lower = g.blocks[order[i - 1]].bbox;
    const BBox& upper = g.blocks[order[i]].bbox;
    EXPECT_EQ(upper.y2, lower.y1);
    EXPECT_LE(std::abs((upper.x1 + upper.x2) - (lower.x1 + lower.x2)), 1);
    EXPECT_EQ(g.blocks[order[i]].draw_order, g.blocks[order[i - 1]].draw_order + 1);
  }
}

TEST(Layout, DeterministicWithJitter) {
  const auto catalog = BlockCatalog::make_default(4);
  const WorldState s = unrank(1234, 4, 3);
  EXPECT_EQ(layout(s, catalog, 9), layout(s, catalog, 9));
  EXPECT_EQ(rasterize(layout(s, catalog, 9)), rasterize(layout(s, catalog, 9)));
  const auto plain = layout(s, catalog);
  const auto jittered = layout(s, catalog, 9);
  for (std::size_t b = 0; b < 4; ++b) {
    const int shift = jittered.blocks[b].bbox.x1 - plain.blocks[b].bbox.x1;
    EXPECT_LE(std::abs(shift), kMaxJitter);
    EXPECT_EQ(jittered.blocks[b].bbox.y1, plain.blocks[b].bbox.y1);
  }
}

TEST(Layout, JitterStaysInRange) {
  std::set<int> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    for (int d : stack_jitter(3, seed)) {
      EXPECT_GE(d, -kMaxJitter);
      EXPECT_LE(d, kMaxJitter);
      seen.insert(d);
    }
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(stack_jitter(3, std::nullopt), std::vector<int>(3, 0));
}

TEST(Layout, CanvasOverflow) {
  // Too many stacks for the width.
  try {
    (void)layout(unrank(0, 2, 9), BlockCatalog::make_default(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CanvasOverflow);
  }
  EXPECT_THROW(check_renderable(8, BlockCatalog::make_default(4), false), Error);
  EXPECT_THROW(check_renderable(7, BlockCatalog::make_default(4), true), Error);
  EXPECT_NO_THROW(check_renderable(7, BlockCatalog::make_default(4), false));
  EXPECT_NO_THROW(check_renderable(6, BlockCatalog::make_default(4), true));
}

TEST(Rasterize, EmptySceneIsBackground) {
  const Image img = rasterize(layout(WorldState::empty(3), BlockCatalog{}));
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) ASSERT_EQ(img.pixel(x, y), kBackground);
}

TEST(Rasterize, UnoccludedBlocksTouchAllBboxEdges) {
  const auto catalog = BlockCatalog::make_default(4);
  for (StateRank r = 0; r < count_states(4, 3); r += 37) {
    const WorldState s = unrank(r, 4, 3);
    const auto g = layout(s, catalog);
    const Image img = rasterize(g);
    for (const Stack& st : s.stacks()) {
      if (st.empty()) continue;
      const BBox& box = g.blocks[st.back()].bbox;
      bool top = false, bottom = false, left = false, right = false;
      for (int y = box.y1; y < box.y2; ++y) {
        for (int x = box.x1; x < box.x2; ++x) {
          if (img.pixel(x, y) == kBackground) continue;
          top |= y == box.y1;
          bottom |= y == box.y2 - 1;
          left |= x == box.x1;
          right |= x == box.x2 - 1;
        }
      }
      EXPECT_TRUE(top && bottom && left && right) << "rank " << r;
    }
  }
}

TEST(Rasterize, MaterialToggleIsLocal) {
  const auto catalog = BlockCatalog::make_default(3);
  const WorldState rubber({{0, 1}, {2}, {}}, 0);
  for (BlockId b = 0; b < 3; ++b) {
    const WorldState metal(rubber.stacks(), std::uint64_t{1} << b);
    const auto g = layout(rubber, catalog);
    const auto diff = diff_extent(rasterize(g), rasterize(layout(metal, catalog)));
    ASSERT_TRUE(diff);
    const BBox& box = g.blocks[b].bbox;
    EXPECT_GE(diff->x1, box.x1);
    EXPECT_GE(diff->y1, box.y1);
    EXPECT_LE(diff->x2, box.x2);
    EXPECT_LE(diff->y2, box.y2);
  }
}

TEST(Rasterize, HighlightColour) {
  EXPECT_EQ(highlight(Rgb{173, 35, 35}), (Rgb{214, 145, 145}));
}

TEST(Rasterize, BboxEqualsPaintedExtentForEveryThreeThreeState) {
  const auto catalog = BlockCatalog::make_default(3);
  for (StateRank r = 0; r < count_states(3, 3); ++r) {
    const auto g = layout(unrank(r, 3, 3), catalog);
    const Image full = rasterize(g);
    for (BlockId b = 0; b < 3; ++b) {
      const auto extent = diff_extent(full, rasterize(g, b));
      ASSERT_TRUE(extent);
      ASSERT_EQ(*extent, g.blocks[b].bbox) << "rank " << r << " block " << b;
    }
  }
}

TEST(Patches, IdentityForExact32Box) {
  Image img = blank_image();
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = std::uint8_t(i * 31 % 251);
  const BBox box{10, 20, 42, 52};
  const Patch p = extract_patch(img, box);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      for (int c = 0; c < 3; ++c) ASSERT_EQ(p.pixels[(y * 32 + x) * 3 + c], img.at(10 + x, 20 + y)[c]);
  EXPECT_EQ(p.bbox, (std::array<float, 4>{10, 20, 42, 52}));
}

TEST(Patches, NearestNeighborSampling) {
  Image img = blank_image();
  for (int x = 0; x < 64; ++x) img.at(x, 0)[0] = std::uint8_t(x);
  const Patch p = extract_patch(img, {0, 0, 64, 1});
  for (int x = 0; x < 32; ++x) EXPECT_EQ(p.pixels[x * 3], 2 * x);
  // Every row samples source row 0 for a one-pixel-high box.
  EXPECT_EQ(p.pixels[(31 * 32 + 5) * 3], 10);
}

TEST(Patches, OnePerBlockWithFixedSize) {
  const auto catalog = BlockCatalog::make_default(4);
  const auto g = layout(unrank(999, 4, 3), catalog);
  const auto patches = extract_patches(rasterize(g), g);
  ASSERT_EQ(patches.size(), 4u);
  for (std::size_t b = 0; b < 4; ++b) {
    EXPECT_EQ(patches[b].pixels.size(), 3072u);
    EXPECT_EQ(patches[b].bbox[0], float(g.blocks[b].bbox.x1));
    EXPECT_EQ(patches[b].bbox[3], float(g.blocks[b].bbox.y2));
  }
}

TEST(Ppm, Header) {
  const std::string ppm = to_ppm(blank_image());
  EXPECT_EQ(ppm.substr(0, 15), "P6\n300 200\n255\n");
  EXPECT_EQ(ppm.size(), 15u + 300 * 200 * 3);
}

TEST(Catalog, UniquenessEnforced) {
  EXPECT_THROW(BlockCatalog({{0, Shape::Cube, SizeClass::Large}, {0, Shape::Cube, SizeClass::Small}}), Error);
  EXPECT_THROW(BlockCatalog({{0, Shape::Cube, SizeClass::Large}, {1, Shape::Cube, SizeClass::Large}}), Error);
  EXPECT_THROW(BlockCatalog({{8, Shape::Cube, SizeClass::Large}}), Error);
  EXPECT_THROW((void)BlockCatalog::make_default(5), Error);
  EXPECT_EQ(BlockCatalog::make_default(4).size(), 4u);
}
