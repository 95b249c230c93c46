#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <set>
#include <tuple>

#include "bwgen/dataset.hpp"
#include "oracles.hpp"

using namespace bwgen;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bwgen_dataset_tests_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct ThreeThree : ::testing::Test {
  static void SetUpTestSuite() {
    path = scratch("three_three.zip");
    ArchiveOptions opts;
    opts.workers = 2;
    write_archive(path, 3, 3, BlockCatalog::make_default(3), opts);
  }
  static inline fs::path path;
};

}  // namespace

TEST_F(ThreeThree, CountsAndEntrySizes) {
  const Archive a = read_archive(path);
  EXPECT_EQ(a.state_count(), 480u);
  EXPECT_EQ(a.transition_count(), 2592u);
  const auto& t = a.tables();
  EXPECT_EQ(t.states.size(), 480u * 8);
  EXPECT_EQ(t.transitions.size(), 2592u * 24);
  EXPECT_EQ(t.bboxes.size(), 480u * 3 * 16);
  EXPECT_EQ(t.patches.size(), 480u * 3 * 3072);
  EXPECT_TRUE(t.images.empty());
  EXPECT_FALSE(a.manifest().shard);
}

TEST_F(ThreeThree, EntryOrder) {
  const auto zip = zip::Reader::open(path);
  const std::vector<std::string> want{"manifest.json", "states.u64", "transitions.u64", "bboxes.f32", "patches.u8"};
  EXPECT_EQ(zip.names(), want);
}

TEST_F(ThreeThree, StatesAscendingAndComplete) {
  const Archive a = read_archive(path);
  for (std::uint64_t i = 0; i < a.state_count(); ++i) ASSERT_EQ(a.state(i), i);
}

TEST_F(ThreeThree, TransitionRowsReplay) {
  const Archive a = read_archive(path);
  std::set<std::tuple<StateRank, std::uint64_t, StateRank>> rows;
  for (std::uint64_t i = 0; i < a.transition_count(); ++i) {
    const TransitionRow row = a.transition(i);
    const WorldState src = unrank(row.src, 3, 3);
    const Action act = decode_action(row.action_code, 3, 3);
    ASSERT_TRUE(is_applicable(src, act));
    ASSERT_EQ(rank(apply(src, act)), row.dst);
    // Replay through the independent successor function as well.
    const auto succ = oracle::successors(oracle::from_world(src));
    ASSERT_TRUE(std::find(succ.begin(), succ.end(), oracle::from_world(unrank(row.dst, 3, 3))) != succ.end());
    rows.insert({row.src, row.action_code, row.dst});
  }
  EXPECT_EQ(rows.size(), 2592u);
}

TEST_F(ThreeThree, BboxesAndPatchesMatchRendering) {
  const Archive a = read_archive(path);
  const auto catalog = BlockCatalog::make_default(3);
  for (std::uint64_t i = 0; i < a.state_count(); i += 17) {
    const auto g = layout(unrank(a.state(i), 3, 3), catalog);
    const auto patches = extract_patches(rasterize(g), g);
    for (std::size_t b = 0; b < 3; ++b) {
      const auto box = a.bbox(i, b);
      EXPECT_EQ(box[0], float(g.blocks[b].bbox.x1));
      EXPECT_EQ(box[1], float(g.blocks[b].bbox.y1));
      EXPECT_EQ(box[2], float(g.blocks[b].bbox.x2));
      EXPECT_EQ(box[3], float(g.blocks[b].bbox.y2));
      const auto p = a.patch(i, b);
      ASSERT_TRUE(std::equal(p.begin(), p.end(), patches[b].pixels.begin()));
    }
  }
}

TEST_F(ThreeThree, ManifestRoundTrip) {
  const Archive a = read_archive(path);
  const ArchiveManifest& m = a.manifest();
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
  const json j = to_json(m);
  EXPECT_EQ(j.at("formatVersion"), 1);
  EXPECT_EQ(j.at("actionCodeBase"), 5);
  EXPECT_EQ(j.at("patchSize"), 32);
  EXPECT_FALSE(j.contains("shard"));
  EXPECT_EQ(m.catalog, BlockCatalog::make_default(3));
}

TEST_F(ThreeThree, WorkerCountDoesNotChangeBytes) {
  const fs::path other = scratch("three_three_one_worker.zip");
  ArchiveOptions opts;
  opts.workers = 1;
  write_archive(other, 3, 3, BlockCatalog::make_default(3), opts);
  EXPECT_EQ(slurp(other), slurp(path));
}

TEST(Archive, TruncatedPatchesRejected) {
  const fs::path p = scratch("truncated.zip");
  const auto catalog = BlockCatalog::make_default(2);
  write_archive(p, 2, 2, catalog);
  const Archive good = read_archive(p);
  ArchiveTables t = good.tables();
  t.patches.pop_back();
  write_entries(p, good.manifest(), t);
  try {
    (void)read_archive(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CorruptArchive);
  }
}

TEST(Archive, CountsMustMatchClosedForm) {
  const fs::path p = scratch("bad_counts.zip");
  write_archive(p, 2, 2, BlockCatalog::make_default(2));
  const Archive good = read_archive(p);
  ArchiveTables t = good.tables();
  ArchiveManifest m = good.manifest();
  // Drop the last state consistently everywhere so only the closed form catches it.
  const WorldState last = unrank(m.state_count - 1, 2, 2);
  const std::size_t drop = applicable_actions(last).size();
  m.state_count -= 1;
  m.transition_count -= drop;
  t.states.resize(t.states.size() - 8);
  t.transitions.resize(t.transitions.size() - 24 * drop);
  t.bboxes.resize(t.bboxes.size() - 2 * 16);
  t.patches.resize(t.patches.size() - 2 * kPatchBytes);
  write_entries(p, m, t);
  EXPECT_THROW((void)read_archive(p), Error);
}

TEST(Archive, UnsupportedVersion) {
  const fs::path p = scratch("future.zip");
  write_archive(p, 1, 1, BlockCatalog::make_default(1));
  const Archive good = read_archive(p);
  ArchiveManifest m = good.manifest();
  m.format_version = 2;
  write_entries(p, m, good.tables());
  try {
    (void)read_archive(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedVersion);
  }
}

TEST(Archive, CorruptBytesRejected) {
  const fs::path p = scratch("flipped.zip");
  write_archive(p, 2, 2, BlockCatalog::make_default(2));
  std::string bytes = slurp(p);
  bytes[bytes.size() / 2] ^= 0x5a;
  std::ofstream(p, std::ios::binary | std::ios::trunc) << bytes;
  try {
    (void)read_archive(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CorruptArchive);
  }
  EXPECT_THROW((void)read_archive(scratch("does_not_exist.zip")), Error);
}

TEST(Archive, ImagesStoredPerState) {
  const fs::path p = scratch("images.zip");
  ArchiveOptions opts;
  opts.images = true;
  opts.jitter_seed = 5;
  write_archive(p, 2, 2, BlockCatalog::make_default(2), opts);
  const Archive a = read_archive(p);
  ASSERT_TRUE(a.manifest().images);
  EXPECT_EQ(a.manifest().jitter_seed, 5u);
  const auto catalog = BlockCatalog::make_default(2);
  for (std::uint64_t i = 0; i < a.state_count(); ++i) {
    EXPECT_EQ(a.image(i), to_ppm(rasterize(layout(unrank(i, 2, 2), catalog, 5))));
  }
  EXPECT_TRUE(zip::Reader::open(p).contains("images/0.ppm"));
}

TEST(Archive, CatalogMustMatch) {
  EXPECT_THROW(write_archive(scratch("x.zip"), 3, 3, BlockCatalog::make_default(2)), Error);
}

TEST(Shards, MergeIsByteIdentical) {
  const auto catalog = BlockCatalog::make_default(3);
  const fs::path whole = scratch("whole.zip");
  write_archive(whole, 3, 3, catalog);
  std::vector<fs::path> parts;
  std::uint64_t states = 0;
  for (std::uint64_t i = 0; i < 3; ++i) {
    parts.push_back(scratch("part" + std::to_string(i) + ".zip"));
    ArchiveOptions opts;
    opts.shard = ShardSpec{i, 3};
    const ArchiveManifest m = write_archive(parts.back(), 3, 3, catalog, opts);
    EXPECT_EQ(m.state_count, 160u);
    EXPECT_EQ(m.first_rank, states);
    states += m.state_count;
  }
  const fs::path merged = scratch("merged.zip");
  // Argument order does not matter.
  merge_shards({parts[2], parts[0], parts[1]}, merged);
  EXPECT_EQ(slurp(merged), slurp(whole));

  try {
    merge_shards({parts[0], parts[0], parts[1]}, scratch("m2.zip"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShardMismatch);
  }
  try {
    merge_shards({parts[0], parts[2]}, scratch("m3.zip"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingShard);
  }
  try {
    merge_shards({whole}, scratch("m4.zip"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShardMismatch);
  }
}

TEST(Shards, IncompatibleShardsRejected) {
  const fs::path a = scratch("jit0.zip"), b = scratch("jit1.zip");
  ArchiveOptions opts;
  opts.shard = ShardSpec{0, 2};
  write_archive(a, 2, 2, BlockCatalog::make_default(2), opts);
  opts.shard = ShardSpec{1, 2};
  opts.jitter_seed = 1;
  write_archive(b, 2, 2, BlockCatalog::make_default(2), opts);
  EXPECT_THROW(merge_shards({a, b}, scratch("jit.zip")), Error);
}

TEST(Determinism, RepeatedWritesIdentical) {
  const fs::path a = scratch("det_a.zip"), b = scratch("det_b.zip");
  ArchiveOptions opts;
  opts.jitter_seed = 77;
  write_archive(a, 3, 2, BlockCatalog::make_default(3), opts);
  write_archive(b, 3, 2, BlockCatalog::make_default(3), opts);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(fs::exists(fs::path(a) += ".tmp"));
}

TEST(Zip, RoundTripAndCrc) {
  zip::Writer w;
  w.add("a.txt", "hello");
  w.add("empty", "");
  w.add("big", std::string(100000, 'x'));
  const zip::Bytes bytes = std::move(w).finish();
  const zip::Reader r(bytes);
  EXPECT_EQ(r.read("a.txt"), "hello");
  EXPECT_EQ(r.read("empty"), "");
  EXPECT_EQ(r.read("big"), std::string(100000, 'x'));
  EXPECT_EQ(r.size("big"), 100000u);
  EXPECT_THROW((void)r.read("missing"), Error);
  EXPECT_THROW(zip::Reader(zip::Bytes(bytes.begin(), bytes.begin() + 10)), Error);
}
