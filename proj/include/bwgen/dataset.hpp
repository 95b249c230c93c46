#pragma once

// Dataset archive: a zip holding manifest.json plus raw little-endian,
// row-major tables.
//
//   states.u64       [S]            state ranks, ascending
//   transitions.u64  [T, 3]         (src rank, action code, dst rank)
//   bboxes.f32       [S, n, 4]      x1, y1, x2, y2
//   patches.u8       [S, n, 32, 32, 3]
//   images/<rank>.ppm               optional full renders (P6)

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bwgen/catalog.hpp"
#include "bwgen/core.hpp"
#include "bwgen/enumerate.hpp"
#include "bwgen/error.hpp"
#include "bwgen/io.hpp"
#include "bwgen/scene.hpp"
#include "bwgen/zip.hpp"

namespace bwgen {

inline constexpr int kArchiveFormatVersion = 1;

struct ArchiveOptions {
  bool images = false;
  std::optional<ShardSpec> shard;
  std::optional<std::uint64_t> jitter_seed;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct ArchiveManifest {
  int format_version = kArchiveFormatVersion;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t state_count = 0;
  std::uint64_t transition_count = 0;
  BlockCatalog catalog;
  int image_width = kImageWidth;
  int image_height = kImageHeight;
  int patch_size = kPatchSize;
  std::optional<std::uint64_t> jitter_seed;
  std::optional<ShardSpec> shard;  // absent for a complete archive
  std::uint64_t first_rank = 0;
  bool images = false;

  std::uint64_t action_code_base() const { return k + 2; }
  friend bool operator==(const ArchiveManifest&, const ArchiveManifest&) = default;
};

struct TransitionRow {
  StateRank src = 0;
  std::uint64_t action_code = 0;
  StateRank dst = 0;
};

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
inline void put_f32(std::string& out, float f) {
  const auto v = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
inline std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}
inline float get_f32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
  return std::bit_cast<float>(v);
}

[[noreturn]] inline void corrupt(const std::string& what) { throw Error(ErrorKind::CorruptArchive, what); }

inline std::string image_entry(StateRank r) { return "images/" + std::to_string(r) + ".ppm"; }

}  // namespace detail

struct EntryShapes {
  std::uint64_t states, transitions, bboxes, patches;
};

inline EntryShapes entry_bytes(const ArchiveManifest& m) {
  return {m.state_count * 8, m.transition_count * 24, m.state_count * m.n * 16, m.state_count * m.n * kPatchBytes};
}

inline json to_json(const ArchiveManifest& m) {
  const std::uint64_t S = m.state_count, T = m.transition_count, n = m.n;
  const std::uint64_t p = static_cast<std::uint64_t>(m.patch_size);
  json j = {
      {"formatVersion", m.format_version},
      {"n", m.n},
      {"k", m.k},
      {"stateCount", S},
      {"transitionCount", T},
      {"catalog", to_json(m.catalog)},
      {"image", {{"width", m.image_width}, {"height", m.image_height}}},
      {"patchSize", m.patch_size},
      {"actionCodeBase", m.action_code_base()},
      {"images", m.images},
      {"entries",
       {{"states.u64", {{"dtype", "<u8"}, {"shape", {S}}}},
        {"transitions.u64", {{"dtype", "<u8"}, {"shape", {T, 3}}}},
        {"bboxes.f32", {{"dtype", "<f4"}, {"shape", {S, n, 4}}}},
        {"patches.u8", {{"dtype", "|u1"}, {"shape", {S, n, p, p, 3}}}}}},
  };
  if (m.jitter_seed) j["jitterSeed"] = *m.jitter_seed;
  if (m.shard) {
    j["shard"] = {{"index", m.shard->index},
                  {"count", m.shard->count},
                  {"firstRank", m.first_rank},
                  {"endRank", m.first_rank + S}};
  }
  return j;
}

inline ArchiveManifest manifest_from_json(const json& j) {
  return parse_guard([&] {
    ArchiveManifest m;
    m.format_version = j.at("formatVersion").get<int>();
    if (m.format_version != kArchiveFormatVersion) {
      throw Error(ErrorKind::UnsupportedVersion, "archive format version " + std::to_string(m.format_version));
    }
    m.n = j.at("n").get<std::size_t>();
    m.k = j.at("k").get<std::size_t>();
    m.state_count = j.at("stateCount").get<std::uint64_t>();
    m.transition_count = j.at("transitionCount").get<std::uint64_t>();
    m.catalog = catalog_from_json(j.at("catalog"));
    m.image_width = j.at("image").at("width").get<int>();
    m.image_height = j.at("image").at("height").get<int>();
    m.patch_size = j.at("patchSize").get<int>();
    m.images = j.at("images").get<bool>();
    if (j.contains("jitterSeed")) m.jitter_seed = j.at("jitterSeed").get<std::uint64_t>();
    if (j.contains("shard")) {
      const json& s = j.at("shard");
      m.shard = ShardSpec{s.at("index").get<std::uint64_t>(), s.at("count").get<std::uint64_t>()};
      m.first_rank = s.at("firstRank").get<std::uint64_t>();
    }
    if (j.at("actionCodeBase").get<std::uint64_t>() != m.action_code_base()) {
      detail::corrupt("actionCodeBase does not equal k + 2");
    }
    return m;
  });
}

/// Raw entry payloads, exactly as stored.
struct ArchiveTables {
  std::string states;
  std::string transitions;
  std::string bboxes;
  std::string patches;
  std::vector<std::pair<StateRank, std::string>> images;  // ascending rank
};

/// Serializes manifest + tables in the fixed entry order and replaces path
/// atomically.
inline void write_entries(const std::filesystem::path& path, const ArchiveManifest& m, const ArchiveTables& t) {
  zip::Writer w;
  w.add("manifest.json", to_json(m).dump(2) + "\n");
  w.add("states.u64", t.states);
  w.add("transitions.u64", t.transitions);
  w.add("bboxes.f32", t.bboxes);
  w.add("patches.u8", t.patches);
  for (const auto& [r, ppm] : t.images) w.add(detail::image_entry(r), ppm);
  const zip::Bytes bytes = std::move(w).finish();

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "rename to " + path.string() + ": " + ec.message());
}

/// Tables for ranks [begin, end): transitions, bboxes, patches, images.
inline ArchiveTables render_tables(std::size_t n, std::size_t k, const BlockCatalog& catalog, RankInterval range,
                                   const ArchiveOptions& opts) {
  ArchiveTables t;
  for (StateRank r = range.begin; r < range.end; ++r) {
    const WorldState s = unrank(r, n, k);
    detail::put_u64(t.states, r);
    for (const Action& a : applicable_actions(s)) {
      detail::put_u64(t.transitions, r);
      detail::put_u64(t.transitions, action_code(a, k));
      detail::put_u64(t.transitions, rank(apply(s, a)));
    }
    const SceneGeometry g = layout(s, catalog, opts.jitter_seed);
    const Image img = rasterize(g);
    for (const Patch& p : extract_patches(img, g)) {
      for (float v : p.bbox) detail::put_f32(t.bboxes, v);
      t.patches.append(reinterpret_cast<const char*>(p.pixels.data()), p.pixels.size());
    }
    if (opts.images) t.images.emplace_back(r, to_ppm(img));
  }
  return t;
}

inline void append(ArchiveTables& into, ArchiveTables&& from) {
  into.states += from.states;
  into.transitions += from.transitions;
  into.bboxes += from.bboxes;
  into.patches += from.patches;
  for (auto& img : from.images) into.images.push_back(std::move(img));
}

inline ArchiveManifest write_archive(const std::filesystem::path& path, std::size_t n, std::size_t k,
                                     const BlockCatalog& catalog, const ArchiveOptions& opts = {}) {
  if (catalog.size() != n) throw Error(ErrorKind::InvalidCatalog, "catalog size does not match block count");
  check_renderable(k, catalog, opts.jitter_seed.has_value());
  const std::uint64_t total = count_states(n, k);
  const std::uint64_t total_transitions = count_transitions(n, k);
  const ShardSpec shard = opts.shard.value_or(ShardSpec{});
  const RankInterval range = shard_interval(total, shard);

  unsigned workers = opts.workers ? opts.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, range.size())));
  std::vector<ArchiveTables> parts(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const RankInterval sub = shard_interval(range.size(), {w, workers});
      pool.emplace_back([&, w, sub] {
        parts[w] = render_tables(n, k, catalog, {range.begin + sub.begin, range.begin + sub.end}, opts);
      });
    }
  }
  ArchiveTables tables;
  for (auto& part : parts) append(tables, std::move(part));

  ArchiveManifest m;
  m.n = n;
  m.k = k;
  m.state_count = range.size();
  m.transition_count = tables.transitions.size() / 24;
  m.catalog = catalog;
  m.jitter_seed = opts.jitter_seed;
  m.images = opts.images;
  if (shard.count > 1) {
    m.shard = shard;
    m.first_rank = range.begin;
  } else if (m.transition_count != total_transitions) {
    detail::corrupt("transition count disagrees with the closed form");
  }
  write_entries(path, m, tables);
  return m;
}

// ---------------------------------------------------------------------------

class Archive {
 public:
  static Archive open(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorKind::IoError, "no such file " + path.string());
    return Archive(zip::Reader::open(path));
  }

  explicit Archive(const zip::Reader& zip) {
    manifest_ = manifest_from_json(parse_guard([&] { return json::parse(zip.read("manifest.json")); }));
    tables_.states = zip.read("states.u64");
    tables_.transitions = zip.read("transitions.u64");
    tables_.bboxes = zip.read("bboxes.f32");
    tables_.patches = zip.read("patches.u8");
    check();
    if (manifest_.images) {
      for (std::uint64_t i = 0; i < state_count(); ++i) {
        const StateRank r = state(i);
        tables_.images.emplace_back(r, zip.read(detail::image_entry(r)));
      }
    }
  }

  const ArchiveManifest& manifest() const { return manifest_; }
  const ArchiveTables& tables() const { return tables_; }

  std::uint64_t state_count() const { return manifest_.state_count; }
  std::uint64_t transition_count() const { return manifest_.transition_count; }

  StateRank state(std::uint64_t i) const { return detail::get_u64(tables_.states.data() + at(i, state_count()) * 8); }

  TransitionRow transition(std::uint64_t i) const {
    const char* p = tables_.transitions.data() + at(i, transition_count()) * 24;
    return {detail::get_u64(p), detail::get_u64(p + 8), detail::get_u64(p + 16)};
  }

  std::array<float, 4> bbox(std::uint64_t state_index, std::size_t block) const {
    const char* p = tables_.bboxes.data() + (at(state_index, state_count()) * manifest_.n + at(block, manifest_.n)) * 16;
    return {detail::get_f32(p), detail::get_f32(p + 4), detail::get_f32(p + 8), detail::get_f32(p + 12)};
  }

  std::span<const std::uint8_t> patch(std::uint64_t state_index, std::size_t block) const {
    const std::size_t off = (at(state_index, state_count()) * manifest_.n + at(block, manifest_.n)) * kPatchBytes;
    return {reinterpret_cast<const std::uint8_t*>(tables_.patches.data()) + off, kPatchBytes};
  }

  const std::string& image(std::uint64_t state_index) const {
    if (!manifest_.images) throw Error(ErrorKind::InvalidArgument, "archive has no images");
    return tables_.images.at(at(state_index, state_count())).second;
  }

 private:
  static std::uint64_t at(std::uint64_t i, std::uint64_t size) {
    if (i >= size) throw Error(ErrorKind::InvalidArgument, "index " + std::to_string(i) + " out of range");
    return i;
  }

  void check() const {
    const ArchiveManifest& m = manifest_;
    if (m.image_width != kImageWidth || m.image_height != kImageHeight || m.patch_size != kPatchSize) {
      detail::corrupt("unsupported image or patch dimensions");
    }
    if (m.catalog.size() != m.n) detail::corrupt("catalog size does not match n");
    const EntryShapes want = entry_bytes(m);
    auto expect = [](const std::string& entry, const char* name, std::uint64_t bytes) {
      if (entry.size() != bytes) {
        detail::corrupt(std::string(name) + " holds " + std::to_string(entry.size()) + " bytes, manifest implies " +
                        std::to_string(bytes));
      }
    };
    expect(tables_.states, "states.u64", want.states);
    expect(tables_.transitions, "transitions.u64", want.transitions);
    expect(tables_.bboxes, "bboxes.f32", want.bboxes);
    expect(tables_.patches, "patches.u8", want.patches);
    if (!m.shard) {
      if (m.state_count != count_states(m.n, m.k) || m.transition_count != count_transitions(m.n, m.k)) {
        detail::corrupt("counts of a complete archive disagree with the closed forms");
      }
    }
  }

  ArchiveManifest manifest_;
  ArchiveTables tables_;
};

inline Archive read_archive(const std::filesystem::path& path) { return Archive::open(path); }

// ---------------------------------------------------------------------------

/// Concatenates shards 0..m-1 into a complete archive, byte-identical to an
/// unsharded write with the same options.
inline ArchiveManifest merge_shards(const std::vector<std::filesystem::path>& paths,
                                    const std::filesystem::path& out) {
  if (paths.empty()) throw Error(ErrorKind::MissingShard, "no shards given");
  std::vector<Archive> shards;
  for (const auto& p : paths) shards.push_back(Archive::open(p));

  const ArchiveManifest& first = shards.front().manifest();
  if (!first.shard) throw Error(ErrorKind::ShardMismatch, paths.front().string() + " is not a shard");
  const std::uint64_t m = first.shard->count;
  std::vector<const Archive*> by_index(m, nullptr);
  for (std::size_t i = 0; i < shards.size(); ++i) {
    const ArchiveManifest& s = shards[i].manifest();
    if (!s.shard || s.shard->count != m || s.n != first.n || s.k != first.k || !(s.catalog == first.catalog) ||
        s.jitter_seed != first.jitter_seed || s.images != first.images || s.format_version != first.format_version) {
      throw Error(ErrorKind::ShardMismatch, paths[i].string() + " is incompatible with " + paths.front().string());
    }
    if (by_index[s.shard->index]) {
      throw Error(ErrorKind::ShardMismatch, "shard index " + std::to_string(s.shard->index) + " given twice");
    }
    by_index[s.shard->index] = &shards[i];
  }
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!by_index[i]) throw Error(ErrorKind::MissingShard, "shard " + std::to_string(i) + " of " + std::to_string(m));
  }

  ArchiveTables tables;
  ArchiveManifest merged = first;
  merged.shard.reset();
  merged.first_rank = 0;
  merged.state_count = 0;
  merged.transition_count = 0;
  StateRank expected_begin = 0;
  for (const Archive* a : by_index) {
    if (a->manifest().first_rank != expected_begin) {
      throw Error(ErrorKind::ShardMismatch, "shard rank intervals are not contiguous");
    }
    expected_begin += a->state_count();
    merged.state_count += a->state_count();
    merged.transition_count += a->transition_count();
    ArchiveTables copy = a->tables();
    append(tables, std::move(copy));
  }
  if (merged.state_count != count_states(merged.n, merged.k) ||
      merged.transition_count != count_transitions(merged.n, merged.k)) {
    throw Error(ErrorKind::ShardMismatch, "merged counts disagree with the closed forms");
  }
  write_entries(out, merged, tables);
  return merged;
}

}  // namespace bwgen
