#pragma once

// Minimal deterministic zip (deflate, no zip64) over zlib. Entries keep
// insertion order and carry a fixed 1980-01-01 00:00 timestamp.

#include <zlib.h>

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <algorithm>
#include <iterator>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bwgen/error.hpp"

namespace bwgen::zip {

using Bytes = std::vector<std::uint8_t>;

inline constexpr int kDeflateLevel = 6;
inline constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01
inline constexpr std::uint16_t kDosTime = 0;

namespace detail {

inline void put16(Bytes& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
}
inline void put32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}
inline std::uint16_t get16(const std::uint8_t* p) { return std::uint16_t(p[0] | (p[1] << 8)); }
inline std::uint32_t get32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

[[noreturn]] inline void corrupt(const std::string& what) { throw Error(ErrorKind::CorruptArchive, what); }

inline std::uint32_t crc(std::string_view data) {
  uLong c = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < data.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1U << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(data.data() + off), chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(c);
}

inline Bytes deflate_raw(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, kDeflateLevel, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::IoError, "deflateInit2 failed");
  }
  Bytes out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::IoError, "deflate failed");
  out.resize(zs.total_out);
  return out;
}

inline std::string inflate_raw(const std::uint8_t* data, std::size_t size, std::size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("inflateInit2 failed");
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = static_cast<uInt>(size);
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) corrupt("bad deflate stream");
  return out;
}

}  // namespace detail

class Writer {
 public:
  void add(const std::string& name, std::string_view data) {
    constexpr std::size_t kLimit = 0xFFFFFFFFULL;
    if (data.size() >= kLimit || out_.size() >= kLimit) {
      throw Error(ErrorKind::IoError, "entry " + name + " too large for a non-zip64 archive");
    }
    Entry e{name, detail::crc(data), 0, static_cast<std::uint32_t>(data.size()),
            static_cast<std::uint32_t>(out_.size())};
    const Bytes packed = detail::deflate_raw(data);
    e.compressed = static_cast<std::uint32_t>(packed.size());

    using detail::put16;
    using detail::put32;
    put32(out_, 0x04034b50);
    put16(out_, 20);  // version needed
    put16(out_, 0);   // flags
    put16(out_, 8);   // deflate
    put16(out_, kDosTime);
    put16(out_, kDosDate);
    put32(out_, e.crc);
    put32(out_, e.compressed);
    put32(out_, e.size);
    put16(out_, static_cast<std::uint16_t>(name.size()));
    put16(out_, 0);
    out_.insert(out_.end(), name.begin(), name.end());
    out_.insert(out_.end(), packed.begin(), packed.end());
    entries_.push_back(std::move(e));
  }

  /// Appends the central directory and returns the complete archive bytes.
  Bytes finish() && {
    using detail::put16;
    using detail::put32;
    const auto dir_offset = static_cast<std::uint32_t>(out_.size());
    for (const Entry& e : entries_) {
      put32(out_, 0x02014b50);
      put16(out_, 20);  // version made by
      put16(out_, 20);
      put16(out_, 0);
      put16(out_, 8);
      put16(out_, kDosTime);
      put16(out_, kDosDate);
      put32(out_, e.crc);
      put32(out_, e.compressed);
      put32(out_, e.size);
      put16(out_, static_cast<std::uint16_t>(e.name.size()));
      put16(out_, 0);  // extra
      put16(out_, 0);  // comment
      put16(out_, 0);  // disk
      put16(out_, 0);  // internal attrs
      put32(out_, 0);  // external attrs
      put32(out_, e.offset);
      out_.insert(out_.end(), e.name.begin(), e.name.end());
    }
    const auto dir_size = static_cast<std::uint32_t>(out_.size() - dir_offset);
    if (entries_.size() > 0xFFFF) throw Error(ErrorKind::IoError, "too many zip entries");
    put32(out_, 0x06054b50);
    put16(out_, 0);
    put16(out_, 0);
    put16(out_, static_cast<std::uint16_t>(entries_.size()));
    put16(out_, static_cast<std::uint16_t>(entries_.size()));
    put32(out_, dir_size);
    put32(out_, dir_offset);
    put16(out_, 0);
    return std::move(out_);
  }

 private:
  struct Entry {
    std::string name;
    std::uint32_t crc;
    std::uint32_t compressed;
    std::uint32_t size;
    std::uint32_t offset;
  };

  Bytes out_;
  std::vector<Entry> entries_;
};

class Reader {
 public:
  explicit Reader(Bytes data) : data_(std::move(data)) { index(); }

  static Reader open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return Reader(std::move(data));
  }

  const std::vector<std::string>& names() const { return order_; }
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  std::uint32_t size(const std::string& name) const { return lookup(name).size; }

  std::string read(const std::string& name) const {
    const Entry& e = lookup(name);
    const std::uint8_t* local = data_.data() + e.offset;
    if (e.offset + 30 > data_.size() || detail::get32(local) != 0x04034b50) detail::corrupt("bad local header for " + name);
    const std::size_t start = e.offset + 30 + detail::get16(local + 26) + detail::get16(local + 28);
    if (start + e.compressed > data_.size()) detail::corrupt("entry " + name + " runs past end of file");
    std::string out;
    if (e.method == 0) {
      if (e.compressed != e.size) detail::corrupt("stored entry size mismatch");
      out.assign(reinterpret_cast<const char*>(data_.data() + start), e.size);
    } else if (e.method == 8) {
      out = detail::inflate_raw(data_.data() + start, e.compressed, e.size);
    } else {
      detail::corrupt("unsupported compression method in " + name);
    }
    if (detail::crc(out) != e.crc) detail::corrupt("crc mismatch in " + name);
    return out;
  }

 private:
  struct Entry {
    std::uint16_t method;
    std::uint32_t crc;
    std::uint32_t compressed;
    std::uint32_t size;
    std::uint32_t offset;
  };

  const Entry& lookup(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) detail::corrupt("missing entry " + name);
    return it->second;
  }

  void index() {
    using detail::get16;
    using detail::get32;
    if (data_.size() < 22) detail::corrupt("file too small to be a zip archive");
    std::size_t eocd = data_.size() - 22;
    for (;;) {
      if (get32(data_.data() + eocd) == 0x06054b50) break;
      if (eocd == 0 || data_.size() - eocd > 22 + 0xFFFF) detail::corrupt("no end-of-central-directory record");
      --eocd;
    }
    const std::uint8_t* end = data_.data() + eocd;
    const std::size_t count = get16(end + 10);
    std::size_t pos = get32(end + 16);
    for (std::size_t i = 0; i < count; ++i) {
      if (pos + 46 > data_.size() || get32(data_.data() + pos) != 0x02014b50) detail::corrupt("bad central directory");
      const std::uint8_t* h = data_.data() + pos;
      Entry e{};
      e.method = get16(h + 10);
      e.crc = get32(h + 16);
      e.compressed = get32(h + 20);
      e.size = get32(h + 24);
      e.offset = get32(h + 42);
      const std::size_t name_len = get16(h + 28);
      const std::size_t skip = name_len + get16(h + 30) + get16(h + 32);
      if (pos + 46 + skip > data_.size()) detail::corrupt("bad central directory");
      std::string name(reinterpret_cast<const char*>(h + 46), name_len);
      order_.push_back(name);
      entries_.emplace(std::move(name), e);
      pos += 46 + skip;
    }
  }

  Bytes data_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

}  // namespace bwgen::zip
