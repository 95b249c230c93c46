#pragma once

// Arm-based Blocksworld state for the 4-operator model.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bwgen/error.hpp"

namespace bwgen::strips {

inline constexpr int kTable = -1;
inline constexpr int kHeld = -2;

/// support[b] is the block under b, kTable, or kHeld (b is in the hand).
/// clear / ontable / handempty are derived.
struct ClassicState {
  std::vector<int> support;

  std::size_t num_blocks() const { return support.size(); }

  std::optional<int> holding() const {
    for (std::size_t b = 0; b < support.size(); ++b) if (support[b] == kHeld) return int(b);
    return std::nullopt;
  }

  bool clear(int b) const {
    if (support.at(b) == kHeld) return false;
    for (int s : support) if (s == b) return false;
    return true;
  }

  /// Towers bottom to top, ordered by bottom block id.
  std::vector<std::vector<int>> towers() const {
    validate();
    std::vector<std::vector<int>> out;
    for (std::size_t b = 0; b < support.size(); ++b) {
      if (support[b] != kTable) continue;
      std::vector<int> tower{int(b)};
      for (;;) {
        int above = -1;
        for (std::size_t c = 0; c < support.size(); ++c) if (support[c] == tower.back()) above = int(c);
        if (above < 0) break;
        tower.push_back(above);
      }
      out.push_back(std::move(tower));
    }
    return out;
  }

  static ClassicState all_on_table(std::size_t n) { return {std::vector<int>(n, kTable)}; }

  /// Builds a hand-empty state from towers listed bottom to top.
  static ClassicState from_towers(std::size_t n, const std::vector<std::vector<int>>& towers) {
    ClassicState s{std::vector<int>(n, kHeld)};
    std::vector<bool> seen(n, false);
    for (const auto& t : towers) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        const int b = t[i];
        if (b < 0 || std::size_t(b) >= n || seen[b]) {
          throw Error(ErrorKind::InvalidState, "towers must use each block 0..n-1 exactly once");
        }
        seen[b] = true;
        s.support[b] = i == 0 ? kTable : t[i - 1];
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      if (!seen[b]) throw Error(ErrorKind::InvalidState, "block " + std::to_string(b) + " missing from towers");
    }
    return s;
  }

  /// Throws InvalidState unless support is a forest of chains with at most
  /// one held block.
  void validate() const {
    const std::size_t n = support.size();
    std::vector<int> supported_count(n, 0);
    int held = 0;
    for (std::size_t b = 0; b < n; ++b) {
      const int s = support[b];
      if (s == kHeld) {
        ++held;
      } else if (s != kTable) {
        if (s < 0 || std::size_t(s) >= n || std::size_t(s) == b) throw Error(ErrorKind::InvalidState, "bad support");
        if (support[s] == kHeld) throw Error(ErrorKind::InvalidState, "block rests on the held block");
        if (++supported_count[s] > 1) throw Error(ErrorKind::InvalidState, "block supports two blocks");
      }
    }
    if (held > 1) throw Error(ErrorKind::InvalidState, "more than one block held");
    for (std::size_t b = 0; b < n; ++b) {
      int cur = int(b);
      for (std::size_t steps = 0; support[cur] >= 0; ++steps) {
        if (steps > n) throw Error(ErrorKind::InvalidState, "support cycle");
        cur = support[cur];
      }
    }
  }

  friend bool operator==(const ClassicState&, const ClassicState&) = default;
};

}  // namespace bwgen::strips
