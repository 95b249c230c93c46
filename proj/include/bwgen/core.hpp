#pragma once

// Extended k-stack Blocksworld: labeled floor slots, one material bit per
// block, and the move / polish / unpolish action vocabulary.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bwgen/error.hpp"

namespace bwgen {

enum class Material : std::uint8_t { Rubber = 0, Metal = 1 };

using BlockId = std::uint32_t;
using StateRank = std::uint64_t;

using Stack = std::vector<BlockId>;  // index 0 = bottom

inline constexpr std::size_t kMaxBlocks = 63;

class WorldState {
 public:
  WorldState() = default;

  // Validates that the stacks hold every id in [0, n) exactly once, where n
  // is the total number of blocks placed.
  WorldState(std::vector<Stack> stacks, std::uint64_t metal_bits)
      : stacks_(std::move(stacks)), metal_(metal_bits) {
    validate();
  }

  // k empty stacks, no blocks.
  static WorldState empty(std::size_t num_stacks) {
    return WorldState(std::vector<Stack>(num_stacks), 0);
  }

  std::size_t num_blocks() const noexcept { return num_blocks_; }
  std::size_t num_stacks() const noexcept { return stacks_.size(); }
  const std::vector<Stack>& stacks() const noexcept { return stacks_; }
  const Stack& stack(std::size_t j) const { return stacks_.at(j); }
  std::uint64_t metal_bits() const noexcept { return metal_; }

  Material material(BlockId b) const {
    return ((metal_ >> b) & 1U) != 0 ? Material::Metal : Material::Rubber;
  }
  bool is_metal(BlockId b) const { return material(b) == Material::Metal; }

  std::size_t stack_of(BlockId b) const {
    for (std::size_t j = 0; j < stacks_.size(); ++j) {
      if (std::find(stacks_[j].begin(), stacks_[j].end(), b) != stacks_[j].end()) return j;
    }
    throw Error(ErrorKind::InvalidArgument, "block " + std::to_string(b) + " not in state");
  }

  bool is_top(BlockId b) const {
    return std::any_of(stacks_.begin(), stacks_.end(),
                       [b](const Stack& s) { return !s.empty() && s.back() == b; });
  }

  std::size_t nonempty_stacks() const {
    return static_cast<std::size_t>(
        std::count_if(stacks_.begin(), stacks_.end(), [](const Stack& s) { return !s.empty(); }));
  }

  friend bool operator==(const WorldState&, const WorldState&) = default;

 private:
  void validate() {
    if (stacks_.empty()) throw Error(ErrorKind::InvalidState, "at least one stack required");
    std::size_t n = 0;
    for (const auto& s : stacks_) n += s.size();
    if (n > kMaxBlocks) throw Error(ErrorKind::InvalidState, "too many blocks");
    std::vector<bool> seen(n, false);
    for (const auto& s : stacks_) {
      for (BlockId b : s) {
        if (b >= n || seen[b]) {
          throw Error(ErrorKind::InvalidState,
                      "block ids must be a permutation of 0..n-1 (bad id " + std::to_string(b) + ")");
        }
        seen[b] = true;
      }
    }
    if (n < 64 && (metal_ >> n) != 0) {
      throw Error(ErrorKind::InvalidState, "material bits set beyond block count");
    }
    num_blocks_ = n;
  }

  std::vector<Stack> stacks_;
  std::uint64_t metal_ = 0;
  std::size_t num_blocks_ = 0;
};

enum class ActionType : std::uint8_t { Move, Polish, Unpolish };

struct Action {
  ActionType type = ActionType::Move;
  BlockId block = 0;
  std::uint32_t dst = 0;  // destination stack; Move only

  static constexpr Action move(BlockId b, std::uint32_t dst) { return {ActionType::Move, b, dst}; }
  static constexpr Action polish(BlockId b) { return {ActionType::Polish, b, 0}; }
  static constexpr Action unpolish(BlockId b) { return {ActionType::Unpolish, b, 0}; }

  friend constexpr bool operator==(const Action&, const Action&) = default;
};

struct Transition {
  StateRank src = 0;
  Action action;
  StateRank dst = 0;

  friend constexpr bool operator==(const Transition&, const Transition&) = default;
};

// ---------------------------------------------------------------------------
// Action codes: block * (k + 2) + a, a < k is Move to stack a, a = k is
// Polish, a = k + 1 is Unpolish. Decodable without the state.

constexpr std::uint64_t action_code(const Action& a, std::size_t k) {
  const std::uint64_t base = k + 2;
  switch (a.type) {
    case ActionType::Move: return a.block * base + a.dst;
    case ActionType::Polish: return a.block * base + k;
    case ActionType::Unpolish: return a.block * base + k + 1;
  }
  return 0;
}

inline Action decode_action(std::uint64_t code, std::size_t n, std::size_t k) {
  const std::uint64_t base = k + 2;
  const std::uint64_t block = code / base;
  const std::uint64_t a = code % base;
  if (block >= n) throw Error(ErrorKind::InvalidArgument, "action code " + std::to_string(code) + " names no block");
  const auto b = static_cast<BlockId>(block);
  if (a < k) return Action::move(b, static_cast<std::uint32_t>(a));
  return a == k ? Action::polish(b) : Action::unpolish(b);
}

inline std::string to_string(const Action& a) {
  switch (a.type) {
    case ActionType::Move: return "move(" + std::to_string(a.block) + "," + std::to_string(a.dst) + ")";
    case ActionType::Polish: return "polish(" + std::to_string(a.block) + ")";
    case ActionType::Unpolish: return "unpolish(" + std::to_string(a.block) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------

/// Every action applicable in s, ordered by (block id, action code).
///
/// Each top block b of stack j contributes Move{b, j'} for all j' != j plus
/// exactly one of Polish/Unpolish, so the result has k * (#nonempty stacks)
/// entries.
inline std::vector<Action> applicable_actions(const WorldState& s) {
  const std::size_t k = s.num_stacks();
  std::vector<std::pair<BlockId, std::uint32_t>> tops;  // (block, stack)
  for (std::size_t j = 0; j < k; ++j) {
    if (!s.stack(j).empty()) tops.emplace_back(s.stack(j).back(), static_cast<std::uint32_t>(j));
  }
  std::sort(tops.begin(), tops.end());

  std::vector<Action> out;
  out.reserve(tops.size() * k);
  for (auto [b, src] : tops) {
    for (std::uint32_t dst = 0; dst < k; ++dst) {
      if (dst != src) out.push_back(Action::move(b, dst));
    }
    out.push_back(s.is_metal(b) ? Action::unpolish(b) : Action::polish(b));
  }
  return out;
}

inline bool is_applicable(const WorldState& s, const Action& a) {
  if (a.block >= s.num_blocks() || !s.is_top(a.block)) return false;
  switch (a.type) {
    case ActionType::Move: return a.dst < s.num_stacks() && a.dst != s.stack_of(a.block);
    case ActionType::Polish: return !s.is_metal(a.block);
    case ActionType::Unpolish: return s.is_metal(a.block);
  }
  return false;
}

/// Returns the successor of s under a; throws InapplicableAction otherwise.
inline WorldState apply(const WorldState& s, const Action& a) {
  if (!is_applicable(s, a)) {
    throw Error(ErrorKind::InapplicableAction, to_string(a));
  }
  std::vector<Stack> stacks = s.stacks();
  std::uint64_t bits = s.metal_bits();
  switch (a.type) {
    case ActionType::Move: {
      auto& src = stacks[s.stack_of(a.block)];
      src.pop_back();
      stacks[a.dst].push_back(a.block);
      break;
    }
    case ActionType::Polish: bits |= std::uint64_t{1} << a.block; break;
    case ActionType::Unpolish: bits &= ~(std::uint64_t{1} << a.block); break;
  }
  return WorldState(std::move(stacks), bits);
}

/// The action that undoes a (applied in apply(s, a)).
inline Action inverse(const WorldState& s, const Action& a) {
  switch (a.type) {
    case ActionType::Move: return Action::move(a.block, static_cast<std::uint32_t>(s.stack_of(a.block)));
    case ActionType::Polish: return Action::unpolish(a.block);
    case ActionType::Unpolish: return Action::polish(a.block);
  }
  return a;
}

}  // namespace bwgen
