#pragma once

// Counting, ranking and exhaustive enumeration of the extended state space.
//
// rank = arrangementRank * 2^n + materialBits. The arrangement is encoded
// by insertion: starting from k empty stacks, block i is inserted at one of
// the (k + i) global slots (stack 0 bottom..top, then stack 1, ...), and the
// slot index is digit d_i of a mixed-radix number with weights
// w_i = k (k+1) ... (k+i-1).

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bwgen/core.hpp"
#include "bwgen/error.hpp"

namespace bwgen {

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "count exceeds 64 bits");
  return r;
}

inline void check_env(std::size_t n, std::size_t k) {
  if (n < 1 || k < 1) throw Error(ErrorKind::InvalidArgument, "need at least one block and one stack");
  if (n > kMaxBlocks) throw Error(ErrorKind::Overflow, "count exceeds 64 bits");
}

}  // namespace detail

/// x (x+1) ... (x+n-1); empty product is 1.
inline std::uint64_t rising_factorial(std::uint64_t x, std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) r = detail::checked_mul(r, x + i);
  return r;
}

inline std::uint64_t count_arrangements(std::size_t n, std::size_t k) {
  detail::check_env(n, k);
  return rising_factorial(k, n);
}

inline std::uint64_t count_states(std::size_t n, std::size_t k) {
  detail::check_env(n, k);
  return detail::checked_mul(std::uint64_t{1} << n, rising_factorial(k, n));
}

/// 2^n k^2 (k^(n) - (k-1)^(n)): every nonempty stack contributes k actions,
/// and a fixed stack is nonempty in k^(n) - (k-1)^(n) arrangements.
inline std::uint64_t count_transitions(std::size_t n, std::size_t k) {
  detail::check_env(n, k);
  const std::uint64_t nonempty = rising_factorial(k, n) - rising_factorial(k - 1, n);
  return detail::checked_mul(detail::checked_mul(std::uint64_t{1} << n, detail::checked_mul(k, k)),
                             nonempty);
}

inline StateRank rank(const WorldState& s) {
  const std::size_t n = s.num_blocks();
  const std::size_t k = s.num_stacks();
  std::vector<Stack> stacks = s.stacks();

  // Remove blocks n-1 .. 0, recording where each sat among the slots
  // available when it was inserted.
  std::vector<std::uint64_t> digit(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    std::uint64_t slots_before = 0;
    for (std::size_t j = 0; j < k; ++j) {
      auto& stack = stacks[j];
      auto it = std::find(stack.begin(), stack.end(), static_cast<BlockId>(i));
      if (it == stack.end()) {
        slots_before += stack.size() + 1;
        continue;
      }
      digit[i] = slots_before + static_cast<std::uint64_t>(it - stack.begin());
      stack.erase(it);
      break;
    }
  }

  std::uint64_t arrangement = 0;
  std::uint64_t weight = 1;
  for (std::size_t i = 0; i < n; ++i) {
    arrangement += digit[i] * weight;
    weight *= k + i;
  }
  return (arrangement << n) | s.metal_bits();
}

inline WorldState unrank(StateRank r, std::size_t n, std::size_t k) {
  if (r >= count_states(n, k)) {
    throw Error(ErrorKind::RankOutOfRange,
                "rank " + std::to_string(r) + " >= " + std::to_string(count_states(n, k)));
  }
  const std::uint64_t bits = r & ((std::uint64_t{1} << n) - 1);
  std::uint64_t arrangement = r >> n;

  std::vector<Stack> stacks(k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t radix = k + i;
    std::uint64_t slot = arrangement % radix;
    arrangement /= radix;
    for (auto& stack : stacks) {
      if (slot <= stack.size()) {
        stack.insert(stack.begin() + static_cast<std::ptrdiff_t>(slot), static_cast<BlockId>(i));
        break;
      }
      slot -= stack.size() + 1;
    }
  }
  return WorldState(std::move(stacks), bits);
}

// ---------------------------------------------------------------------------

struct ShardSpec {
  std::uint64_t index = 0;
  std::uint64_t count = 1;

  friend bool operator==(const ShardSpec&, const ShardSpec&) = default;
};

struct RankInterval {
  StateRank begin = 0;
  StateRank end = 0;
  std::uint64_t size() const { return end - begin; }
};

/// Contiguous partition of [0, total); interval sizes differ by at most one.
inline RankInterval shard_interval(std::uint64_t total, ShardSpec shard) {
  if (shard.count < 1 || shard.index >= shard.count) {
    throw Error(ErrorKind::InvalidArgument, "shard index " + std::to_string(shard.index) +
                                                " out of range for " + std::to_string(shard.count) +
                                                " shards");
  }
  auto boundary = [&](std::uint64_t i) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(total) * i / shard.count);
  };
  return {boundary(shard.index), boundary(shard.index + 1)};
}

/// Calls fn(rank, state) for every state in the shard, ranks ascending.
template <class Fn>
void enumerate_states(std::size_t n, std::size_t k, ShardSpec shard, Fn&& fn) {
  const RankInterval range = shard_interval(count_states(n, k), shard);
  for (StateRank r = range.begin; r < range.end; ++r) fn(r, unrank(r, n, k));
}

/// Calls fn(transition) for every source state in the shard, in the core
/// action order.
template <class Fn>
void enumerate_transitions(std::size_t n, std::size_t k, ShardSpec shard, Fn&& fn) {
  enumerate_states(n, k, shard, [&](StateRank r, const WorldState& s) {
    for (const Action& a : applicable_actions(s)) fn(Transition{r, a, rank(apply(s, a))});
  });
}

inline std::vector<Transition> collect_transitions(std::size_t n, std::size_t k, ShardSpec shard = {}) {
  std::vector<Transition> out;
  enumerate_transitions(n, k, shard, [&](const Transition& t) { out.push_back(t); });
  return out;
}

}  // namespace bwgen
