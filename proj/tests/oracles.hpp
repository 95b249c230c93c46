#pragma once

// Reference implementations used only by tests. They share no code path
// with the library beyond the WorldState type used to seed searches.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "bwgen/core.hpp"

namespace oracle {

// Plain value state: stacks bottom-to-top plus one material flag per block.
struct State {
  std::vector<std::vector<int>> stacks;
  std::vector<bool> metal;
  friend auto operator<=>(const State&, const State&) = default;
};

inline State from_world(const bwgen::WorldState& w) {
  State s;
  for (const auto& st : w.stacks()) s.stacks.emplace_back(st.begin(), st.end());
  for (std::size_t b = 0; b < w.num_blocks(); ++b) s.metal.push_back(w.is_metal(bwgen::BlockId(b)));
  return s;
}

inline bwgen::WorldState to_world(const State& s) {
  std::vector<bwgen::Stack> stacks;
  for (const auto& st : s.stacks) stacks.emplace_back(st.begin(), st.end());
  std::uint64_t bits = 0;
  for (std::size_t b = 0; b < s.metal.size(); ++b) if (s.metal[b]) bits |= std::uint64_t{1} << b;
  return bwgen::WorldState(std::move(stacks), bits);
}

// Every state reachable in one step: move any top block to any other stack,
// or flip the material of any top block.
inline std::vector<State> successors(const State& s) {
  std::vector<State> out;
  const std::size_t k = s.stacks.size();
  for (std::size_t from = 0; from < k; ++from) {
    if (s.stacks[from].empty()) continue;
    for (std::size_t to = 0; to < k; ++to) {
      if (to == from) continue;
      State t = s;
      t.stacks[to].push_back(t.stacks[from].back());
      t.stacks[from].pop_back();
      out.push_back(std::move(t));
    }
    State t = s;
    const int top = s.stacks[from].back();
    t.metal[top] = !t.metal[top];
    out.push_back(std::move(t));
  }
  return out;
}

struct SpaceCounts {
  std::uint64_t states = 0;
  std::uint64_t edges = 0;
};

inline SpaceCounts bfs_counts(const State& start) {
  std::set<State> seen{start};
  std::deque<State> queue{start};
  SpaceCounts c;
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();
    ++c.states;
    for (auto& t : successors(s)) {
      ++c.edges;
      if (seen.insert(t).second) queue.push_back(std::move(t));
    }
  }
  return c;
}

/// Explicit graph over all reachable states with all-pairs BFS distances.
// Every state of the (n, k) space, built by placing blocks one at a time
// at every slot of every stack and then crossing with all material masks.
inline std::vector<State> all_states(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::vector<int>>> layouts{std::vector<std::vector<int>>(k)};
  for (int b = 0; b < int(n); ++b) {
    std::vector<std::vector<std::vector<int>>> next;
    for (const auto& l : layouts) {
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t pos = 0; pos <= l[j].size(); ++pos) {
          auto m = l;
          m[j].insert(m[j].begin() + std::ptrdiff_t(pos), b);
          next.push_back(std::move(m));
        }
      }
    }
    layouts = std::move(next);
  }
  std::vector<State> out;
  for (const auto& l : layouts) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      State s{l, std::vector<bool>(n)};
      for (std::size_t b = 0; b < n; ++b) s.metal[b] = (mask >> b) & 1;
      out.push_back(std::move(s));
    }
  }
  return out;
}

// States and edges of the whole graph, component by component.
inline SpaceCounts full_graph_counts(std::size_t n, std::size_t k) {
  SpaceCounts c;
  std::set<State> seen;
  for (const State& s : all_states(n, k)) {
    if (!seen.insert(s).second) continue;  // layouts are distinct, so never hit
    ++c.states;
    c.edges += successors(s).size();
  }
  return c;
}

class Graph {
 public:
  explicit Graph(const State& start) {
    index_.emplace(start, 0);
    states_.push_back(start);
    for (std::size_t head = 0; head < states_.size(); ++head) {
      adjacency_.emplace_back();
      for (auto& t : successors(states_[head])) {
        auto [it, inserted] = index_.emplace(t, states_.size());
        if (inserted) states_.push_back(t);
        adjacency_[head].push_back(it->second);
      }
    }
  }

  std::size_t size() const { return states_.size(); }
  std::size_t index_of(const State& s) const { return index_.at(s); }

  std::vector<int> distances_from(std::size_t src) const {
    std::vector<int> dist(states_.size(), -1);
    std::deque<std::size_t> q{src};
    dist[src] = 0;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop_front();
      for (std::size_t v : adjacency_[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
      }
    }
    return dist;
  }

  std::vector<std::vector<int>> all_pairs() const {
    std::vector<std::vector<int>> d;
    for (std::size_t s = 0; s < states_.size(); ++s) d.push_back(distances_from(s));
    return d;
  }

 private:
  std::map<State, std::size_t> index_;
  std::vector<State> states_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Number of ways to arrange n labeled blocks into unlabeled towers
/// (Lah numbers summed over tower counts): a(n) = (2n-1) a(n-1) - (n-1)(n-2) a(n-2).
inline std::uint64_t tower_arrangements(std::uint64_t n) {
  if (n == 0) return 1;
  std::uint64_t prev = 1, cur = 1;  // a(0), a(1)
  for (std::uint64_t m = 2; m <= n; ++m) {
    const std::uint64_t next = (2 * m - 1) * cur - (m - 1) * (m - 2) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Classic arm states for n blocks: hand empty, or holding one of n blocks.
inline std::uint64_t classic_state_count(std::uint64_t n) {
  return tower_arrangements(n) + (n ? n * tower_arrangements(n - 1) : 0);
}

/// Rising factorial by direct multiplication in 128 bits.
inline unsigned __int128 rising(unsigned __int128 x, unsigned n) {
  unsigned __int128 r = 1;
  for (unsigned i = 0; i < n; ++i) r *= x + i;
  return r;
}

}  // namespace oracle
