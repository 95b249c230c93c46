#pragma once

// Blind optimal search, the put-everything-down linear solver, plan
// validation, and seeded instance generation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bwgen/core.hpp"
#include "bwgen/enumerate.hpp"
#include "bwgen/error.hpp"
#include "bwgen/rng.hpp"
#include "bwgen/strips/classic.hpp"
#include "bwgen/strips/ground.hpp"
#include "bwgen/strips/models.hpp"

namespace bwgen {

using Plan = std::vector<Action>;

/// Plan over a grounded model, as action names like "(stack b0 b1)".
struct GroundedPlan {
  std::vector<std::string> steps;
  friend bool operator==(const GroundedPlan&, const GroundedPlan&) = default;
};

struct Instance {
  std::size_t n = 0;
  std::size_t k = 0;
  StateRank init = 0;
  StateRank goal = 0;
  std::uint32_t walk_length = 0;
  std::uint64_t seed = 0;  // seed of the walk that produced goal
  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class FailReason { Inapplicable, GoalUnmet };

struct ValidationReport {
  bool ok = true;
  std::optional<std::size_t> fail_step;
  std::optional<FailReason> reason;
};

inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

// ---------------------------------------------------------------------------

/// Minimum-length plan by BFS over ranks. Successors are expanded in core
/// action order from a FIFO queue, so ties break deterministically.
inline Plan plan_optimal(std::size_t n, std::size_t k, StateRank init, StateRank goal) {
  const std::uint64_t total = count_states(n, k);
  if (init >= total || goal >= total) {
    throw Error(ErrorKind::MismatchedEnvironment, "rank outside the " + std::to_string(n) + "-block " +
                                                      std::to_string(k) + "-stack space");
  }
  if (init == goal) return {};

  constexpr std::uint64_t kUnseen = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> parent(total, kUnseen);
  std::vector<Action> via(total);
  std::deque<StateRank> frontier{init};
  parent[init] = init;
  while (!frontier.empty()) {
    const StateRank r = frontier.front();
    frontier.pop_front();
    const WorldState s = unrank(r, n, k);
    for (const Action& a : applicable_actions(s)) {
      const StateRank next = rank(apply(s, a));
      if (parent[next] != kUnseen) continue;
      parent[next] = r;
      via[next] = a;
      if (next == goal) {
        Plan plan;
        for (StateRank cur = goal; cur != init; cur = parent[cur]) plan.push_back(via[cur]);
        std::reverse(plan.begin(), plan.end());
        return plan;
      }
      frontier.push_back(next);
    }
  }
  throw Error(ErrorKind::Unreachable, "goal not reachable");
}

/// Replays plan from unrank(init); reports the first inapplicable step, or
/// GoalUnmet at index plan.size() when the final state is not goal.
inline ValidationReport validate(std::size_t n, std::size_t k, StateRank init, const Plan& plan, StateRank goal) {
  WorldState s = unrank(init, n, k);
  if (goal >= count_states(n, k)) throw Error(ErrorKind::RankOutOfRange, "goal rank " + std::to_string(goal));
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (!is_applicable(s, plan[i])) return {false, i, FailReason::Inapplicable};
    s = apply(s, plan[i]);
  }
  if (rank(s) != goal) return {false, plan.size(), FailReason::GoalUnmet};
  return {};
}

// ---------------------------------------------------------------------------

/// BFS over grounded states; grounded actions expanded in model order.
inline GroundedPlan plan_grounded_blind(const strips::GroundedModel& model) {
  using strips::AtomSet;
  const AtomSet& init = model.initial_state();
  if (model.is_goal(init)) return {};

  struct Node {
    std::size_t parent;
    std::size_t action;
  };
  std::vector<AtomSet> states{init};
  std::vector<Node> nodes{{0, 0}};
  std::unordered_map<AtomSet, std::size_t, strips::AtomSetHash> index{{init, 0}};

  for (std::size_t head = 0; head < states.size(); ++head) {
    for (std::size_t a = 0; a < model.actions().size(); ++a) {
      if (!model.applicable(states[head], a)) continue;
      AtomSet next = model.step(states[head], a);
      if (index.count(next)) continue;
      const bool done = model.is_goal(next);
      index.emplace(next, states.size());
      states.push_back(std::move(next));
      nodes.push_back({head, a});
      if (done) {
        GroundedPlan plan;
        for (std::size_t cur = states.size() - 1; cur != 0; cur = nodes[cur].parent) {
          plan.steps.push_back(model.actions()[nodes[cur].action].name);
        }
        std::reverse(plan.steps.begin(), plan.steps.end());
        return plan;
      }
    }
  }
  throw Error(ErrorKind::Unreachable, "goal not reachable from the initial state");
}

/// Replays a grounded plan by action name against the model's init and goal.
inline ValidationReport validate_grounded(const strips::GroundedModel& model, const GroundedPlan& plan) {
  strips::AtomSet s = model.initial_state();
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto id = model.find_action(plan.steps[i]);
    if (!id || !model.applicable(s, *id)) return {false, i, FailReason::Inapplicable};
    s = model.step(s, *id);
  }
  if (!model.is_goal(s)) return {false, plan.steps.size(), FailReason::GoalUnmet};
  return {};
}

/// Unstack every tower onto the table top-down, then build each goal tower
/// bottom-up. Length is 2u + 2g for u blocks off the table in init and g in
/// goal.
inline GroundedPlan solve_classic_linear(const strips::ClassicState& init, const strips::ClassicState& goal) {
  using strips::block_name;
  if (init.num_blocks() != goal.num_blocks()) throw Error(ErrorKind::InvalidState, "block counts differ");
  if (init.holding()) throw Error(ErrorKind::InvalidState, "init must have an empty hand");
  if (goal.holding()) throw Error(ErrorKind::IllFormedGoal, "goal holds a block");
  try {
    goal.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::IllFormedGoal, e.what());
  }

  GroundedPlan plan;
  for (const auto& tower : init.towers()) {
    for (std::size_t i = tower.size(); i-- > 1;) {
      plan.steps.push_back("(unstack " + block_name(tower[i]) + " " + block_name(tower[i - 1]) + ")");
      plan.steps.push_back("(put-down " + block_name(tower[i]) + ")");
    }
  }
  for (const auto& tower : goal.towers()) {
    for (std::size_t i = 1; i < tower.size(); ++i) {
      plan.steps.push_back("(pick-up " + block_name(tower[i]) + ")");
      plan.steps.push_back("(stack " + block_name(tower[i]) + " " + block_name(tower[i - 1]) + ")");
    }
  }
  return plan;
}

// ---------------------------------------------------------------------------

struct Walk {
  StateRank goal = 0;
  Plan steps;
};

/// L uniformly chosen applicable actions from init; walks may backtrack.
inline Walk random_walk_goal(std::size_t n, std::size_t k, StateRank init, std::uint32_t length,
                             std::uint64_t seed) {
  Xoshiro256 rng(seed);
  WorldState s = unrank(init, n, k);
  Walk walk;
  for (std::uint32_t i = 0; i < length; ++i) {
    const std::vector<Action> actions = applicable_actions(s);
    const Action a = actions[rng.below(actions.size())];
    walk.steps.push_back(a);
    s = apply(s, a);
  }
  walk.goal = rank(s);
  return walk;
}

/// Seed of the generator stream used for walk length L.
constexpr std::uint64_t walk_stream_seed(std::uint64_t seed, std::uint32_t length) {
  return seed ^ (std::uint64_t{length} * kSeedStride);
}

/// For each L (in order) draws per_step instances from the stream seeded
/// with walk_stream_seed(seed, L): init = below(count_states), walk seed =
/// next(). Draws whose walk returns to init are discarded and redrawn.
inline std::vector<Instance> gen_instances(std::size_t n, std::size_t k, const std::vector<std::uint32_t>& steps,
                                           std::size_t per_step, std::uint64_t seed) {
  if (steps.empty() || per_step < 1) throw Error(ErrorKind::InvalidArgument, "need at least one instance");
  const std::uint64_t total = count_states(n, k);
  constexpr int kMaxRedraws = 10000;
  std::vector<Instance> out;
  for (std::uint32_t length : steps) {
    if (length == 0) throw Error(ErrorKind::InvalidArgument, "walk length 0 yields only trivial instances");
    Xoshiro256 rng(walk_stream_seed(seed, length));
    for (std::size_t i = 0; i < per_step; ++i) {
      int attempts = 0;
      for (;;) {
        if (++attempts > kMaxRedraws) {
          throw Error(ErrorKind::InvalidArgument, "no non-trivial instance found for L=" + std::to_string(length));
        }
        const StateRank init = rng.below(total);
        const std::uint64_t walk_seed = rng.next();
        const Walk walk = random_walk_goal(n, k, init, length, walk_seed);
        if (walk.goal == init) continue;
        out.push_back({n, k, init, walk.goal, length, walk_seed});
        break;
      }
    }
  }
  return out;
}

/// count distinct ranks, uniform without replacement, sorted ascending.
inline std::vector<StateRank> sample_states(std::size_t n, std::size_t k, std::uint64_t count, std::uint64_t seed) {
  const std::uint64_t total = count_states(n, k);
  if (count > total) {
    throw Error(ErrorKind::CountTooLarge, std::to_string(count) + " > " + std::to_string(total) + " states");
  }
  std::vector<StateRank> out;
  if (count == total) {
    out.resize(total);
    for (StateRank r = 0; r < total; ++r) out[r] = r;
    return out;
  }
  Xoshiro256 rng(seed);
  std::unordered_set<StateRank> seen;
  while (out.size() < count) {
    const StateRank r = rng.below(total);
    if (seen.insert(r).second) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bwgen
