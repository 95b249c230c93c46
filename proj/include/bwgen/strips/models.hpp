#pragma once

// The two built-in domains and their problem encodings.
//
// classic4: pick-up / put-down / stack / unstack over on, ontable, clear,
// handempty, holding.
//
// extended: the move of a top block splits into four schemas by whether
// the block sits on a block or on a floor position, and whether the
// destination is a block or a vacant position; polish / unpolish flip the
// metal / rubber pair of a clear block. Objects are blocks b0..b{n-1} and
// floor positions p0..p{k-1}.

#include <cstddef>
#include <string>
#include <vector>

#include "bwgen/core.hpp"
#include "bwgen/strips/ast.hpp"
#include "bwgen/strips/classic.hpp"
#include "bwgen/strips/emit.hpp"

namespace bwgen::strips {

enum class DomainKind { Classic4, Extended };

inline std::string block_name(std::size_t b) { return "b" + std::to_string(b); }
inline std::string position_name(std::size_t p) { return "p" + std::to_string(p); }

namespace detail {

inline Atom atom(std::string p, std::vector<std::string> args = {}) { return {std::move(p), std::move(args)}; }

}  // namespace detail

inline PddlDomain classic4_domain() {
  using detail::atom;
  const std::string x = "?x", y = "?y";
  PddlDomain d;
  d.name = "blocks";
  d.predicates = {{"on", {x, y}}, {"ontable", {x}}, {"clear", {x}}, {"handempty", {}}, {"holding", {x}}};
  d.actions = {
      {"pick-up",
       {x},
       {atom("clear", {x}), atom("ontable", {x}), atom("handempty")},
       {atom("holding", {x})},
       {atom("ontable", {x}), atom("clear", {x}), atom("handempty")}},
      {"put-down",
       {x},
       {atom("holding", {x})},
       {atom("clear", {x}), atom("handempty"), atom("ontable", {x})},
       {atom("holding", {x})}},
      {"stack",
       {x, y},
       {atom("holding", {x}), atom("clear", {y})},
       {atom("clear", {x}), atom("handempty"), atom("on", {x, y})},
       {atom("holding", {x}), atom("clear", {y})}},
      {"unstack",
       {x, y},
       {atom("on", {x, y}), atom("clear", {x}), atom("handempty")},
       {atom("holding", {x}), atom("clear", {y})},
       {atom("clear", {x}), atom("handempty"), atom("on", {x, y})}},
  };
  return d;
}

inline PddlDomain extended_domain() {
  using detail::atom;
  const std::string x = "?x", y = "?y", z = "?z", p = "?p", q = "?q";
  PddlDomain d;
  d.name = "blocks-extended";
  d.predicates = {{"on", {x, y}},  {"on-floor", {x, p}}, {"clear", {x}},
                  {"vacant", {p}}, {"metal", {x}},       {"rubber", {x}}};
  d.actions = {
      {"move-b2b",
       {x, y, z},
       {atom("on", {x, y}), atom("clear", {x}), atom("clear", {z})},
       {atom("on", {x, z}), atom("clear", {y})},
       {atom("on", {x, y}), atom("clear", {z})}},
      {"move-b2f",
       {x, y, p},
       {atom("on", {x, y}), atom("clear", {x}), atom("vacant", {p})},
       {atom("on-floor", {x, p}), atom("clear", {y})},
       {atom("on", {x, y}), atom("vacant", {p})}},
      {"move-f2b",
       {x, p, z},
       {atom("on-floor", {x, p}), atom("clear", {x}), atom("clear", {z})},
       {atom("on", {x, z}), atom("vacant", {p})},
       {atom("on-floor", {x, p}), atom("clear", {z})}},
      {"move-f2f",
       {x, p, q},
       {atom("on-floor", {x, p}), atom("clear", {x}), atom("vacant", {q})},
       {atom("on-floor", {x, q}), atom("vacant", {p})},
       {atom("on-floor", {x, p}), atom("vacant", {q})}},
      {"polish", {x}, {atom("clear", {x}), atom("rubber", {x})}, {atom("metal", {x})}, {atom("rubber", {x})}},
      {"unpolish", {x}, {atom("clear", {x}), atom("metal", {x})}, {atom("rubber", {x})}, {atom("metal", {x})}},
  };
  return d;
}

inline std::string emit_domain_classic4() { return emit(classic4_domain()); }

inline std::string emit_domain_extended(std::size_t n, std::size_t k) {
  return emit(extended_domain(), "extended blocksworld; problems use blocks b0..b" + std::to_string(n - 1) +
                                     " and floor positions p0..p" + std::to_string(k - 1));
}

// ---------------------------------------------------------------------------

/// Complete set of true atoms describing a WorldState.
inline std::vector<Atom> extended_atoms(const WorldState& s) {
  using detail::atom;
  std::vector<Atom> out;
  for (std::size_t j = 0; j < s.num_stacks(); ++j) {
    const Stack& stack = s.stack(j);
    if (stack.empty()) continue;
    out.push_back(atom("on-floor", {block_name(stack.front()), position_name(j)}));
    for (std::size_t i = 1; i < stack.size(); ++i) {
      out.push_back(atom("on", {block_name(stack[i]), block_name(stack[i - 1])}));
    }
    out.push_back(atom("clear", {block_name(stack.back())}));
  }
  for (std::size_t j = 0; j < s.num_stacks(); ++j) {
    if (s.stack(j).empty()) out.push_back(atom("vacant", {position_name(j)}));
  }
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    out.push_back(atom(s.is_metal(BlockId(b)) ? "metal" : "rubber", {block_name(b)}));
  }
  return out;
}

inline std::vector<Atom> classic_atoms(const ClassicState& s) {
  using detail::atom;
  s.validate();
  std::vector<Atom> out;
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    if (s.support[b] == kTable) out.push_back(atom("ontable", {block_name(b)}));
  }
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    if (s.support[b] >= 0) out.push_back(atom("on", {block_name(b), block_name(s.support[b])}));
  }
  for (std::size_t b = 0; b < s.num_blocks(); ++b) {
    if (s.clear(int(b))) out.push_back(atom("clear", {block_name(b)}));
  }
  if (auto h = s.holding()) {
    out.push_back(atom("holding", {block_name(*h)}));
  } else {
    out.push_back(atom("handempty"));
  }
  return out;
}

inline PddlProblem extended_problem(const WorldState& init, const WorldState& goal, std::string name = {}) {
  if (init.num_blocks() != goal.num_blocks() || init.num_stacks() != goal.num_stacks()) {
    throw Error(ErrorKind::InvalidState, "init and goal describe different environments");
  }
  PddlProblem p;
  p.name = name.empty() ? "bw-extended-n" + std::to_string(init.num_blocks()) + "-k" + std::to_string(init.num_stacks())
                        : std::move(name);
  p.domain_name = extended_domain().name;
  for (std::size_t b = 0; b < init.num_blocks(); ++b) p.objects.push_back(block_name(b));
  for (std::size_t j = 0; j < init.num_stacks(); ++j) p.objects.push_back(position_name(j));
  p.init = extended_atoms(init);
  p.goal = extended_atoms(goal);
  return p;
}

/// Problem over the 4-operator domain; the goal must have an empty hand.
inline PddlProblem classic_problem(const ClassicState& init, const ClassicState& goal, std::string name = {}) {
  if (init.num_blocks() != goal.num_blocks()) throw Error(ErrorKind::InvalidState, "block counts differ");
  if (goal.holding()) throw Error(ErrorKind::InvalidState, "goal must have an empty hand");
  PddlProblem p;
  p.name = name.empty() ? "bw-classic-n" + std::to_string(init.num_blocks()) : std::move(name);
  p.domain_name = classic4_domain().name;
  for (std::size_t b = 0; b < init.num_blocks(); ++b) p.objects.push_back(block_name(b));
  p.init = classic_atoms(init);
  p.goal = classic_atoms(goal);
  return p;
}

inline std::string emit_problem(const WorldState& init, const WorldState& goal) {
  return emit(extended_problem(init, goal));
}

inline std::string emit_problem(const ClassicState& init, const ClassicState& goal) {
  return emit(classic_problem(init, goal));
}

}  // namespace bwgen::strips
