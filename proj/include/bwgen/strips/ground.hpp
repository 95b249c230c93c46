#pragma once

// Full grounding (no reachability pruning) and STRIPS simulation over atom
// bitsets.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bwgen/error.hpp"
#include "bwgen/strips/ast.hpp"
#include "bwgen/strips/emit.hpp"

namespace bwgen::strips {

using AtomId = std::uint32_t;

class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t num_atoms) : words_((num_atoms + 63) / 64, 0) {}

  bool test(AtomId a) const { return (words_[a >> 6] >> (a & 63)) & 1U; }
  void set(AtomId a) { words_[a >> 6] |= std::uint64_t{1} << (a & 63); }
  void reset(AtomId a) { words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

struct AtomSetHash {
  std::size_t operator()(const AtomSet& s) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto w : s.words()) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

struct GroundAction {
  std::size_t schema = 0;
  std::vector<std::size_t> args;  // object indices
  std::string name;               // "(stack b0 b1)"
  std::vector<AtomId> pre, add, del;
};

class GroundedModel {
 public:
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const AtomSet& initial_state() const { return init_; }
  const std::vector<AtomId>& goal() const { return goal_; }
  std::size_t num_atoms() const { return atoms_.size(); }

  std::optional<AtomId> find_atom(const Atom& a) const {
    auto it = atom_index_.find(to_pddl(a));
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_action(const std::string& name) const {
    auto it = action_index_.find(name);
    if (it == action_index_.end()) return std::nullopt;
    return it->second;
  }

  AtomSet make_state(const std::vector<Atom>& true_atoms) const {
    AtomSet s(num_atoms());
    for (const auto& a : true_atoms) s.set(require_atom(a));
    return s;
  }

  bool is_goal(const AtomSet& s) const {
    for (AtomId g : goal_) if (!s.test(g)) return false;
    return true;
  }

  bool applicable(const AtomSet& s, std::size_t action) const {
    for (AtomId p : actions_.at(action).pre) if (!s.test(p)) return false;
    return true;
  }

  std::vector<std::size_t> applicable_actions(const AtomSet& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < actions_.size(); ++i) if (applicable(s, i)) out.push_back(i);
    return out;
  }

  /// (state \ del) U add; throws PreconditionViolated naming the first missing atom.
  AtomSet step(const AtomSet& s, std::size_t action) const {
    const GroundAction& a = actions_.at(action);
    for (AtomId p : a.pre) {
      if (!s.test(p)) {
        throw Error(ErrorKind::PreconditionViolated, a.name + " requires " + to_pddl(atoms_[p]));
      }
    }
    AtomSet next = s;
    for (AtomId d : a.del) next.reset(d);
    for (AtomId d : a.add) next.set(d);
    return next;
  }

  std::vector<Atom> decode(const AtomSet& s) const {
    std::vector<Atom> out;
    for (AtomId a = 0; a < atoms_.size(); ++a) if (s.test(a)) out.push_back(atoms_[a]);
    return out;
  }

 private:
  friend GroundedModel ground(const PddlDomain&, const PddlProblem&);

  AtomId require_atom(const Atom& a) const {
    auto id = find_atom(a);
    if (!id) throw Error(ErrorKind::UndeclaredPredicate, to_pddl(a));
    return *id;
  }

  std::vector<std::string> objects_;
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, AtomId> atom_index_;
  std::vector<GroundAction> actions_;
  std::unordered_map<std::string, std::size_t> action_index_;
  AtomSet init_;
  std::vector<AtomId> goal_;
};

inline AtomSet grounded_step(const GroundedModel& model, const AtomSet& state, std::size_t action) {
  return model.step(state, action);
}

namespace detail {

// Visits every tuple in [0, base)^arity in lexicographic order.
inline void for_each_tuple(std::size_t base, std::size_t arity,
                           const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> t(arity, 0);
  if (arity > 0 && base == 0) return;
  for (;;) {
    fn(t);
    std::size_t i = arity;
    while (i > 0) {
      if (++t[i - 1] < base) break;
      t[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

inline bool pairwise_distinct(const std::vector<std::size_t>& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) return false;
  return true;
}

}  // namespace detail

/// Instantiates every schema over all bindings with pairwise-distinct
/// arguments, in schema order then lexicographic object-index order.
inline GroundedModel ground(const PddlDomain& domain, const PddlProblem& problem) {
  if (problem.domain_name != domain.name) {
    throw Error(ErrorKind::InvalidArgument,
                "problem is for domain " + problem.domain_name + ", not " + domain.name);
  }
  GroundedModel m;
  m.objects_ = problem.objects;
  const std::size_t num_objects = m.objects_.size();

  std::unordered_map<std::string, std::size_t> object_index;
  for (std::size_t i = 0; i < num_objects; ++i) object_index.emplace(m.objects_[i], i);

  for (const auto& pred : domain.predicates) {
    detail::for_each_tuple(num_objects, pred.arity(), [&](const std::vector<std::size_t>& t) {
      Atom a{pred.name, {}};
      for (auto o : t) a.args.push_back(m.objects_[o]);
      m.atom_index_.emplace(to_pddl(a), static_cast<AtomId>(m.atoms_.size()));
      m.atoms_.push_back(std::move(a));
    });
  }

  auto check_ground = [&](const Atom& a) {
    const PredicateDecl* decl = domain.find_predicate(a.predicate);
    if (!decl) throw Error(ErrorKind::UndeclaredPredicate, a.predicate);
    if (decl->arity() != a.args.size()) throw Error(ErrorKind::ArityMismatch, to_pddl(a));
    for (const auto& arg : a.args) {
      if (!object_index.count(arg)) throw Error(ErrorKind::UndeclaredObject, arg);
    }
    return *m.find_atom(a);
  };

  for (std::size_t si = 0; si < domain.actions.size(); ++si) {
    const ActionSchema& schema = domain.actions[si];
    detail::for_each_tuple(num_objects, schema.params.size(), [&](const std::vector<std::size_t>& t) {
      if (!detail::pairwise_distinct(t)) return;
      std::unordered_map<std::string, const std::string*> binding;
      for (std::size_t i = 0; i < t.size(); ++i) binding[schema.params[i]] = &m.objects_[t[i]];
      auto instantiate = [&](const std::vector<Atom>& atoms) {
        std::vector<AtomId> ids;
        for (const auto& a : atoms) {
          Atom g{a.predicate, {}};
          for (const auto& v : a.args) g.args.push_back(*binding.at(v));
          ids.push_back(*m.find_atom(g));
        }
        return ids;
      };
      GroundAction ga;
      ga.schema = si;
      ga.args = t;
      ga.name = "(" + schema.name;
      for (auto o : t) ga.name += " " + m.objects_[o];
      ga.name += ")";
      ga.pre = instantiate(schema.precondition);
      ga.add = instantiate(schema.add);
      ga.del = instantiate(schema.del);
      m.action_index_.emplace(ga.name, m.actions_.size());
      m.actions_.push_back(std::move(ga));
    });
  }

  m.init_ = AtomSet(m.atoms_.size());
  for (const auto& a : problem.init) m.init_.set(check_ground(a));
  for (const auto& a : problem.goal) m.goal_.push_back(check_ground(a));
  return m;
}

}  // namespace bwgen::strips
