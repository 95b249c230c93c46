#pragma once

#include <string>
#include <vector>

namespace bwgen::strips {

/// A positive literal. Arguments are variables ("?x") inside schemas and
/// object names inside problems.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::string> params;

  std::size_t arity() const { return params.size(); }
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<std::string> params;
  std::vector<Atom> precondition;
  std::vector<Atom> add;
  std::vector<Atom> del;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct PddlDomain {
  std::string name;
  std::vector<std::string> requirements{":strips"};
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  const PredicateDecl* find_predicate(const std::string& p) const {
    for (const auto& d : predicates) if (d.name == p) return &d;
    return nullptr;
  }
  const ActionSchema* find_action(const std::string& a) const {
    for (const auto& s : actions) if (s.name == a) return &s;
    return nullptr;
  }

  friend bool operator==(const PddlDomain&, const PddlDomain&) = default;
};

struct PddlProblem {
  std::string name;
  std::string domain_name;
  std::vector<std::string> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;

  friend bool operator==(const PddlProblem&, const PddlProblem&) = default;
};

}  // namespace bwgen::strips
