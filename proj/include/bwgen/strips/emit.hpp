#pragma once

// Canonical PDDL text: lowercase keywords, two-space indent, one form per line.

#include <sstream>
#include <string>
#include <vector>

#include "bwgen/strips/ast.hpp"

namespace bwgen::strips {

inline std::string to_pddl(const Atom& a) {
  std::string out = "(" + a.predicate;
  for (const auto& arg : a.args) out += " " + arg;
  return out + ")";
}

namespace detail {

inline std::string conjunction(const std::vector<Atom>& atoms) {
  std::string out = "(and";
  for (const auto& a : atoms) out += " " + to_pddl(a);
  return out + ")";
}

inline std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + xs[i];
  return out;
}

}  // namespace detail

inline std::string emit(const PddlDomain& d, const std::string& comment = {}) {
  std::ostringstream os;
  if (!comment.empty()) os << "; " << comment << "\n";
  os << "(define (domain " << d.name << ")\n";
  os << "  (:requirements :strips)\n";
  os << "  (:predicates";
  for (const auto& p : d.predicates) {
    os << "\n    (" << p.name;
    for (const auto& v : p.params) os << " " << v;
    os << ")";
  }
  os << ")";
  for (const auto& a : d.actions) {
    os << "\n  (:action " << a.name << "\n";
    os << "    :parameters (" << detail::join(a.params) << ")\n";
    os << "    :precondition " << detail::conjunction(a.precondition) << "\n";
    os << "    :effect (and";
    for (const auto& x : a.add) os << " " << to_pddl(x);
    for (const auto& x : a.del) os << " (not " << to_pddl(x) << ")";
    os << "))";
  }
  os << ")\n";
  return os.str();
}

inline std::string emit(const PddlProblem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  os << "  (:domain " << p.domain_name << ")\n";
  os << "  (:objects " << detail::join(p.objects) << ")\n";
  os << "  (:init";
  for (const auto& a : p.init) os << "\n    " << to_pddl(a);
  os << ")\n";
  os << "  (:goal (and";
  for (const auto& a : p.goal) os << "\n    " << to_pddl(a);
  os << ")))\n";
  return os.str();
}

}  // namespace bwgen::strips
