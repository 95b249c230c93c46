#pragma once

// Front-end for the STRIPS subset of PDDL: untyped, positive conjunctive
// preconditions, add/delete effects. Anything else is rejected.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bwgen/error.hpp"
#include "bwgen/strips/ast.hpp"

namespace bwgen::strips {

namespace detail {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t col = 1;

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line, col, what); }
};

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline bool is_keyword(const SExpr& e, std::string_view kw) { return !e.is_list && lower(e.atom) == kw; }

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip_space();
    if (pos_ >= text_.size()) throw SyntaxError(line_, col_, "empty input");
    SExpr top = read();
    skip_space();
    if (pos_ < text_.size()) throw SyntaxError(line_, col_, "trailing input after top-level form");
    return top;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    e.line = line_;
    e.col = col_;
    const char c = text_[pos_];
    if (c == ')') throw SyntaxError(line_, col_, "unexpected ')'");
    if (c == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw SyntaxError(e.line, e.col, "unterminated list");
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(read());
      }
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      advance();
    }
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

[[noreturn]] inline void unsupported(const std::string& token) {
  throw Error(ErrorKind::UnsupportedFeature, token);
}

inline const std::set<std::string>& unsupported_connectives() {
  static const std::set<std::string> kinds{"or", "forall", "exists", "imply", "when", "=", "increase",
                                           "decrease", "assign", "either"};
  return kinds;
}

inline const std::string& expect_name(const SExpr& e, std::string_view what) {
  if (e.is_list || e.atom.empty()) e.fail("expected " + std::string(what));
  return e.atom;
}

inline std::vector<std::string> parse_parameter_list(const SExpr& e) {
  if (!e.is_list) e.fail("expected parameter list");
  std::vector<std::string> out;
  for (const auto& item : e.items) {
    const std::string& name = expect_name(item, "variable");
    if (name == "-") unsupported("typed parameters (:typing)");
    if (name.front() != '?') item.fail("parameter '" + name + "' must start with '?'");
    if (std::find(out.begin(), out.end(), name) != out.end()) item.fail("duplicate parameter " + name);
    out.push_back(name);
  }
  return out;
}

inline Atom parse_atom(const SExpr& e) {
  if (!e.is_list || e.items.empty()) e.fail("expected atom");
  const std::string& head = expect_name(e.items.front(), "predicate name");
  const std::string lhead = lower(head);
  if (unsupported_connectives().count(lhead)) unsupported(head);
  if (lhead == "and" || lhead == "not") e.fail("unexpected '" + head + "'");
  Atom a{head, {}};
  for (std::size_t i = 1; i < e.items.size(); ++i) a.args.push_back(expect_name(e.items[i], "argument"));
  return a;
}

inline std::vector<Atom> parse_conjunction(const SExpr& e) {
  if (!e.is_list) e.fail("expected formula");
  if (e.items.empty()) return {};  // "()" as the empty conjunction
  const SExpr& head = e.items.front();
  if (is_keyword(head, "and")) {
    std::vector<Atom> out;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& item = e.items[i];
      if (item.is_list && !item.items.empty() && is_keyword(item.items.front(), "not")) {
        unsupported("negative precondition (not)");
      }
      out.push_back(parse_atom(item));
    }
    return out;
  }
  if (is_keyword(head, "not")) unsupported("negative precondition (not)");
  return {parse_atom(e)};
}

inline void parse_effect(const SExpr& e, ActionSchema& a) {
  if (!e.is_list) e.fail("expected effect");
  auto one = [&](const SExpr& lit) {
    if (lit.is_list && !lit.items.empty() && is_keyword(lit.items.front(), "not")) {
      if (lit.items.size() != 2) lit.fail("'not' takes exactly one atom");
      a.del.push_back(parse_atom(lit.items[1]));
    } else {
      a.add.push_back(parse_atom(lit));
    }
  };
  if (e.items.empty()) return;
  if (is_keyword(e.items.front(), "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) one(e.items[i]);
  } else {
    one(e);
  }
}

inline ActionSchema parse_action(const SExpr& e) {
  // (:action name :parameters (...) :precondition F :effect F)
  if (e.items.size() < 2) e.fail("action needs a name");
  ActionSchema a;
  a.name = expect_name(e.items[1], "action name");
  bool have_pre = false, have_eff = false;
  for (std::size_t i = 2; i < e.items.size(); i += 2) {
    const SExpr& key = e.items[i];
    if (i + 1 >= e.items.size()) key.fail("missing value after " + key.atom);
    const SExpr& value = e.items[i + 1];
    const std::string k = key.is_list ? std::string() : lower(key.atom);
    if (k == ":parameters") {
      a.params = parse_parameter_list(value);
    } else if (k == ":precondition") {
      a.precondition = parse_conjunction(value);
      have_pre = true;
    } else if (k == ":effect") {
      parse_effect(value, a);
      have_eff = true;
    } else if (!key.is_list && key.atom.front() == ':') {
      unsupported(key.atom);
    } else {
      key.fail("unexpected token in action");
    }
  }
  if (!have_eff) e.fail("action " + a.name + " has no :effect");
  (void)have_pre;
  return a;
}

inline void check_schema_atom(const PddlDomain& d, const ActionSchema& a, const Atom& atom) {
  const PredicateDecl* decl = d.find_predicate(atom.predicate);
  if (!decl) throw Error(ErrorKind::UndeclaredPredicate, atom.predicate + " in action " + a.name);
  if (decl->arity() != atom.args.size()) {
    throw Error(ErrorKind::ArityMismatch, atom.predicate + " expects " + std::to_string(decl->arity()) +
                                              " arguments in action " + a.name);
  }
  for (const auto& arg : atom.args) {
    if (arg.front() != '?') throw Error(ErrorKind::UnsupportedFeature, "constant '" + arg + "' in schema " + a.name);
    if (std::find(a.params.begin(), a.params.end(), arg) == a.params.end()) {
      throw Error(ErrorKind::UndeclaredVariable, arg + " in action " + a.name);
    }
  }
}

inline void check_domain(const PddlDomain& d) {
  std::set<std::string> names;
  for (const auto& p : d.predicates) {
    if (!names.insert(p.name).second) throw Error(ErrorKind::InvalidSchema, "duplicate predicate " + p.name);
  }
  names.clear();
  for (const auto& a : d.actions) {
    if (!names.insert(a.name).second) throw Error(ErrorKind::InvalidSchema, "duplicate action " + a.name);
    for (const auto* list : {&a.precondition, &a.add, &a.del}) {
      for (const auto& atom : *list) check_schema_atom(d, a, atom);
    }
    for (const auto& atom : a.add) {
      if (std::find(a.del.begin(), a.del.end(), atom) != a.del.end()) {
        throw Error(ErrorKind::InvalidSchema, "action " + a.name + " both adds and deletes " + atom.predicate);
      }
    }
  }
}

inline PddlDomain parse_domain_form(const SExpr& top) {
  PddlDomain d;
  d.name = expect_name(top.items[1].items[1], "domain name");
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& section = top.items[i];
    if (!section.is_list || section.items.empty()) section.fail("expected domain section");
    const std::string key = lower(expect_name(section.items.front(), "section keyword"));
    if (key == ":requirements") {
      for (std::size_t r = 1; r < section.items.size(); ++r) {
        const std::string& req = expect_name(section.items[r], "requirement");
        if (lower(req) != ":strips") unsupported(req);
      }
    } else if (key == ":predicates") {
      for (std::size_t p = 1; p < section.items.size(); ++p) {
        const SExpr& form = section.items[p];
        if (!form.is_list || form.items.empty()) form.fail("expected predicate declaration");
        PredicateDecl decl;
        decl.name = expect_name(form.items.front(), "predicate name");
        SExpr params = form;
        params.items.erase(params.items.begin());
        decl.params = parse_parameter_list(params);
        d.predicates.push_back(std::move(decl));
      }
    } else if (key == ":action") {
      d.actions.push_back(parse_action(section));
    } else {
      unsupported(section.items.front().atom);
    }
  }
  check_domain(d);
  return d;
}

inline PddlProblem parse_problem_form(const SExpr& top) {
  PddlProblem p;
  p.name = expect_name(top.items[1].items[1], "problem name");
  std::set<std::string> objects;
  bool have_goal = false;
  auto check_atom = [&](const Atom& a, const SExpr& where) {
    for (const auto& arg : a.args) {
      if (arg.front() == '?') where.fail("variable " + arg + " in problem");
      if (!objects.count(arg)) throw Error(ErrorKind::UndeclaredObject, arg);
    }
  };
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& section = top.items[i];
    if (!section.is_list || section.items.empty()) section.fail("expected problem section");
    const std::string key = lower(expect_name(section.items.front(), "section keyword"));
    if (key == ":domain") {
      if (section.items.size() != 2) section.fail(":domain takes one name");
      p.domain_name = expect_name(section.items[1], "domain name");
    } else if (key == ":objects") {
      for (std::size_t o = 1; o < section.items.size(); ++o) {
        const std::string& name = expect_name(section.items[o], "object name");
        if (name == "-") unsupported("typed objects (:typing)");
        if (!objects.insert(name).second) throw Error(ErrorKind::InvalidSchema, "duplicate object " + name);
        p.objects.push_back(name);
      }
    } else if (key == ":init") {
      for (std::size_t a = 1; a < section.items.size(); ++a) {
        const SExpr& lit = section.items[a];
        if (lit.is_list && !lit.items.empty() && is_keyword(lit.items.front(), "not")) unsupported("not");
        p.init.push_back(parse_atom(lit));
        check_atom(p.init.back(), lit);
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) section.fail(":goal takes one formula");
      p.goal = parse_conjunction(section.items[1]);
      for (const auto& a : p.goal) check_atom(a, section);
      have_goal = true;
    } else {
      unsupported(section.items.front().atom);
    }
  }
  if (p.domain_name.empty()) top.fail("problem lacks (:domain ...)");
  if (!have_goal) top.fail("problem lacks (:goal ...)");
  return p;
}

}  // namespace detail

using PddlDocument = std::variant<PddlDomain, PddlProblem>;

inline PddlDocument parse(std::string_view text) {
  const detail::SExpr top = detail::Reader(text).read_document();
  if (!top.is_list || top.items.size() < 2 || !detail::is_keyword(top.items[0], "define")) {
    top.fail("expected (define ...)");
  }
  const detail::SExpr& header = top.items[1];
  if (!header.is_list || header.items.size() != 2) header.fail("expected (domain NAME) or (problem NAME)");
  if (detail::is_keyword(header.items[0], "domain")) return detail::parse_domain_form(top);
  if (detail::is_keyword(header.items[0], "problem")) return detail::parse_problem_form(top);
  header.fail("expected (domain NAME) or (problem NAME)");
}

inline PddlDomain parse_domain(std::string_view text) {
  auto doc = parse(text);
  if (auto* d = std::get_if<PddlDomain>(&doc)) return std::move(*d);
  throw Error(ErrorKind::InvalidArgument, "expected a domain definition, got a problem");
}

inline PddlProblem parse_problem(std::string_view text) {
  auto doc = parse(text);
  if (auto* p = std::get_if<PddlProblem>(&doc)) return std::move(*p);
  throw Error(ErrorKind::InvalidArgument, "expected a problem definition, got a domain");
}

}  // namespace bwgen::strips
