#ifndef CATSEC_DIAGRAM_HPP
#define CATSEC_DIAGRAM_HPP

// A textual string-diagram DSL. `a ; b` is diagram-order sequential
// composition (run a, then b, i.e. b after a); `*` is the tensor and binds
// tighter than `;`. Built-in generators: id, swap, copy, del, unif, mult,
// unit, inv, act. Integer objects denote anonymous n-element sets carrying
// the cyclic group structure Z_n; named objects come from the environment.
//
//   program := decl* expr
//   decl    := "let" IDENT "=" par ";"        (sequential bodies need parens)
//   expr    := par (";" par)*
//   par     := atom ("*" atom)*
//   atom    := builtin "[" obj ("," obj)? "]" | IDENT | "(" expr ")"
//   obj     := IDENT | INT
// Comments run from '#' to end of line.

#include <cctype>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "finstoch.hpp"
#include "group.hpp"

namespace catsec {

struct ObjectDef {
  FinSet set;
  std::optional<FiniteGroup> group;
};

struct Environment {
  std::map<std::string, ObjectDef> objects;
  std::map<std::string, Morphism> morphisms;
};

class diagram_error : public std::runtime_error {
 public:
  diagram_error(const std::string& msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

struct Obj {
  bool is_int = false;
  std::size_t size = 0;    // when is_int
  std::string name;        // when !is_int

  friend bool operator==(const Obj& a, const Obj& b) {
    return a.is_int == b.is_int && a.size == b.size && a.name == b.name;
  }
};

struct Ast;
using AstPtr = std::shared_ptr<Ast>;

struct Ast {
  enum class Kind { seq, par, id, swp, cpy, del, unif, mult, unit, inv, act, ref };
  Kind kind;
  std::vector<AstPtr> children;  // seq / par
  std::vector<Obj> objs;         // builtin arguments
  std::string name;              // ref
  int line = 0, col = 0;
  // Filled by typecheck:
  WireList dom, cod;
  bool typed = false;
};

struct Program {
  std::vector<std::pair<std::string, AstPtr>> lets;
  AstPtr body;
};

inline bool ast_equal(const AstPtr& a, const AstPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (!(a->objs == b->objs)) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!ast_equal(a->children[i], b->children[i])) return false;
  return true;
}

inline bool program_equal(const Program& a, const Program& b) {
  if (a.lets.size() != b.lets.size()) return false;
  for (std::size_t i = 0; i < a.lets.size(); ++i)
    if (a.lets[i].first != b.lets[i].first || !ast_equal(a.lets[i].second, b.lets[i].second))
      return false;
  return ast_equal(a.body, b.body);
}

namespace detail {

struct Token {
  enum class Kind { ident, integer, lbrack, rbrack, lparen, rparen, comma, semi, star, let, eq, eof };
  Kind kind;
  std::string text;
  std::size_t value = 0;
  int line = 1, col = 1;
};

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, std::size_t v = 0) {
    out.push_back({k, std::move(t), v, line, col});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      std::string t = text.substr(start, i - start);
      push(Token::Kind::integer, t, std::stoull(t));
      col += static_cast<int>(t.size());
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      std::string t = text.substr(start, i - start);
      push(t == "let" ? Token::Kind::let : Token::Kind::ident, t);
      col += static_cast<int>(t.size());
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '[': k = Token::Kind::lbrack; break;
      case ']': k = Token::Kind::rbrack; break;
      case '(': k = Token::Kind::lparen; break;
      case ')': k = Token::Kind::rparen; break;
      case ',': k = Token::Kind::comma; break;
      case ';': k = Token::Kind::semi; break;
      case '*': k = Token::Kind::star; break;
      case '=': k = Token::Kind::eq; break;
      default:
        throw diagram_error(std::string("unexpected character '") + c + "'", line, col);
    }
    push(k, std::string(1, c));
    ++col;
    ++i;
  }
  push(Token::Kind::eof, "<eof>");
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse_program() {
    Program p;
    while (cur().kind == Token::Kind::let) {
      advance();
      Token name = expect(Token::Kind::ident, "binding name");
      expect(Token::Kind::eq, "'='");
      AstPtr value = parse_par();
      expect(Token::Kind::semi, "';' after let binding");
      p.lets.emplace_back(name.text, std::move(value));
    }
    p.body = parse_expr();
    expect(Token::Kind::eof, "end of input");
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  void advance() { ++pos_; }
  Token expect(Token::Kind k, const std::string& what) {
    if (cur().kind != k)
      throw diagram_error("expected " + what + ", found '" + cur().text + "'", cur().line,
                          cur().col);
    Token t = cur();
    advance();
    return t;
  }

  AstPtr parse_expr() {
    AstPtr first = parse_par();
    if (cur().kind != Token::Kind::semi) return first;
    auto node = std::make_shared<Ast>();
    node->kind = Ast::Kind::seq;
    node->line = first->line;
    node->col = first->col;
    node->children.push_back(std::move(first));
    while (cur().kind == Token::Kind::semi) {
      advance();
      node->children.push_back(parse_par());
    }
    return node;
  }

  AstPtr parse_par() {
    AstPtr first = parse_atom();
    if (cur().kind != Token::Kind::star) return first;
    auto node = std::make_shared<Ast>();
    node->kind = Ast::Kind::par;
    node->line = first->line;
    node->col = first->col;
    node->children.push_back(std::move(first));
    while (cur().kind == Token::Kind::star) {
      advance();
      node->children.push_back(parse_atom());
    }
    return node;
  }

  Obj parse_obj() {
    if (cur().kind == Token::Kind::integer) {
      Obj o;
      o.is_int = true;
      o.size = cur().value;
      if (o.size == 0) throw diagram_error("object size must be >= 1", cur().line, cur().col);
      advance();
      return o;
    }
    Token t = expect(Token::Kind::ident, "object name or size");
    Obj o;
    o.name = t.text;
    return o;
  }

  AstPtr parse_atom() {
    static const std::map<std::string, std::pair<Ast::Kind, int>> builtins = {
        {"id", {Ast::Kind::id, 1}},     {"swap", {Ast::Kind::swp, 2}},
        {"copy", {Ast::Kind::cpy, 1}},  {"del", {Ast::Kind::del, 1}},
        {"unif", {Ast::Kind::unif, 1}}, {"mult", {Ast::Kind::mult, 1}},
        {"unit", {Ast::Kind::unit, 1}}, {"inv", {Ast::Kind::inv, 1}},
        {"act", {Ast::Kind::act, 2}},
    };
    if (cur().kind == Token::Kind::lparen) {
      advance();
      AstPtr inner = parse_expr();
      expect(Token::Kind::rparen, "')'");
      return inner;
    }
    Token t = expect(Token::Kind::ident, "generator, name, or '('");
    auto node = std::make_shared<Ast>();
    node->line = t.line;
    node->col = t.col;
    auto it = builtins.find(t.text);
    if (it == builtins.end() || cur().kind != Token::Kind::lbrack) {
      if (it != builtins.end())
        throw diagram_error("built-in '" + t.text + "' needs '[...]' arguments", t.line, t.col);
      node->kind = Ast::Kind::ref;
      node->name = t.text;
      return node;
    }
    node->kind = it->second.first;
    advance();  // '['
    node->objs.push_back(parse_obj());
    for (int k = 1; k < it->second.second; ++k) {
      expect(Token::Kind::comma, "','");
      node->objs.push_back(parse_obj());
    }
    expect(Token::Kind::rbrack, "']'");
    return node;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Program parse(const std::string& text) {
  return detail::Parser(detail::lex(text)).parse_program();
}

namespace detail {

inline std::string obj_text(const Obj& o) { return o.is_int ? std::to_string(o.size) : o.name; }

inline void print_ast(const AstPtr& a, std::ostream& os, bool parenthesize) {
  static const char* names[] = {"",    "",     "id",   "swap", "copy", "del",
                                "unif", "mult", "unit", "inv",  "act",  ""};
  switch (a->kind) {
    case Ast::Kind::seq: {
      if (parenthesize) os << "(";
      for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (i) os << " ; ";
        print_ast(a->children[i], os, true);
      }
      if (parenthesize) os << ")";
      break;
    }
    case Ast::Kind::par: {
      for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (i) os << " * ";
        // Atoms only below par; a nested seq or par needs parens.
        bool p = a->children[i]->kind == Ast::Kind::seq || a->children[i]->kind == Ast::Kind::par;
        print_ast(a->children[i], os, p);
      }
      break;
    }
    case Ast::Kind::ref:
      os << a->name;
      break;
    default: {
      os << names[static_cast<int>(a->kind)] << "[";
      for (std::size_t i = 0; i < a->objs.size(); ++i) {
        if (i) os << ",";
        os << obj_text(a->objs[i]);
      }
      os << "]";
    }
  }
}

}  // namespace detail

inline std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const auto& [name, value] : p.lets) {
    os << "let " << name << " = ";
    detail::print_ast(value, os, value->kind == Ast::Kind::seq);
    os << ";\n";
  }
  detail::print_ast(p.body, os, false);
  return os.str();
}

inline std::string pretty_print(const AstPtr& a) {
  std::ostringstream os;
  detail::print_ast(a, os, false);
  return os.str();
}

namespace detail {

struct ResolvedObj {
  FinSet set;
  std::optional<FiniteGroup> group;
};

inline ResolvedObj resolve_obj(const Obj& o, const Environment& env, int line, int col) {
  if (o.is_int) {
    // Anonymous n-element sets carry the Z_n structure so that group
    // generators over integer literals are well-formed.
    return {FinSet(o.size), FiniteGroup::cyclic(o.size)};
  }
  auto it = env.objects.find(o.name);
  if (it == env.objects.end()) throw diagram_error("unbound object '" + o.name + "'", line, col);
  return {it->second.set, it->second.group};
}

inline const FiniteGroup& require_group(const ResolvedObj& r, const std::string& what, int line,
                                        int col) {
  if (!r.group)
    throw diagram_error(what + " requires a group-structured object", line, col);
  return *r.group;
}

inline std::string wires_text(const WireList& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.arity(); ++i)
    s += (i ? "," : "") + std::to_string(w.wires[i].size);
  return s + "]";
}

struct Checker {
  const Environment& env;
  std::map<std::string, AstPtr> lets;  // typed let bodies

  void check(const AstPtr& a) {
    switch (a->kind) {
      case Ast::Kind::seq: {
        for (const auto& c : a->children) check(c);
        for (std::size_t i = 0; i + 1 < a->children.size(); ++i)
          if (!(a->children[i]->cod == a->children[i + 1]->dom))
            throw diagram_error("interface mismatch: " + wires_text(a->children[i]->cod) +
                                    " vs " + wires_text(a->children[i + 1]->dom),
                                a->children[i + 1]->line, a->children[i + 1]->col);
        a->dom = a->children.front()->dom;
        a->cod = a->children.back()->cod;
        break;
      }
      case Ast::Kind::par: {
        WireList dom, cod;
        for (const auto& c : a->children) {
          check(c);
          dom = dom.concat(c->dom);
          cod = cod.concat(c->cod);
        }
        a->dom = dom;
        a->cod = cod;
        break;
      }
      case Ast::Kind::ref: {
        auto lt = lets.find(a->name);
        if (lt != lets.end()) {
          a->dom = lt->second->dom;
          a->cod = lt->second->cod;
          break;
        }
        auto mt = env.morphisms.find(a->name);
        if (mt == env.morphisms.end())
          throw diagram_error("unbound name '" + a->name + "'", a->line, a->col);
        a->dom = mt->second.dom;
        a->cod = mt->second.cod;
        break;
      }
      case Ast::Kind::id: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        a->dom = WireList{r.set};
        a->cod = WireList{r.set};
        break;
      }
      case Ast::Kind::swp: {
        auto r0 = resolve_obj(a->objs[0], env, a->line, a->col);
        auto r1 = resolve_obj(a->objs[1], env, a->line, a->col);
        a->dom = WireList{r0.set, r1.set};
        a->cod = WireList{r1.set, r0.set};
        break;
      }
      case Ast::Kind::cpy: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        a->dom = WireList{r.set};
        a->cod = WireList{r.set, r.set};
        break;
      }
      case Ast::Kind::del: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        a->dom = WireList{r.set};
        a->cod = unit_wires();
        break;
      }
      case Ast::Kind::unif: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        require_group(r, "unif", a->line, a->col);
        a->dom = unit_wires();
        a->cod = WireList{r.set};
        break;
      }
      case Ast::Kind::mult: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        require_group(r, "mult", a->line, a->col);
        a->dom = WireList{r.set, r.set};
        a->cod = WireList{r.set};
        break;
      }
      case Ast::Kind::unit: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        require_group(r, "unit", a->line, a->col);
        a->dom = unit_wires();
        a->cod = WireList{r.set};
        break;
      }
      case Ast::Kind::inv: {
        auto r = resolve_obj(a->objs[0], env, a->line, a->col);
        require_group(r, "inv", a->line, a->col);
        a->dom = WireList{r.set};
        a->cod = WireList{r.set};
        break;
      }
      case Ast::Kind::act: {
        auto rz = resolve_obj(a->objs[0], env, a->line, a->col);
        auto rg = resolve_obj(a->objs[1], env, a->line, a->col);
        require_group(rg, "act", a->line, a->col);
        a->dom = WireList{rz.set, rg.set};
        a->cod = WireList{rg.set};
        break;
      }
    }
    a->typed = true;
  }
};

}  // namespace detail

// Type-checks the program against the environment; annotates every node
// with dom/cod and returns the body.
inline AstPtr typecheck(Program& p, const Environment& env) {
  detail::Checker ck{env, {}};
  for (auto& [name, value] : p.lets) {
    if (ck.lets.count(name) || env.morphisms.count(name))
      throw diagram_error("duplicate name '" + name + "'", value->line, value->col);
    ck.check(value);
    ck.lets[name] = value;
  }
  ck.check(p.body);
  return p.body;
}

namespace detail {

struct Evaluator {
  const Environment& env;
  const std::map<std::string, AstPtr>& lets;

  Morphism eval(const AstPtr& a) const {
    if (!a->typed) throw std::logic_error("eval: term was not type-checked");
    switch (a->kind) {
      case Ast::Kind::seq: {
        Morphism acc = eval(a->children[0]);
        for (std::size_t i = 1; i < a->children.size(); ++i)
          acc = compose(eval(a->children[i]), acc);
        return acc;
      }
      case Ast::Kind::par: {
        Morphism acc = eval(a->children[0]);
        for (std::size_t i = 1; i < a->children.size(); ++i)
          acc = tensor(acc, eval(a->children[i]));
        return acc;
      }
      case Ast::Kind::ref: {
        auto lt = lets.find(a->name);
        if (lt != lets.end()) return eval(lt->second);
        return env.morphisms.at(a->name);
      }
      case Ast::Kind::id:
        return identity(a->dom);
      case Ast::Kind::swp:
        return swap(a->dom.wires[0], a->dom.wires[1]);
      case Ast::Kind::cpy:
        return copy(a->dom.wires[0]);
      case Ast::Kind::del:
        return discard(a->dom.wires[0]);
      case Ast::Kind::unif:
        return uniform(a->cod.wires[0]);
      case Ast::Kind::mult:
        return group_generators(*resolve_obj(a->objs[0], env, a->line, a->col).group).mult;
      case Ast::Kind::unit:
        return group_generators(*resolve_obj(a->objs[0], env, a->line, a->col).group).unit;
      case Ast::Kind::inv:
        return group_generators(*resolve_obj(a->objs[0], env, a->line, a->col).group).inv;
      case Ast::Kind::act: {
        auto rz = resolve_obj(a->objs[0], env, a->line, a->col);
        auto rg = resolve_obj(a->objs[1], env, a->line, a->col);
        const FiniteGroup& G = *rg.group;
        const std::size_t n = rz.set.size, m = G.carrier.size;
        std::vector<double> mat(m * n * m, 0.0);
        for (std::size_t e = 0; e < n; ++e)
          for (std::size_t h = 0; h < m; ++h) mat[G.power(h, e) * (n * m) + e * m + h] = 1.0;
        return Morphism(WireList{rz.set, G.carrier}, WireList{G.carrier}, std::move(mat));
      }
    }
    throw std::logic_error("eval: unreachable");
  }
};

}  // namespace detail

// Evaluates a type-checked program body.
inline Morphism eval(const Program& p, const Environment& env) {
  std::map<std::string, AstPtr> lets;
  for (const auto& [name, value] : p.lets) lets[name] = value;
  return detail::Evaluator{env, lets}.eval(p.body);
}

// Environment JSON: {"objects": {name: {"size": n, "group": optional Cayley
// table}}, "morphisms": {name: {"dom": [...], "cod": [...], "matrix": [...]}}}
inline Environment load_environment(const nlohmann::json& j) {
  Environment env;
  if (j.contains("objects"))
    for (auto it = j["objects"].begin(); it != j["objects"].end(); ++it) {
      ObjectDef def;
      std::size_t size = it.value().at("size").get<std::size_t>();
      def.set = FinSet(size, it.key());
      if (it.value().contains("group")) {
        auto table = it.value()["group"].get<std::vector<std::vector<std::size_t>>>();
        def.group = FiniteGroup::from_table(std::move(table), it.key());
      }
      env.objects.emplace(it.key(), std::move(def));
    }
  auto wires = [&](const nlohmann::json& arr) {
    WireList w;
    for (const auto& o : arr) {
      if (o.is_number_unsigned())
        w.wires.push_back(FinSet(o.get<std::size_t>()));
      else
        w.wires.push_back(env.objects.at(o.get<std::string>()).set);
    }
    return w;
  };
  if (j.contains("morphisms"))
    for (auto it = j["morphisms"].begin(); it != j["morphisms"].end(); ++it) {
      Morphism m(wires(it.value().at("dom")), wires(it.value().at("cod")),
                 it.value().at("matrix").get<std::vector<double>>());
      env.morphisms.emplace(it.key(), std::move(m));
    }
  return env;
}

inline Environment load_environment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open environment file: " + path);
  nlohmann::json j;
  in >> j;
  return load_environment(j);
}

}  // namespace catsec

#endif  // CATSEC_DIAGRAM_HPP
