#include "ctrfact/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ctrfact {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

FormulaPtr make(Kind k, std::string name, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->name = std::move(name);
  f->left = std::move(l);
  f->right = std::move(r);
  std::size_t h = static_cast<std::size_t>(k) * 0x100000001b3ULL;
  h = mix(h, std::hash<std::string>{}(f->name));
  if (f->left) h = mix(h, f->left->hash);
  if (f->right) h = mix(h, f->right->hash);
  f->hash = h;
  return f;
}

}  // namespace

bool is_valid_atom_name(const std::string& name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return name != "true" && name != "false";
}

FormulaPtr atom(const std::string& name) {
  if (!is_valid_atom_name(name))
    throw std::invalid_argument("invalid atom name: '" + name + "'");
  return make(Kind::Atom, name, nullptr, nullptr);
}

FormulaPtr top() {
  static const FormulaPtr t = make(Kind::Top, "", nullptr, nullptr);
  return t;
}

FormulaPtr bot() {
  static const FormulaPtr b = make(Kind::Bot, "", nullptr, nullptr);
  return b;
}

FormulaPtr neg(FormulaPtr f) { return make(Kind::Not, "", std::move(f), nullptr); }

FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
  return make(Kind::And, "", std::move(a), std::move(b));
}

FormulaPtr disj(FormulaPtr a, FormulaPtr b) {
  return make(Kind::Or, "", std::move(a), std::move(b));
}

FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return make(Kind::Implies, "", std::move(a), std::move(b));
}

FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  return make(Kind::Iff, "", std::move(a), std::move(b));
}

FormulaPtr delta(FormulaPtr body) {
  if (!is_propositional(body))
    throw std::invalid_argument("body of D(...) must be propositional: " +
                                render_formula(body));
  return make(Kind::Delta, "", std::move(body), nullptr);
}

FormulaPtr box(FormulaPtr a, FormulaPtr b) {
  return make(Kind::BoxRight, "", std::move(a), std::move(b));
}

FormulaPtr diamond(FormulaPtr a, FormulaPtr b) {
  return make(Kind::DiamondRight, "", std::move(a), std::move(b));
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  if (a->kind == Kind::Atom) return a->name == b->name;
  return equal(a->left, b->left) && equal(a->right, b->right);
}

int compare(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->kind == Kind::Atom) return a->name.compare(b->name);
  if (int c = compare(a->left, b->left)) return c;
  return compare(a->right, b->right);
}

bool is_propositional(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Not:
      return is_propositional(f->left);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return is_propositional(f->left) && is_propositional(f->right);
    case Kind::Delta:
    case Kind::BoxRight:
    case Kind::DiamondRight:
      return false;
  }
  return false;
}

namespace {

bool has_conditional(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind == Kind::BoxRight || f->kind == Kind::DiamondRight) return true;
  return has_conditional(f->left) || has_conditional(f->right);
}

}  // namespace

bool is_unnested(const FormulaPtr& f) {
  if (!f) return true;
  if (f->kind == Kind::BoxRight || f->kind == Kind::DiamondRight)
    return !has_conditional(f->left) && !has_conditional(f->right);
  return is_unnested(f->left) && is_unnested(f->right);
}

namespace {

void collect_atoms(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == Kind::Atom) out.insert(f->name);
  collect_atoms(f->left, out);
  collect_atoms(f->right, out);
}

void collect_delta_bodies(const FormulaPtr& f,
                          std::set<FormulaPtr, FormulaLess>& out) {
  if (!f) return;
  if (f->kind == Kind::Delta) out.insert(f->left);
  collect_delta_bodies(f->left, out);
  collect_delta_bodies(f->right, out);
}

}  // namespace

std::set<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

std::vector<FormulaPtr> delta_bodies(const FormulaPtr& f) {
  std::set<FormulaPtr, FormulaLess> bodies;
  collect_delta_bodies(f, bodies);
  return {bodies.begin(), bodies.end()};
}

ParseError::ParseError(const std::string& msg, int line_, int col_)
    : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                         std::to_string(col_) + ")"),
      line(line_),
      col(col_) {}

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  Comma,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Box,
  Diamond,
  Ident,
  True,
  False,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto peek_at = [&](std::size_t off) -> char {
    return i + off < text.size() ? text[i + off] : '\0';
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    int tl = line, tc = col;
    auto emit = [&](Tok k, std::size_t len) {
      out.push_back({k, text.substr(i, len), tl, tc});
      i += len;
      col += static_cast<int>(len);
    };
    if (c == '(') {
      emit(Tok::LParen, 1);
    } else if (c == ')') {
      emit(Tok::RParen, 1);
    } else if (c == ',') {
      emit(Tok::Comma, 1);
    } else if (c == '~') {
      emit(Tok::Not, 1);
    } else if (c == '&') {
      emit(Tok::And, 1);
    } else if (c == '|') {
      emit(Tok::Or, 1);
    } else if (c == '-') {
      if (peek_at(1) != '>')
        throw ParseError("expected '->' after '-'", tl, tc);
      emit(Tok::Implies, 2);
    } else if (c == '<') {
      if (peek_at(1) == '>' && peek_at(2) == '-' && peek_at(3) == '>')
        emit(Tok::Diamond, 4);
      else if (peek_at(1) == '-' && peek_at(2) == '>')
        emit(Tok::Iff, 3);
      else
        throw ParseError("expected '<->' or '<>->' after '<'", tl, tc);
    } else if (c == '[') {
      if (peek_at(1) == ']' && peek_at(2) == '-' && peek_at(3) == '>')
        emit(Tok::Box, 4);
      else
        throw ParseError("expected '[]->' after '['", tl, tc);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t len = 1;
      while (std::isalnum(static_cast<unsigned char>(peek_at(len))) ||
             peek_at(len) == '_')
        ++len;
      std::string word = text.substr(i, len);
      if (word == "true")
        emit(Tok::True, len);
      else if (word == "false")
        emit(Tok::False, len);
      else
        emit(Tok::Ident, len);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct Parser {
  const std::vector<Token>& ts;
  std::size_t pos = 0;

  const Token& peek() const { return ts[pos]; }
  const Token& get() { return ts[pos++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.col);
  }

  FormulaPtr parse_cond() {
    FormulaPtr lhs = parse_iff();
    if (peek().kind == Tok::Box || peek().kind == Tok::Diamond) {
      Token op = get();
      FormulaPtr rhs = parse_iff();
      if (peek().kind == Tok::Box || peek().kind == Tok::Diamond)
        fail("'[]->' and '<>->' are non-associative; add parentheses", peek());
      lhs = op.kind == Tok::Box ? box(lhs, rhs) : diamond(lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr parse_iff() {
    FormulaPtr lhs = parse_implies();
    while (peek().kind == Tok::Iff) {
      get();
      lhs = iff(lhs, parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (peek().kind == Tok::Implies) {
      get();
      return implies(lhs, parse_implies());  // right-associative
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (peek().kind == Tok::Or) {
      get();
      lhs = disj(lhs, parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_unary();
    while (peek().kind == Tok::And) {
      get();
      lhs = conj(lhs, parse_unary());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (peek().kind == Tok::Not) {
      get();
      return neg(parse_unary());
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        get();
        FormulaPtr f = parse_cond();
        if (peek().kind != Tok::RParen) fail("expected ')'", peek());
        get();
        return f;
      }
      case Tok::True:
        get();
        return top();
      case Tok::False:
        get();
        return bot();
      case Tok::Ident: {
        Token id = get();
        if (id.text == "D" && peek().kind == Tok::LParen) {
          get();
          const Token& body_start = peek();
          FormulaPtr body = parse_cond();
          if (peek().kind != Tok::RParen) fail("expected ')'", peek());
          get();
          if (!is_propositional(body))
            fail("body of D(...) must be propositional", body_start);
          return delta(body);
        }
        return atom(id.text);
      }
      default:
        fail("expected a formula", t);
    }
  }
};

FormulaPtr parse_entry(const std::string& text) {
  std::vector<Token> ts = lex(text);
  Parser p{ts};
  FormulaPtr f = p.parse_cond();
  if (p.peek().kind != Tok::End)
    p.fail("unexpected input after formula", p.peek());
  return f;
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return parse_entry(text); }

FormulaPtr parse_prop(const std::string& text) {
  FormulaPtr f = parse_entry(text);
  if (!is_propositional(f))
    throw ParseError("expected a propositional formula", 1, 1);
  return f;
}

namespace {

// Higher rank binds tighter; used to decide parenthesization when printing.
int rank(Kind k) {
  switch (k) {
    case Kind::Atom:
    case Kind::Top:
    case Kind::Bot:
    case Kind::Delta:
      return 6;
    case Kind::Not:
      return 5;
    case Kind::And:
      return 4;
    case Kind::Or:
      return 3;
    case Kind::Implies:
      return 2;
    case Kind::Iff:
      return 1;
    case Kind::BoxRight:
    case Kind::DiamondRight:
      return 0;
  }
  return 6;
}

void render(const FormulaPtr& f, std::string& out) {
  auto child = [&](const FormulaPtr& c, bool parens) {
    if (parens) {
      out += '(';
      render(c, out);
      out += ')';
    } else {
      render(c, out);
    }
  };
  int r = rank(f->kind);
  switch (f->kind) {
    case Kind::Atom:
      out += f->name;
      break;
    case Kind::Top:
      out += "true";
      break;
    case Kind::Bot:
      out += "false";
      break;
    case Kind::Delta:
      out += "D(";
      render(f->left, out);
      out += ')';
      break;
    case Kind::Not:
      out += '~';
      child(f->left, rank(f->left->kind) < r);
      break;
    case Kind::And:
    case Kind::Or:
    case Kind::Iff: {
      // Left-associative: the right operand needs parentheses at equal rank.
      const char* op = f->kind == Kind::And  ? " & "
                       : f->kind == Kind::Or ? " | "
                                             : " <-> ";
      child(f->left, rank(f->left->kind) < r);
      out += op;
      child(f->right, rank(f->right->kind) <= r);
      break;
    }
    case Kind::Implies:
      // Right-associative: the left operand needs parentheses at equal rank.
      child(f->left, rank(f->left->kind) <= r);
      out += " -> ";
      child(f->right, rank(f->right->kind) < r);
      break;
    case Kind::BoxRight:
    case Kind::DiamondRight:
      // Non-associative: parenthesize any conditional operand.
      child(f->left, rank(f->left->kind) <= r);
      out += f->kind == Kind::BoxRight ? " []-> " : " <>-> ";
      child(f->right, rank(f->right->kind) <= r);
      break;
  }
}

}  // namespace

std::string render_formula(const FormulaPtr& f) {
  std::string out;
  render(f, out);
  return out;
}

Term negate_term(const Term& t) {
  Term out;
  for (const auto& [a, sign] : t) out[a] = !sign;
  return out;
}

FormulaPtr term_formula(const Term& t) {
  if (t.empty()) return top();
  FormulaPtr f;
  for (const auto& [a, sign] : t) {
    FormulaPtr lit = sign ? atom(a) : neg(atom(a));
    f = f ? conj(f, lit) : lit;
  }
  return f;
}

std::string render_term(const Term& t) {
  if (t.empty()) return "true";
  std::string out;
  for (const auto& [a, sign] : t) {
    if (!out.empty()) out += " & ";
    if (!sign) out += '~';
    out += a;
  }
  return out;
}

std::vector<Term> enumerate_terms(const std::set<std::string>& atoms, int bound) {
  if (static_cast<int>(atoms.size()) > bound)
    throw BoundError("enumerate_terms: " + std::to_string(atoms.size()) +
                     " atoms exceed the bound of " + std::to_string(bound));
  std::vector<std::string> order(atoms.begin(), atoms.end());
  std::vector<Term> out;
  out.reserve(std::size_t{1} << order.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << order.size()); ++mask) {
    Term t;
    for (std::size_t i = 0; i < order.size(); ++i)
      t[order[i]] = ((mask >> i) & 1) == 0;
    out.push_back(std::move(t));
  }
  return out;
}

bool is_strict_subterm(const Term& sub, const Term& full) {
  if (sub.size() >= full.size()) return false;
  for (const auto& [a, sign] : sub) {
    auto it = full.find(a);
    if (it == full.end() || it->second != sign) return false;
  }
  return true;
}

bool term_holds(const Term& t, const std::set<std::string>& valuation) {
  for (const auto& [a, sign] : t)
    if ((valuation.count(a) != 0) != sign) return false;
  return true;
}

namespace {

void collect_term(const FormulaPtr& n, Term& t) {
  if (n->kind == Kind::And) {
    collect_term(n->left, t);
    collect_term(n->right, t);
    return;
  }
  bool sign = true;
  FormulaPtr lit = n;
  if (lit->kind == Kind::Not) {
    sign = false;
    lit = lit->left;
  }
  if (lit->kind != Kind::Atom)
    throw std::invalid_argument(
        "term: expected a conjunction of literals, found " +
        render_formula(n));
  auto [it, fresh] = t.emplace(lit->name, sign);
  if (!fresh && it->second != sign)
    throw std::invalid_argument("term: atom '" + lit->name +
                                "' occurs with both signs");
}

}  // namespace

Term parse_term(const std::string& text) {
  FormulaPtr f = parse_prop(text);
  Term t;
  if (f->kind == Kind::Top) return t;  // render_term of the empty term
  collect_term(f, t);
  return t;
}

EquationalFormula::EquationalFormula(std::string head_, FormulaPtr body_)
    : head(std::move(head_)), body(std::move(body_)) {
  if (!is_valid_atom_name(head))
    throw std::invalid_argument("invalid equation head: '" + head + "'");
  if (!is_propositional(body))
    throw std::invalid_argument("equation body for '" + head +
                                "' must be propositional");
  if (atoms_of(body).count(head))
    throw std::invalid_argument("equation head '" + head +
                                "' occurs in its own body");
}

FormulaPtr EquationalFormula::as_iff() const { return iff(atom(head), body); }

}  // namespace ctrfact
