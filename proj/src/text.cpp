#include "quotdef/text.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace quotdef {

namespace {

std::string describe(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, std::vector<std::string> expected,
                       std::string found)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
            (kind == Kind::UnknownIdentifier ? "unknown identifier '" + found + "'"
                                             : "expected " + describe(expected) + ", found " + found)),
      kind_(kind),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

// ---------------------------------------------------------------- printing

namespace {

void print_to(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out += t.name(); return;
    case Term::Kind::One: out += '1'; return;
    case Term::Kind::Sum: {
      std::vector<const Term*> rights;
      const Term* leaf = &t;
      for (; leaf->kind() == Term::Kind::Sum; leaf = &leaf->left()) rights.push_back(&leaf->right());
      out.append(rights.size(), '(');
      print_to(*leaf, out);
      for (auto it = rights.rbegin(); it != rights.rend(); ++it) {
        out += " + ";
        print_to(**it, out);
        out += ')';
      }
      return;
    }
    case Term::Kind::FApp:
      out += "F(";
      print_to(t.arg(), out);
      out += ')';
      return;
  }
}

void print_to(const Formula& phi, std::string& out) {
  switch (phi.kind()) {
    case Formula::Kind::Eq:
      out += '(';
      print_to(phi.lhs(), out);
      out += " = ";
      print_to(phi.rhs(), out);
      out += ')';
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      out += '(';
      print_to(phi.first(), out);
      out += phi.kind() == Formula::Kind::And ? " & " : " | ";
      print_to(phi.second(), out);
      out += ')';
      return;
    case Formula::Kind::Exists:
      out += "exists ";
      out += phi.var();
      if (auto s = std::get_if<SearchTo>(&phi.hint())) {
        out += " <= ";
        print_to(s->bound, out);
      }
      out += " . ";
      print_to(phi.body(), out);
      return;
  }
}

}  // namespace

std::string print(const Term& t) {
  std::string out;
  print_to(t, out);
  return out;
}

std::string print(const Formula& phi) {
  std::string out;
  print_to(phi, out);
  return out;
}

// ---------------------------------------------------------------- lexing

namespace {

enum class Tok { LParen, RParen, Plus, Eq, And, Or, Dot, Le, One, Ident, F, Exists, BadWord, BadChar, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string token_name(Tok t) {
  switch (t) {
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Plus: return "'+'";
    case Tok::Eq: return "'='";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Dot: return "'.'";
    case Tok::Le: return "'<='";
    case Tok::One: return "'1'";
    case Tok::Ident: return "identifier";
    case Tok::F: return "'F'";
    case Tok::Exists: return "'exists'";
    case Tok::BadWord:
    case Tok::BadChar: return "invalid token";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(1);
      continue;
    }
    Token tok{Tok::BadChar, std::string(1, c), line, col};
    std::size_t len = 1;
    switch (c) {
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case '+': tok.kind = Tok::Plus; break;
      case '=': tok.kind = Tok::Eq; break;
      case '&': tok.kind = Tok::And; break;
      case '|': tok.kind = Tok::Or; break;
      case '.': tok.kind = Tok::Dot; break;
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          tok.kind = Tok::Le;
          tok.text = "<=";
          len = 2;
        }
        break;
      default:
        if (word_char(c)) {
          while (i + len < text.size() && word_char(text[i + len])) ++len;
          tok.text = std::string(text.substr(i, len));
          if (tok.text == "1") {
            tok.kind = Tok::One;
          } else if (tok.text == "F") {
            tok.kind = Tok::F;
          } else if (tok.text == "exists") {
            tok.kind = Tok::Exists;
          } else if (is_identifier(tok.text)) {
            tok.kind = Tok::Ident;
          } else {
            tok.kind = Tok::BadWord;
          }
        }
    }
    out.push_back(std::move(tok));
    advance(len);
  }
  out.push_back(Token{Tok::End, "end of input", line, col});
  return out;
}

// ---------------------------------------------------------------- parsing

struct Backtrack {};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  template <typename F>
  auto run(F&& body) {
    try {
      auto out = body(*this);
      expect(Tok::End);
      return out;
    } catch (const Backtrack&) {
      const auto& t = toks_[best_pos_];
      std::vector<std::string> expected(best_expected_.begin(), best_expected_.end());
      throw ParseError(ParseError::Kind::Syntax, t.line, t.column, expected,
                       t.kind == Tok::End ? t.text : "'" + t.text + "'");
    }
  }

  // Left-nested sums are read iteratively: the opening parentheses of a
  // left spine are counted, then closed one summand at a time.
  Term term() {
    std::size_t open = 0;
    while (peek().kind == Tok::LParen) {
      ++pos_;
      ++open;
    }
    Term acc = atom();
    for (; open > 0; --open) {
      expect(Tok::Plus);
      Term b = term();
      expect(Tok::RParen);
      acc = Term::sum(std::move(acc), std::move(b));
    }
    return acc;
  }

  Formula formula() { return formula_unit().first; }

 private:
  // Returns the formula and whether it was a bare (unparenthesised) equation.
  std::pair<Formula, bool> formula_unit() {
    if (peek().kind == Tok::Exists) {
      ++pos_;
      const Token& v = peek();
      if (v.kind == Tok::BadWord) unknown(v);
      if (v.kind != Tok::Ident) fail({"identifier"});
      ++pos_;
      WitnessHint hint = Unbounded{};
      if (peek().kind == Tok::Le) {
        ++pos_;
        hint = SearchTo{term()};
      }
      expect(Tok::Dot, {"'<='", "'.'"});
      return {Formula::exists(v.text, std::move(hint), formula()), false};
    }
    if (peek().kind == Tok::BadWord) unknown(peek());

    const std::size_t save = pos_;
    if (std::optional<Formula> eq = try_bare_equation()) return {*eq, true};
    pos_ = save;

    if (peek().kind != Tok::LParen) fail({"'('", "'exists'", "term"});
    ++pos_;
    auto [first, bare] = formula_unit();
    if (bare && peek().kind == Tok::RParen) {
      ++pos_;
      return {first, false};
    }
    const Tok op = peek().kind;
    if (op != Tok::And && op != Tok::Or) {
      if (bare) {
        fail({"'&'", "'|'", "')'"});
      }
      fail({"'&'", "'|'"});
    }
    ++pos_;
    Formula second = formula();
    expect(Tok::RParen, {"')'"});
    return {op == Tok::And ? Formula::conj(first, second) : Formula::disj(first, second), false};
  }

  std::optional<Formula> try_bare_equation() {
    try {
      Term lhs = term();
      expect(Tok::Eq, {"'='", "'+'"});
      Term rhs = term();
      return Formula::eq(std::move(lhs), std::move(rhs));
    } catch (const Backtrack&) {
      return std::nullopt;
    }
  }

  Term atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::One: ++pos_; return Term::one();
      case Tok::Ident: ++pos_; return Term::var(t.text);
      case Tok::F: {
        ++pos_;
        expect(Tok::LParen);
        Term arg = term();
        expect(Tok::RParen);
        return Term::f(std::move(arg));
      }
      case Tok::BadWord: unknown(t);
      default: fail({"'1'", "identifier", "'F'", "'('"});
    }
  }

  const Token& peek() const { return toks_[pos_]; }

  void expect(Tok kind, std::initializer_list<std::string> names = {}) {
    if (peek().kind == kind) {
      ++pos_;
      return;
    }
    if (peek().kind == Tok::BadWord) unknown(peek());
    if (names.size() == 0) {
      fail({token_name(kind)});
    }
    fail(names);
  }

  [[noreturn]] void fail(std::initializer_list<std::string> expected) {
    if (pos_ > best_pos_) {
      best_pos_ = pos_;
      best_expected_.clear();
    }
    if (pos_ == best_pos_) {
      for (const auto& e : expected) {
        if (std::find(best_expected_.begin(), best_expected_.end(), e) == best_expected_.end()) {
          best_expected_.push_back(e);
        }
      }
    }
    throw Backtrack{};
  }

  [[noreturn]] void unknown(const Token& t) {
    throw ParseError(ParseError::Kind::UnknownIdentifier, t.line, t.column, {"identifier"}, t.text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t best_pos_ = 0;
  std::vector<std::string> best_expected_;
};

}  // namespace

Term parse_term(std::string_view text) {
  Parser p(text);
  return p.run([](Parser& q) { return q.term(); });
}

Formula parse_formula(std::string_view text) {
  Parser p(text);
  return p.run([](Parser& q) { return q.formula(); });
}

}  // namespace quotdef
