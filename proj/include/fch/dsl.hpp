#pragma once

// Workbench language: lexer, term AST, parser and canonical printer.
//
//   ring Z
//   module M over Z = coker [[2]]
//   task derive F=tensor(M) A=M n=1
//
// Declarations end at ';' or a newline outside brackets. A declaration body
// is a run of terms; a term is a word, an integer, a call w(t, ...), a list
// [t, ...], a block {label: t, ...} or an assignment key=t.

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fch::dsl {

struct Span {
  std::size_t line = 1, col = 1;
};

struct Diagnostic {
  Span at;
  std::string message;
  std::string str() const { return std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + message; }
};

constexpr std::size_t max_nesting = 64;
constexpr long long max_literal = 1'000'000'000LL;

// ---------------------------------------------------------------- lexer

enum class Tok { Word, Int, LBrack, RBrack, LBrace, RBrace, LParen, RParen, Comma, Colon, Equals, Arrow, Sep, End };

struct Token {
  Tok kind;
  std::string text;
  Span at;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Word: return "name";
    case Tok::Int: return "integer";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::Sep: return "end of declaration";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline bool word_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
inline bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\'' || c == '.'; }

/// Newlines inside brackets, braces or parens are dropped; runs of
/// separators collapse to one.
inline std::vector<Token> lex(const std::string& src, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  int depth = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok t, std::string text, Span at) {
    if (t == Tok::Sep && (out.empty() || out.back().kind == Tok::Sep)) return;
    out.push_back({t, std::move(text), at});
  };
  while (i < src.size()) {
    const unsigned char c = src[i];
    const Span at{line, col};
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (c == '\n' || c == ';') {
      if (c == ';' || depth == 0) push(Tok::Sep, ";", at);
      advance(1);
    } else if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
    } else if (std::isdigit(c) || (c == '-' && i + 1 < src.size() && std::isdigit((unsigned char)src[i + 1]))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
      push(Tok::Int, src.substr(i, j - i), at);
      advance(j - i);
    } else if (word_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && word_char((unsigned char)src[j])) ++j;
      push(Tok::Word, src.substr(i, j - i), at);
      advance(j - i);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      push(Tok::Arrow, "->", at);
      advance(2);
    } else {
      Tok t;
      switch (c) {
        case '[': t = Tok::LBrack; ++depth; break;
        case ']': t = Tok::RBrack; depth = depth > 0 ? depth - 1 : 0; break;
        case '{': t = Tok::LBrace; ++depth; break;
        case '}': t = Tok::RBrace; depth = depth > 0 ? depth - 1 : 0; break;
        case '(': t = Tok::LParen; ++depth; break;
        case ')': t = Tok::RParen; depth = depth > 0 ? depth - 1 : 0; break;
        case ',': t = Tok::Comma; break;
        case ':': t = Tok::Colon; break;
        case '=': t = Tok::Equals; break;
        default: {
          std::string shown = std::isprint(c) ? std::string(1, char(c)) : "byte " + std::to_string(int(c));
          diags.push_back({at, "unexpected character " + shown});
          advance(1);
          continue;
        }
      }
      push(t, std::string(1, char(c)), at);
      advance(1);
    }
  }
  push(Tok::Sep, ";", {line, col});
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------- AST

struct Term {
  enum class Kind { Word, Int, Call, List, Block, Assign };
  Kind kind = Kind::Word;
  std::string text;  // word, integer literal, call head, assignment key
  long long value = 0;
  std::vector<Term> items;                        // call args, list items, assigned value
  std::vector<std::pair<std::string, Term>> entries;  // block
  Span span;

  bool is_word() const { return kind == Kind::Word; }
  bool is_word(const std::string& w) const { return kind == Kind::Word && text == w; }
  bool is_int() const { return kind == Kind::Int; }
  bool is_list() const { return kind == Kind::List; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.text == b.text && a.value == b.value && a.items == b.items && a.entries == b.entries;
  }
};

struct Decl {
  std::string keyword;  // ring module morphism category diagram diagmor functor ses task
  std::string name;
  std::string over;            // module, diagram
  std::string source, target;  // morphism, diagmor
  std::vector<Term> body;
  Span span;

  friend bool operator==(const Decl& a, const Decl& b) {
    return a.keyword == b.keyword && a.name == b.name && a.over == b.over && a.source == b.source &&
           a.target == b.target && a.body == b.body;
  }
};

struct Doc {
  std::vector<Decl> decls;
  friend bool operator==(const Doc&, const Doc&) = default;
};

struct ParseResult {
  Doc doc;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// ---------------------------------------------------------------- parser

namespace detail {

struct SyntaxError {
  Diagnostic d;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Doc parse(std::vector<Diagnostic>& diags) {
    Doc doc;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Sep) {
        ++pos_;
        continue;
      }
      try {
        doc.decls.push_back(decl());
      } catch (const SyntaxError& e) {
        diags.push_back(e.d);
        while (peek().kind != Tok::Sep && peek().kind != Tok::End) ++pos_;
      }
    }
    return doc;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw SyntaxError{{at.at, msg}}; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what + ", found " + found(peek()));
    return t_[pos_++];
  }
  static std::string found(const Token& t) {
    if (t.kind == Tok::Word || t.kind == Tok::Int) return "'" + t.text + "'";
    return tok_name(t.kind);
  }
  std::string name(const char* what) { return expect(Tok::Word, what).text; }

  static bool keyword(const std::string& w) {
    for (const char* k : {"ring", "module", "morphism", "category", "diagram", "diagmor", "functor", "ses", "task"})
      if (w == k) return true;
    return false;
  }

  Decl decl() {
    const Token& kw = peek();
    if (kw.kind != Tok::Word || !keyword(kw.text)) fail(kw, "expected a declaration keyword, found " + found(kw));
    ++pos_;
    Decl d;
    d.keyword = kw.text;
    d.span = kw.at;
    if (d.keyword == "task") {
      d.body = terms(true);
      if (d.body.empty()) fail(peek(), "task needs a kind");
      return finish(d);
    }
    d.name = name("a declaration name");
    if (d.keyword == "module" || d.keyword == "diagram") {
      if (!(peek().kind == Tok::Word && peek().text == "over")) fail(peek(), "expected 'over', found " + found(peek()));
      ++pos_;
      d.over = name("a ring or category name");
    }
    if (d.keyword == "morphism" || d.keyword == "diagmor") {
      expect(Tok::Colon, "':'");
      d.source = name("a source name");
      expect(Tok::Arrow, "'->'");
      d.target = name("a target name");
    }
    if (d.keyword == "ring" && peek().kind == Tok::Sep) return finish(d);
    expect(Tok::Equals, "'='");
    d.body = terms(false);
    if (d.body.empty()) fail(peek(), "empty definition");
    return finish(d);
  }

  Decl finish(Decl d) {
    if (peek().kind != Tok::Sep) fail(peek(), "unexpected " + found(peek()));
    return d;
  }

  std::vector<Term> terms(bool assignments) {
    std::vector<Term> out;
    while (starts_term(peek().kind)) out.push_back(term(0, assignments));
    return out;
  }

  static bool starts_term(Tok k) { return k == Tok::Word || k == Tok::Int || k == Tok::LBrack || k == Tok::LBrace; }

  Term term(std::size_t depth, bool assignments = false) {
    if (depth >= max_nesting) fail(peek(), "nesting deeper than " + std::to_string(max_nesting));
    const Token& t = peek();
    Term out;
    out.span = t.at;
    switch (t.kind) {
      case Tok::Int: {
        ++pos_;
        out.kind = Term::Kind::Int;
        out.text = t.text;
        out.value = literal(t);
        return out;
      }
      case Tok::Word: {
        ++pos_;
        out.text = t.text;
        if (assignments && peek().kind == Tok::Equals) {
          ++pos_;
          out.kind = Term::Kind::Assign;
          out.items.push_back(term(depth + 1));
        } else if (peek().kind == Tok::LParen) {
          ++pos_;
          out.kind = Term::Kind::Call;
          out.items = sequence(Tok::RParen, depth);
        }
        return out;
      }
      case Tok::LBrack:
        ++pos_;
        out.kind = Term::Kind::List;
        out.items = sequence(Tok::RBrack, depth);
        return out;
      case Tok::LBrace: {
        ++pos_;
        out.kind = Term::Kind::Block;
        while (peek().kind != Tok::RBrace) {
          const Token& l = peek();
          if (l.kind != Tok::Word && l.kind != Tok::Int) fail(l, "expected a label, found " + found(l));
          ++pos_;
          expect(Tok::Colon, "':'");
          out.entries.emplace_back(l.text, term(depth + 1));
          if (peek().kind == Tok::Comma || peek().kind == Tok::Sep) ++pos_;
          else if (peek().kind != Tok::RBrace) fail(peek(), "expected ',' or '}', found " + found(peek()));
        }
        ++pos_;
        return out;
      }
      default:
        fail(t, "expected a term, found " + found(t));
    }
  }

  // items with optional commas up to the closing token
  std::vector<Term> sequence(Tok close, std::size_t depth) {
    std::vector<Term> items;
    while (peek().kind != close) {
      if (!starts_term(peek().kind)) fail(peek(), std::string("expected a term or ") + tok_name(close) + ", found " + found(peek()));
      items.push_back(term(depth + 1));
      if (peek().kind == Tok::Comma) ++pos_;
    }
    ++pos_;
    return items;
  }

  long long literal(const Token& t) const {
    long long v = 0;
    const bool neg = t.text[0] == '-';
    for (std::size_t k = neg ? 1 : 0; k < t.text.size(); ++k) {
      v = v * 10 + (t.text[k] - '0');
      if (v > max_literal) fail(t, "integer literal " + t.text.substr(0, 24) + " out of range");
    }
    return neg ? -v : v;
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ParseResult parse(const std::string& text) {
  ParseResult r;
  auto toks = lex(text, r.diagnostics);
  r.doc = detail::Parser(std::move(toks)).parse(r.diagnostics);
  return r;
}

// ---------------------------------------------------------------- printer

inline std::string print(const Term& t) {
  auto join = [](const std::vector<Term>& xs) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + print(xs[k]);
    return s;
  };
  switch (t.kind) {
    case Term::Kind::Word:
    case Term::Kind::Int: return t.text;
    case Term::Kind::Call: return t.text + "(" + join(t.items) + ")";
    case Term::Kind::List: return "[" + join(t.items) + "]";
    case Term::Kind::Assign: return t.text + "=" + print(t.items.at(0));
    case Term::Kind::Block: {
      if (t.entries.empty()) return "{}";
      std::string s = "{ ";
      for (std::size_t k = 0; k < t.entries.size(); ++k)
        s += (k ? ", " : "") + t.entries[k].first + ": " + print(t.entries[k].second);
      return s + " }";
    }
  }
  return {};
}

inline std::string print(const Decl& d) {
  std::string s = d.keyword;
  if (!d.name.empty()) s += " " + d.name;
  if (!d.over.empty()) s += " over " + d.over;
  if (!d.source.empty()) s += " : " + d.source + " -> " + d.target;
  if (!d.body.empty()) s += d.keyword == "task" ? "" : " =";
  for (const auto& t : d.body) s += " " + print(t);
  return s;
}

inline std::string print(const Doc& doc) {
  std::string s;
  for (const auto& d : doc.decls) s += print(d) + "\n";
  return s;
}

}  // namespace fch::dsl
