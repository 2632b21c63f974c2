// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "loop_model.hpp"

#include "errors.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdio>
#include <optional>

namespace loopterm {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Colon,
  Plus,
  Minus,
  Star,
  Slash,
  EqEq,
  Ge,
  Le,
  Gt,
  Lt,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  bool primed = false;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::End, "", false, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_'))
          t.text += advance();
        if (pos_ < src_.size() && src_[pos_] == '\'') {
          advance();
          t.primed = true;
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Tok::Number;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '.'))
          t.text += advance();
      } else {
        advance();
        auto two = [&](char next) {
          if (pos_ < src_.size() && src_[pos_] == next) {
            advance();
            return true;
          }
          return false;
        };
        switch (c) {
        case '(':
          t.kind = Tok::LParen;
          break;
        case ')':
          t.kind = Tok::RParen;
          break;
        case '{':
          t.kind = Tok::LBrace;
          break;
        case '}':
          t.kind = Tok::RBrace;
          break;
        case ',':
          t.kind = Tok::Comma;
          break;
        case ';':
          t.kind = Tok::Semi;
          break;
        case ':':
          t.kind = Tok::Colon;
          break;
        case '+':
          t.kind = Tok::Plus;
          break;
        case '-':
          t.kind = Tok::Minus;
          break;
        case '*':
          t.kind = Tok::Star;
          break;
        case '/':
          t.kind = Tok::Slash;
          break;
        case '=':
          two('=');
          t.kind = Tok::EqEq;
          break;
        case '>':
          t.kind = two('=') ? Tok::Ge : Tok::Gt;
          break;
        case '<':
          t.kind = two('=') ? Tok::Le : Tok::Lt;
          break;
        default:
          throw ParseError(ErrorCode::Parse,
                           std::string("unexpected character '") + c + "'",
                           t.line, t.column);
        }
      }
      out.push_back(std::move(t));
    }
  }

private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' ||
                 (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// Affine expression over (x, x'): coeffs . z + constant.
struct Affine {
  Vec coeffs;
  Rational constant = 0;

  bool is_constant() const { return is_zero(coeffs); }
};

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  ConstraintLoop parse() {
    expect_ident("loop");
    expect(Tok::LParen, "'('");
    std::vector<const Token *> name_toks;
    name_toks.push_back(&expect(Tok::Ident, "variable name"));
    while (peek().kind == Tok::Comma) {
      next();
      name_toks.push_back(&expect(Tok::Ident, "variable name"));
    }
    expect(Tok::RParen, "')'");
    for (const Token *t : name_toks) {
      if (t->primed)
        fail(*t, "declared variable may not be primed");
      if (is_keyword(t->text))
        fail(*t, "'" + t->text + "' is reserved");
      for (const auto &n : loop_.names)
        if (n == t->text)
          fail(*t, "duplicate variable '" + t->text + "'");
      loop_.names.push_back(t->text);
    }
    if (loop_.names.size() > 2)
      throw ParseError(ErrorCode::Unsupported,
                       "loops of dimension " +
                           std::to_string(loop_.names.size()) +
                           " are not supported (d must be 1 or 2)",
                       name_toks[2]->line, name_toks[2]->column);
    loop_.dim = loop_.names.size();
    expect(Tok::LBrace, "'{'");
    while (peek().kind == Tok::Ident &&
           (peek().text == "guard" || peek().text == "step")) {
      const Token &section = next();
      if (section.primed)
        fail(section, "unexpected prime");
      expect(Tok::Colon, "':'");
      const bool is_guard = section.text == "guard";
      while (peek().kind != Tok::RBrace && !at_section()) {
        parse_constraint(is_guard);
        expect(Tok::Semi, "';'");
      }
    }
    expect(Tok::RBrace, "'}' or a section ('guard:' / 'step:')");
    if (peek().kind != Tok::End)
      fail(peek(), "trailing input after loop");
    return std::move(loop_);
  }

private:
  static bool is_keyword(const std::string &s) {
    return s == "loop" || s == "guard" || s == "step";
  }

  bool at_section() const {
    return peek().kind == Tok::Ident &&
           (peek().text == "guard" || peek().text == "step") &&
           pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::Colon;
  }

  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token &t, const std::string &msg) const {
    throw ParseError(ErrorCode::Parse, msg, t.line, t.column);
  }

  const Token &expect(Tok kind, const std::string &what) {
    if (peek().kind != kind)
      fail(peek(), "expected " + what + describe(peek()));
    return next();
  }

  void expect_ident(const std::string &word) {
    if (peek().kind != Tok::Ident || peek().text != word)
      fail(peek(), "expected '" + word + "'" + describe(peek()));
    next();
  }

  static std::string describe(const Token &t) {
    if (t.kind == Tok::End)
      return " but reached end of input";
    if (t.kind == Tok::Ident || t.kind == Tok::Number)
      return " but found '" + t.text + (t.primed ? "'" : "") + "'";
    return "";
  }

  Affine constant(const Rational &c) const {
    return Affine{zeros(2 * loop_.dim), c};
  }

  void parse_constraint(bool is_guard) {
    const Token &start = peek();
    Affine lhs = parse_expr();
    const Token &op = next();
    Affine rhs = parse_expr();
    Affine diff{sub(lhs.coeffs, rhs.coeffs), lhs.constant - rhs.constant};
    LinearRow row;
    switch (op.kind) {
    case Tok::EqEq:
      row = {diff.coeffs, Relation::Eq, -diff.constant};
      break;
    case Tok::Ge:
      row = {diff.coeffs, Relation::Ge, -diff.constant};
      break;
    case Tok::Le:
      row = {negate(diff.coeffs), Relation::Ge, diff.constant};
      break;
    case Tok::Gt:
    case Tok::Lt:
      throw ParseError(ErrorCode::StrictInequality,
                       "strict inequalities are not supported; use >= or <=",
                       op.line, op.column);
    default:
      fail(op, "expected a comparison (==, >=, <=)");
    }
    if (is_guard) {
      for (std::size_t i = loop_.dim; i < 2 * loop_.dim; ++i)
        if (sgn(row.coeffs[i]) != 0)
          fail(start, "guard constraints may only mention unprimed variables");
      row.coeffs.resize(loop_.dim);
      loop_.guard.push_back(std::move(row));
    } else {
      loop_.body.push_back(std::move(row));
    }
  }

  Affine parse_expr() {
    Affine acc = parse_term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = next().kind == Tok::Minus;
      Affine t = parse_term();
      if (minus) {
        acc.coeffs = sub(acc.coeffs, t.coeffs);
        acc.constant -= t.constant;
      } else {
        acc.coeffs = add(acc.coeffs, t.coeffs);
        acc.constant += t.constant;
      }
    }
    return acc;
  }

  Affine parse_term() {
    Affine acc = parse_unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token &op = next();
      Affine rhs = parse_unary();
      if (op.kind == Tok::Star) {
        if (acc.is_constant()) {
          Rational c = acc.constant;
          acc = Affine{scale(rhs.coeffs, c), rhs.constant * c};
        } else if (rhs.is_constant()) {
          acc = Affine{scale(acc.coeffs, rhs.constant),
                       acc.constant * rhs.constant};
        } else {
          fail(op, "nonlinear product of variables");
        }
      } else {
        if (!rhs.is_constant())
          fail(op, "division by a variable");
        if (sgn(rhs.constant) == 0)
          fail(op, "division by zero");
        Rational inv = 1 / rhs.constant;
        acc = Affine{scale(acc.coeffs, inv), acc.constant * inv};
      }
    }
    return acc;
  }

  Affine parse_unary() {
    if (peek().kind == Tok::Minus) {
      next();
      Affine a = parse_unary();
      return Affine{negate(a.coeffs), -a.constant};
    }
    if (peek().kind == Tok::Plus) {
      next();
      return parse_unary();
    }
    return parse_primary();
  }

  Affine parse_primary() {
    const Token &t = next();
    switch (t.kind) {
    case Tok::Number: {
      try {
        return constant(parse_rational(t.text));
      } catch (const Error &) {
        fail(t, "malformed number '" + t.text + "'");
      }
    }
    case Tok::Ident: {
      for (std::size_t i = 0; i < loop_.dim; ++i)
        if (loop_.names[i] == t.text) {
          Affine a = constant(0);
          a.coeffs[t.primed ? loop_.dim + i : i] = 1;
          return a;
        }
      fail(t, "unknown variable '" + t.text + "'");
    }
    case Tok::LParen: {
      Affine a = parse_expr();
      expect(Tok::RParen, "')'");
      return a;
    }
    default:
      fail(t, "expected a number, variable or '('" + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ConstraintLoop loop_;
};

Rational json_rational(const nlohmann::json &v, const char *field) {
  if (v.is_string())
    return parse_rational(v.get<std::string>());
  if (v.is_number_integer())
    return Rational(Integer(std::to_string(v.get<long long>()), 10));
  throw ParseError(ErrorCode::Parse,
                   std::string("field '") + field +
                       "': rationals must be strings \"p/q\" or integers",
                   0, 0);
}

void json_rows(const nlohmann::json &j, const char *mat, const char *vec,
               std::size_t width, Relation rel, std::vector<LinearRow> &out) {
  if (!j.contains(mat) && !j.contains(vec))
    return;
  if (!j.contains(mat) || !j.contains(vec) || !j[mat].is_array() ||
      !j[vec].is_array())
    throw ParseError(ErrorCode::Parse,
                     std::string("'") + mat + "' and '" + vec +
                         "' must both be arrays",
                     0, 0);
  const auto &m = j[mat];
  const auto &v = j[vec];
  if (m.size() != v.size())
    throw ParseError(ErrorCode::Parse,
                     std::string("'") + mat + "' and '" + vec +
                         "' have different row counts",
                     0, 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].is_array() || m[i].size() != width)
      throw ParseError(ErrorCode::Parse,
                       std::string("row ") + std::to_string(i) + " of '" + mat +
                           "' must have " + std::to_string(width) + " entries",
                       0, 0);
    LinearRow row{Vec(width), rel, json_rational(v[i], vec)};
    for (std::size_t c = 0; c < width; ++c)
      row.coeffs[c] = json_rational(m[i][c], mat);
    out.push_back(std::move(row));
  }
}

std::string term_text(const Rational &c, const std::string &var, bool first) {
  std::string s;
  Rational a = abs(c);
  if (first)
    s = sgn(c) < 0 ? "-" : "";
  else
    s = sgn(c) < 0 ? " - " : " + ";
  if (a != 1)
    s += to_string(a) + "*";
  return s + var;
}

} // namespace

ConstraintLoop parse_loop(std::string_view text) { return Parser(text).parse(); }

ConstraintLoop parse_loop_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer())
    throw ParseError(ErrorCode::Parse, "loop JSON needs an integer field 'd'",
                     0, 0);
  const long long d = j["d"].get<long long>();
  if (d < 1 || d > 2)
    throw ParseError(ErrorCode::Unsupported,
                     "loops of dimension " + std::to_string(d) +
                         " are not supported (d must be 1 or 2)",
                     0, 0);
  ConstraintLoop loop;
  loop.dim = static_cast<std::size_t>(d);
  if (j.contains("names")) {
    for (const auto &n : j["names"])
      loop.names.push_back(n.get<std::string>());
    if (loop.names.size() != loop.dim)
      throw ParseError(ErrorCode::Parse, "'names' must list d variables", 0, 0);
  } else {
    static const char *defaults[] = {"x", "y"};
    for (std::size_t i = 0; i < loop.dim; ++i)
      loop.names.emplace_back(defaults[i]);
  }
  json_rows(j, "B", "b", loop.dim, Relation::Ge, loop.guard);
  json_rows(j, "Beq", "beq", loop.dim, Relation::Eq, loop.guard);
  json_rows(j, "A", "a", 2 * loop.dim, Relation::Ge, loop.body);
  json_rows(j, "Aeq", "aeq", 2 * loop.dim, Relation::Eq, loop.body);
  return loop;
}

ConstraintLoop load_loop(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  if (i < text.size() && text[i] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(ErrorCode::Parse, std::string("invalid JSON: ") + e.what(),
                       0, 0);
    }
    return parse_loop_json(j);
  }
  return parse_loop(text);
}

std::string print_loop(const ConstraintLoop &loop) {
  auto row_text = [&](const LinearRow &r) {
    std::string s;
    bool first = true;
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
      if (sgn(r.coeffs[i]) == 0)
        continue;
      std::string var = loop.names[i % loop.dim];
      if (i >= loop.dim)
        var += "'";
      s += term_text(r.coeffs[i], var, first);
      first = false;
    }
    if (first)
      s = "0";
    s += r.rel == Relation::Eq ? " == " : " >= ";
    return s + to_string(r.rhs);
  };
  std::string out = "loop(";
  for (std::size_t i = 0; i < loop.names.size(); ++i)
    out += (i ? ", " : "") + loop.names[i];
  out += ") {\n  guard:\n";
  for (const auto &r : loop.guard)
    out += "    " + row_text(r) + ";\n";
  out += "  step:\n";
  for (const auto &r : loop.body)
    out += "    " + row_text(r) + ";\n";
  return out + "}\n";
}

TransitionRelation loop_to_relation(const ConstraintLoop &loop) {
  const std::size_t d = loop.dim;
  std::vector<LinearRow> rows;
  for (const auto &g : loop.guard) {
    Vec c = g.coeffs;
    c.resize(2 * d, Rational(0));
    rows.push_back({std::move(c), g.rel, g.rhs});
  }
  rows.insert(rows.end(), loop.body.begin(), loop.body.end());
  return {d, HPolyhedron(2 * d, std::move(rows))};
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error(ErrorCode::Internal, "SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string relation_hash(const TransitionRelation &rel) {
  std::string canon = "d=" + std::to_string(rel.dim) + "\n";
  const HPolyhedron norm = rel.k.normalized();
  for (const auto &r : norm.rows()) {
    for (const auto &c : r.coeffs)
      canon += to_string(c) + " ";
    canon += r.rel == Relation::Eq ? "== " : ">= ";
    canon += to_string(r.rhs) + "\n";
  }
  return "sha256:" + sha256_hex(canon);
}

} // namespace loopterm
