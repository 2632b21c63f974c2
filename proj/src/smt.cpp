// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "smt.hpp"

#include "errors.hpp"
#include "heuristics.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <sstream>

extern char **environ;

namespace loopterm {

namespace {

const char *kAxis[] = {"x", "y"};

std::string shape_selector(ConeKind k) {
  std::string s = to_string(k);
  std::string out = "shape_";
  for (char c : s) {
    if (std::isupper(static_cast<unsigned char>(c)) && out.size() > 6)
      out += '_';
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out; // shape_zero, shape_half_plane, ...
}

std::string numeral(const Rational &q) {
  auto nat = [](const Integer &z) { return z.get_str() + ".0"; };
  Rational a = abs(q);
  std::string s = a.get_den() == 1
                      ? nat(a.get_num())
                      : "(/ " + nat(a.get_num()) + " " + nat(a.get_den()) + ")";
  return sgn(q) < 0 ? "(- " + s + ")" : s;
}

using Terms = std::vector<std::pair<Rational, std::string>>;

std::string linear(const Terms &terms) {
  std::vector<std::string> parts;
  for (const auto &[c, t] : terms) {
    if (sgn(c) == 0)
      continue;
    parts.push_back(c == 1 ? t : "(* " + numeral(c) + " " + t + ")");
  }
  if (parts.empty())
    return "0.0";
  if (parts.size() == 1)
    return parts[0];
  std::string s = "(+";
  for (const auto &p : parts)
    s += " " + p;
  return s + ")";
}

std::string conj(const std::vector<std::string> &parts) {
  if (parts.empty())
    return "true";
  if (parts.size() == 1)
    return parts[0];
  std::string s = "(and";
  for (const auto &p : parts)
    s += "\n    " + p;
  return s + ")";
}

struct Names {
  std::size_t d;

  std::string m(std::size_t i, std::size_t j) const {
    return "m" + std::to_string(i + 1) + std::to_string(j + 1);
  }
  std::string g(std::size_t k, std::size_t i) const {
    return "g" + std::to_string(k + 1) + kAxis[i];
  }
  std::string v(std::size_t i) const { return std::string("v") + kAxis[i]; }
  std::string w(std::size_t i) const { return std::string("w") + kAxis[i]; }
  std::string lam_m(std::size_t k, std::size_t j) const {
    return "lam_m" + std::to_string(k + 1) + "_" + std::to_string(j + 1);
  }
  std::string lam_d(std::size_t j) const {
    return "lam_d_" + std::to_string(j + 1);
  }
  std::size_t gens() const { return d == 1 ? 1 : 2; }

  std::vector<std::string> reals() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out.push_back(m(i, j));
    for (std::size_t k = 0; k < gens(); ++k)
      for (std::size_t i = 0; i < d; ++i)
        out.push_back(g(k, i));
    for (std::size_t i = 0; i < d; ++i)
      out.push_back(v(i));
    for (std::size_t i = 0; i < d; ++i)
      out.push_back(w(i));
    for (std::size_t k = 0; k < gens(); ++k)
      for (std::size_t j = 0; j < gens(); ++j)
        out.push_back(lam_m(k, j));
    for (std::size_t j = 0; j < gens(); ++j)
      out.push_back(lam_d(j));
    return out;
  }

  // Component i of M g_k (or M e_k for the plane).
  std::string mg(std::size_t k, std::size_t i) const {
    Terms t;
    for (std::size_t j = 0; j < d; ++j)
      t.push_back({1, "(* " + m(i, j) + " " + g(k, j) + ")"});
    return linear(t);
  }
};

class Encoder {
public:
  Encoder(const TransitionRelation &rel) : rel_(rel), n_{rel.dim} {
    const HPolyhedron rec = homogenized(rel.k);
    rec_ = rec.rows();
  }

  // Rows of rec(K) at (z, z'), with each side given by component terms.
  void rec_at(const std::vector<std::string> &z, const std::vector<std::string> &zp,
              bool both_signs, std::vector<std::string> &out) const {
    const std::size_t d = n_.d;
    for (const auto &r : rec_) {
      Terms t;
      for (std::size_t i = 0; i < d; ++i) {
        t.push_back({r.coeffs[i], z[i]});
        t.push_back({r.coeffs[d + i], zp[i]});
      }
      const char *op = (r.rel == Relation::Eq || both_signs) ? "=" : ">=";
      out.push_back(std::string("(") + op + " " + linear(t) + " 0.0)");
    }
  }

  std::vector<std::string> gen(std::size_t k) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n_.d; ++i)
      out.push_back(n_.g(k, i));
    return out;
  }

  std::vector<std::string> image(std::size_t k) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n_.d; ++i)
      out.push_back(n_.mg(k, i));
    return out;
  }

  // M g_k == sum_j lam_m(k, j) g_j over the given j.
  void image_in_span(std::size_t k, const std::vector<std::size_t> &js,
                     std::vector<std::string> &out) const {
    for (std::size_t i = 0; i < n_.d; ++i) {
      Terms t;
      for (std::size_t j : js)
        t.push_back({1, "(* " + n_.lam_m(k, j) + " " + n_.g(j, i) + ")"});
      out.push_back("(= " + n_.mg(k, i) + " " + linear(t) + ")");
    }
  }

  void step_in_span(const std::vector<std::size_t> &js,
                    std::vector<std::string> &out) const {
    for (std::size_t i = 0; i < n_.d; ++i) {
      Terms t;
      for (std::size_t j : js)
        t.push_back({1, "(* " + n_.lam_d(j) + " " + n_.g(j, i) + ")"});
      out.push_back("(= (- " + n_.w(i) + " " + n_.v(i) + ") " + linear(t) + ")");
    }
  }

  std::string nonzero(std::size_t k) const {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < n_.d; ++i)
      parts.push_back("(not (= " + n_.g(k, i) + " 0.0))");
    if (parts.size() == 1)
      return parts[0];
    return "(or " + parts[0] + " " + parts[1] + ")";
  }

  std::string independent() const {
    return "(not (= (- (* g1x g2y) (* g1y g2x)) 0.0))";
  }

  std::string nonneg(const std::string &name) const {
    return "(>= " + name + " 0.0)";
  }

  std::vector<std::string> shape(ConeKind k) const {
    std::vector<std::string> c;
    switch (k) {
    case ConeKind::Zero:
      for (std::size_t i = 0; i < n_.d; ++i)
        c.push_back("(= " + n_.w(i) + " " + n_.v(i) + ")");
      break;
    case ConeKind::Ray:
    case ConeKind::Line: {
      const bool line = k == ConeKind::Line;
      c.push_back(nonzero(0));
      image_in_span(0, {0}, c);
      if (!line)
        c.push_back(nonneg(n_.lam_m(0, 0)));
      rec_at(gen(0), image(0), line, c);
      step_in_span({0}, c);
      if (!line)
        c.push_back(nonneg(n_.lam_d(0)));
      break;
    }
    case ConeKind::Sector:
      c.push_back(independent());
      image_in_span(0, {0, 1}, c);
      image_in_span(1, {0, 1}, c);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          c.push_back(nonneg(n_.lam_m(a, b)));
      rec_at(gen(0), image(0), false, c);
      rec_at(gen(1), image(1), false, c);
      step_in_span({0, 1}, c);
      c.push_back(nonneg(n_.lam_d(0)));
      c.push_back(nonneg(n_.lam_d(1)));
      break;
    case ConeKind::HalfPlane:
      // g1 spans the lineality, g2 is the generator.
      c.push_back(independent());
      image_in_span(0, {0}, c);
      image_in_span(1, {0, 1}, c);
      c.push_back(nonneg(n_.lam_m(1, 1)));
      rec_at(gen(0), image(0), true, c);
      rec_at(gen(1), image(1), false, c);
      step_in_span({0, 1}, c);
      c.push_back(nonneg(n_.lam_d(1)));
      break;
    case ConeKind::Plane:
      for (std::size_t j = 0; j < n_.d; ++j) {
        std::vector<std::string> e, me;
        for (std::size_t i = 0; i < n_.d; ++i) {
          e.push_back(i == j ? "1.0" : "0.0");
          me.push_back(n_.m(i, j));
        }
        rec_at(e, me, true, c);
      }
      break;
    }
    return c;
  }

  std::vector<std::string> step_rows() const {
    std::vector<std::string> out;
    const std::size_t d = n_.d;
    for (const auto &r : rel_.k.rows()) {
      Terms t;
      for (std::size_t i = 0; i < d; ++i) {
        t.push_back({r.coeffs[i], n_.v(i)});
        t.push_back({r.coeffs[d + i], n_.w(i)});
      }
      const char *op = r.rel == Relation::Eq ? "=" : ">=";
      out.push_back(std::string("(") + op + " " + linear(t) + " " +
                    numeral(r.rhs) + ")");
    }
    return out;
  }

  const Names &names() const { return n_; }

private:
  const TransitionRelation &rel_;
  Names n_;
  std::vector<LinearRow> rec_;
};

// ---- evaluation ------------------------------------------------------------

bool is_numeral(const std::string &s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) ||
                        (s[0] == '.' && s.size() > 1));
}

SmtValue eval(const SExpr &e, const Assignment &a);

Rational eval_num(const SExpr &e, const Assignment &a) {
  SmtValue v = eval(e, a);
  if (auto *q = std::get_if<Rational>(&v))
    return *q;
  throw Error(ErrorCode::InvalidArgument, "expected a number: " + e.to_string());
}

bool eval_bool(const SExpr &e, const Assignment &a) {
  SmtValue v = eval(e, a);
  if (auto *b = std::get_if<bool>(&v))
    return *b;
  throw Error(ErrorCode::InvalidArgument, "expected a boolean: " + e.to_string());
}

SmtValue eval(const SExpr &e, const Assignment &a) {
  if (e.is_atom) {
    if (e.atom == "true")
      return true;
    if (e.atom == "false")
      return false;
    if (is_numeral(e.atom))
      return parse_rational(e.atom);
    auto it = a.find(e.atom);
    if (it == a.end())
      throw Error(ErrorCode::InvalidArgument, "unassigned symbol " + e.atom);
    return it->second;
  }
  if (e.list.empty() || !e.list[0].is_atom)
    throw Error(ErrorCode::InvalidArgument, "malformed term " + e.to_string());
  const std::string &op = e.list[0].atom;
  const std::size_t n = e.list.size() - 1;
  auto arg = [&](std::size_t i) -> const SExpr & { return e.list[i + 1]; };

  if (op == "and" || op == "or") {
    bool acc = op == "and";
    for (std::size_t i = 0; i < n; ++i)
      acc = op == "and" ? (acc && eval_bool(arg(i), a))
                        : (acc || eval_bool(arg(i), a));
    return acc;
  }
  if (op == "not" && n == 1)
    return !eval_bool(arg(0), a);
  if (op == "=>" && n == 2)
    return !eval_bool(arg(0), a) || eval_bool(arg(1), a);
  if (op == "ite" && n == 3)
    return eval_bool(arg(0), a) ? eval(arg(1), a) : eval(arg(2), a);
  if (op == "=" && n == 2)
    return eval(arg(0), a) == eval(arg(1), a);
  if ((op == ">=" || op == "<=" || op == ">" || op == "<") && n == 2) {
    Rational l = eval_num(arg(0), a), r = eval_num(arg(1), a);
    if (op == ">=")
      return l >= r;
    if (op == "<=")
      return l <= r;
    if (op == ">")
      return l > r;
    return l < r;
  }
  if (op == "+" || op == "*") {
    Rational acc = op == "+" ? 0 : 1;
    for (std::size_t i = 0; i < n; ++i)
      {
      Rational x = eval_num(arg(i), a);
      if (op == "+")
        acc += x;
      else
        acc *= x;
    }
    return acc;
  }
  if (op == "-" && n >= 1) {
    Rational acc = eval_num(arg(0), a);
    if (n == 1)
      return Rational(-acc);
    for (std::size_t i = 1; i < n; ++i)
      acc -= eval_num(arg(i), a);
    return acc;
  }
  if (op == "/" && n == 2) {
    Rational den = eval_num(arg(1), a);
    if (den == 0)
      throw Error(ErrorCode::InvalidArgument, "division by zero");
    return Rational(eval_num(arg(0), a) / den);
  }
  throw Error(ErrorCode::InvalidArgument, "unsupported operator " + op);
}

// Model literal: value plus whether any part was printed approximately.
std::optional<Rational> literal_value(const SExpr &e, bool &inexact) {
  if (e.is_atom) {
    std::string s = e.atom;
    if (!s.empty() && s.back() == '?') {
      s.pop_back();
      inexact = true;
    }
    if (!is_numeral(s))
      return std::nullopt;
    try {
      return parse_rational(s);
    } catch (const Error &) {
      return std::nullopt;
    }
  }
  if (e.list.empty() || !e.list[0].is_atom)
    return std::nullopt;
  const std::string &op = e.list[0].atom;
  std::vector<Rational> args;
  for (std::size_t i = 1; i < e.list.size(); ++i) {
    auto v = literal_value(e.list[i], inexact);
    if (!v)
      return std::nullopt;
    args.push_back(*v);
  }
  if (op == "-" && args.size() == 1)
    return Rational(-args[0]);
  if (op == "-" && args.size() == 2)
    return Rational(args[0] - args[1]);
  if (op == "+" && !args.empty()) {
    Rational s = 0;
    for (const auto &q : args)
      s += q;
    return s;
  }
  if (op == "/" && args.size() == 2 && args[1] != 0)
    return Rational(args[0] / args[1]);
  return std::nullopt;
}

void collect_definitions(const SExpr &e, std::map<std::string, std::string> &out) {
  if (e.is_atom)
    return;
  if (e.list.size() == 5 && e.list[0].is_atom && e.list[0].atom == "define-fun" &&
      e.list[1].is_atom && !e.list[2].is_atom && e.list[2].list.empty()) {
    out[e.list[1].atom] = e.list[4].to_string();
    return;
  }
  for (const auto &c : e.list)
    collect_definitions(c, out);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

std::string tail(std::string_view s, std::size_t max) {
  std::string t = trim(s);
  return t.size() <= max ? t : "..." + t.substr(t.size() - max);
}

SolverOutcome tool_error(std::string message) {
  SolverOutcome o;
  o.status = SolverStatus::ToolError;
  o.message = std::move(message);
  return o;
}

} // namespace

std::vector<ConeKind> shapes_for_dim(std::size_t d) {
  if (d == 1)
    return {ConeKind::Zero, ConeKind::Ray, ConeKind::Line};
  return {ConeKind::Zero,   ConeKind::Ray,       ConeKind::Line,
          ConeKind::Sector, ConeKind::HalfPlane, ConeKind::Plane};
}

SMTScript encode_witness_exists(const TransitionRelation &rel,
                                const EncodeOptions &opts) {
  require(rel.dim == 1 || rel.dim == 2, ErrorCode::Unsupported,
          "witness encoding needs d = 1 or 2");
  std::vector<ConeKind> shapes = shapes_for_dim(rel.dim);
  if (opts.shape) {
    require(std::find(shapes.begin(), shapes.end(), *opts.shape) != shapes.end(),
            ErrorCode::InvalidArgument,
            std::string("no cone of kind ") + to_string(*opts.shape) +
                " in dimension " + std::to_string(rel.dim));
    shapes = {*opts.shape};
  }
  Encoder enc(rel);
  SMTScript s;
  s.dim = rel.dim;
  s.reals = enc.names().reals();
  for (ConeKind k : shapes)
    s.selectors.push_back(shape_selector(k));

  std::ostringstream o;
  o << "; non-termination witness (M, C, v, w) for a loop of dimension "
    << rel.dim << "\n";
  o << "(set-option :produce-models true)\n(set-logic QF_NRA)\n";
  for (const auto &r : s.reals)
    o << "(declare-fun " << r << " () Real)\n";
  for (const auto &b : s.selectors)
    o << "(declare-fun " << b << " () Bool)\n";
  o << "; (v, w) in K\n";
  for (const auto &row : enc.step_rows())
    o << "(assert " << row << ")\n";
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    o << "; C is " << to_string(shapes[i]) << "\n";
    o << "(assert (=> " << s.selectors[i] << " " << conj(enc.shape(shapes[i]))
      << "))\n";
  }
  if (s.selectors.size() == 1) {
    o << "(assert " << s.selectors[0] << ")\n";
  } else {
    o << "(assert (or";
    for (const auto &b : s.selectors)
      o << " " << b;
    o << "))\n";
  }
  o << "(check-sat)\n(get-model)\n";
  s.text = o.str();
  s.hash = "sha256:" + sha256_hex(s.text);
  return s;
}

std::string SExpr::to_string() const {
  if (is_atom)
    return atom;
  std::string s = "(";
  for (std::size_t i = 0; i < list.size(); ++i)
    s += (i ? " " : "") + list[i].to_string();
  return s + ")";
}

std::vector<SExpr> parse_sexprs(std::string_view text) {
  std::vector<std::vector<SExpr>> stack(1);
  std::size_t line = 1, col = 1, i = 0;
  std::vector<std::pair<std::size_t, std::size_t>> opened;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(c);
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n')
        ++i;
    } else if (c == '(') {
      opened.push_back({line, col});
      stack.emplace_back();
      bump(c);
      ++i;
    } else if (c == ')') {
      if (stack.size() == 1)
        throw ParseError(ErrorCode::Parse, "unbalanced ')'", line, col);
      SExpr e;
      e.is_atom = false;
      e.list = std::move(stack.back());
      stack.pop_back();
      opened.pop_back();
      stack.back().push_back(std::move(e));
      bump(c);
      ++i;
    } else {
      std::string atom;
      if (c == '"' || c == '|') {
        const char close = c;
        atom += c;
        bump(c);
        ++i;
        while (i < text.size() && text[i] != close) {
          atom += text[i];
          bump(text[i]);
          ++i;
        }
        if (i == text.size())
          throw ParseError(ErrorCode::Parse, "unterminated literal", line, col);
        atom += close;
        bump(close);
        ++i;
      } else {
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
               text[i] != '(' && text[i] != ')' && text[i] != ';') {
          atom += text[i];
          bump(text[i]);
          ++i;
        }
      }
      SExpr e;
      e.atom = std::move(atom);
      stack.back().push_back(std::move(e));
    }
  }
  if (stack.size() != 1)
    throw ParseError(ErrorCode::Parse, "unbalanced '('", opened.back().first,
                     opened.back().second);
  return std::move(stack[0]);
}

bool script_satisfied(const SMTScript &script, const Assignment &a) {
  for (const auto &e : parse_sexprs(script.text)) {
    if (e.is_atom || e.list.empty() || !e.list[0].is_atom ||
        e.list[0].atom != "assert")
      continue;
    if (e.list.size() != 2 || !eval_bool(e.list[1], a))
      return false;
  }
  return true;
}

Assignment witness_assignment(const Witness &wit) {
  const std::size_t d = wit.c.dim;
  Names n{d};
  Assignment a;
  for (const auto &r : n.reals())
    a[r] = Rational(0);
  for (ConeKind k : shapes_for_dim(d))
    a[shape_selector(k)] = k == wit.c.kind;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      a[n.m(i, j)] = wit.m(i, j);
    a[n.v(i)] = wit.v[i];
    a[n.w(i)] = wit.w[i];
  }

  std::vector<Vec> g;
  switch (wit.c.kind) {
  case ConeKind::Ray:
  case ConeKind::Sector:
    g = wit.c.generators;
    break;
  case ConeKind::Line:
    g = wit.c.lineality;
    break;
  case ConeKind::HalfPlane:
    g = {wit.c.lineality[0], wit.c.generators[0]};
    break;
  case ConeKind::Zero:
  case ConeKind::Plane:
    return a;
  }
  for (std::size_t k = 0; k < g.size(); ++k)
    for (std::size_t i = 0; i < d; ++i)
      a[n.g(k, i)] = g[k][i];
  auto coords = [&](const Vec &x) {
    auto c = coordinates(g, x);
    require(c.has_value(), ErrorCode::Precondition,
            "witness vector outside the span of its cone");
    return *c;
  };
  for (std::size_t k = 0; k < g.size(); ++k) {
    Vec c = coords(wit.m.apply(g[k]));
    for (std::size_t j = 0; j < g.size(); ++j)
      a[n.lam_m(k, j)] = c[j];
  }
  Vec c = coords(sub(wit.w, wit.v));
  for (std::size_t j = 0; j < g.size(); ++j)
    a[n.lam_d(j)] = c[j];
  return a;
}

const char *to_string(SolverStatus s) {
  switch (s) {
  case SolverStatus::Sat:
    return "sat";
  case SolverStatus::Unsat:
    return "unsat";
  case SolverStatus::Unknown:
    return "unknown";
  case SolverStatus::Timeout:
    return "timeout";
  case SolverStatus::ToolError:
    return "tool-error";
  }
  return "?";
}

SolverOutcome parse_solver_output(std::string_view out, std::string_view err) {
  SolverOutcome o;
  o.stderr_text = std::string(err);
  std::optional<SolverStatus> status;
  std::size_t model_from = std::string_view::npos;
  std::string errors;
  std::size_t pos = 0;
  while (pos <= out.size()) {
    std::size_t nl = out.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? out.size() : nl;
    std::string line = trim(out.substr(pos, end - pos));
    if (line.rfind("(:version", 0) == 0) {
      auto q1 = line.find('"'), q2 = line.rfind('"');
      if (q1 != std::string::npos && q2 > q1)
        o.version = line.substr(q1 + 1, q2 - q1 - 1);
    } else if (line.rfind("(error", 0) == 0) {
      errors += (errors.empty() ? "" : "; ") + line;
    } else if (!status && (line == "sat" || line == "unsat" || line == "unknown")) {
      status = line == "sat"     ? SolverStatus::Sat
               : line == "unsat" ? SolverStatus::Unsat
                                 : SolverStatus::Unknown;
      model_from = end;
    }
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
  if (!status) {
    o.status = SolverStatus::ToolError;
    o.message = "no sat/unsat/unknown in solver output";
    if (!errors.empty())
      o.message += ": " + errors;
    else if (!trim(err).empty())
      o.message += "; stderr: " + tail(err, 400);
    else if (!trim(out).empty())
      o.message += "; stdout: " + tail(out, 400);
    return o;
  }
  o.status = *status;
  if (o.status != SolverStatus::Unsat)
    o.message = errors; // unsat always complains about (get-model)
  if (o.status == SolverStatus::Sat) {
    try {
      for (const auto &e : parse_sexprs(out.substr(model_from)))
        collect_definitions(e, o.model);
    } catch (const Error &e) {
      o.status = SolverStatus::ToolError;
      o.message = std::string("unreadable model: ") + e.what();
    }
  }
  return o;
}

bool solver_available(const SolverConfig &cfg) {
  if (cfg.argv.empty() || cfg.argv[0].empty())
    return false;
  const std::string &exe = cfg.argv[0];
  if (exe.find('/') != std::string::npos)
    return ::access(exe.c_str(), X_OK) == 0;
  const char *path = std::getenv("PATH");
  if (!path)
    return false;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    std::filesystem::path p = std::filesystem::path(dir.empty() ? "." : dir) / exe;
    if (::access(p.c_str(), X_OK) == 0)
      return true;
  }
  return false;
}

SolverOutcome solve_external(const SMTScript &script, const SolverConfig &cfg,
                             std::stop_token stop) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  auto finish = [&](SolverOutcome o) {
    o.seconds = std::chrono::duration<double>(clock::now() - started).count();
    return o;
  };
  if (cfg.argv.empty())
    return finish(tool_error("empty solver command"));

  // stdin over a socket so a dead solver gives EPIPE, not SIGPIPE.
  int in[2], out[2], err[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in) != 0)
    return finish(tool_error(std::string("socketpair: ") + std::strerror(errno)));
  if (::pipe2(out, O_CLOEXEC) != 0 || ::pipe2(err, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    return finish(tool_error(std::string("pipe: ") + std::strerror(errno)));
  }

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in[1], 0);
  posix_spawn_file_actions_adddup2(&fa, out[1], 1);
  posix_spawn_file_actions_adddup2(&fa, err[1], 2);
  std::vector<char *> argv;
  for (const auto &a : cfg.argv)
    argv.push_back(const_cast<char *>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, argv[0], &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  ::close(in[1]);
  ::close(out[1]);
  ::close(err[1]);
  if (rc != 0) {
    ::close(in[0]);
    ::close(out[0]);
    ::close(err[0]);
    return finish(tool_error("cannot start solver '" + cfg.argv[0] +
                             "': " + std::strerror(rc)));
  }
  for (int fd : {in[0], out[0], err[0]})
    ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);

  const std::string input = "(get-info :version)\n" + script.text;
  std::size_t written = 0;
  int to_child = in[0];
  if (input.empty()) {
    ::close(to_child);
    to_child = -1;
  }
  std::string out_text, err_text;
  bool out_open = true, err_open = true;
  enum { Running, TimedOut, Cancelled } state = Running;
  const auto deadline =
      started + std::chrono::duration_cast<clock::duration>(
                    std::chrono::duration<double>(cfg.timeout_seconds));

  while (out_open || err_open) {
    if (stop.stop_requested()) {
      state = Cancelled;
      break;
    }
    if (clock::now() >= deadline) {
      state = TimedOut;
      break;
    }
    pollfd fds[3];
    nfds_t nfds = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (to_child >= 0) {
      idx_in = static_cast<int>(nfds);
      fds[nfds++] = {to_child, POLLOUT, 0};
    }
    if (out_open) {
      idx_out = static_cast<int>(nfds);
      fds[nfds++] = {out[0], POLLIN, 0};
    }
    if (err_open) {
      idx_err = static_cast<int>(nfds);
      fds[nfds++] = {err[0], POLLIN, 0};
    }
    if (::poll(fds, nfds, 50) < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    if (idx_in >= 0 && fds[idx_in].revents) {
      ssize_t n = ::send(to_child, input.data() + written, input.size() - written,
                         MSG_NOSIGNAL);
      if (n > 0)
        written += static_cast<std::size_t>(n);
      if (n < 0 && errno != EAGAIN && errno != EINTR)
        written = input.size();
      if (written == input.size()) {
        ::shutdown(to_child, SHUT_WR);
        ::close(to_child);
        to_child = -1;
      }
    }
    auto drain = [](int fd, std::string &sink, bool &open) {
      char buf[4096];
      for (;;) {
        ssize_t n = ::read(fd, buf, sizeof buf);
        if (n > 0) {
          sink.append(buf, static_cast<std::size_t>(n));
          continue;
        }
        if (n == 0 || (errno != EAGAIN && errno != EINTR))
          open = false;
        return;
      }
    };
    if (idx_out >= 0 && fds[idx_out].revents)
      drain(out[0], out_text, out_open);
    if (idx_err >= 0 && fds[idx_err].revents)
      drain(err[0], err_text, err_open);
  }
  if (to_child >= 0)
    ::close(to_child);
  ::close(out[0]);
  ::close(err[0]);
  if (state != Running)
    ::kill(pid, SIGKILL);
  int wstatus = 0;
  while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
  }

  if (state == TimedOut) {
    SolverOutcome o;
    o.status = SolverStatus::Timeout;
    o.message = "no answer within " + std::to_string(cfg.timeout_seconds) + " s";
    return finish(std::move(o));
  }
  if (state == Cancelled) {
    SolverOutcome o;
    o.status = SolverStatus::Unknown;
    o.message = "cancelled";
    return finish(std::move(o));
  }
  SolverOutcome o = parse_solver_output(out_text, err_text);
  if (o.status == SolverStatus::ToolError && WIFEXITED(wstatus) &&
      WEXITSTATUS(wstatus) != 0)
    o.message += " (exit status " + std::to_string(WEXITSTATUS(wstatus)) + ")";
  return finish(std::move(o));
}

std::optional<Rational> model_value(std::string_view text,
                                    const Integer &max_denominator) {
  std::vector<SExpr> e;
  try {
    e = parse_sexprs(text);
  } catch (const Error &) {
    return std::nullopt;
  }
  if (e.size() != 1)
    return std::nullopt;
  bool inexact = false;
  auto v = literal_value(e[0], inexact);
  if (v && inexact)
    return continued_fraction_approx(*v, max_denominator);
  return v;
}

std::optional<Witness> witness_from_model(const SolverOutcome &outcome,
                                          std::size_t d,
                                          const Integer &max_denominator) {
  if (outcome.status != SolverStatus::Sat)
    return std::nullopt;
  Names n{d};
  bool ok = true;
  auto num = [&](const std::string &name) -> Rational {
    auto it = outcome.model.find(name);
    if (it == outcome.model.end())
      return 0;
    auto v = model_value(it->second, max_denominator);
    if (!v)
      ok = false;
    return v.value_or(0);
  };
  Matrix m(d, d);
  Vec v(d), w(d);
  std::vector<Vec> g(n.gens(), Vec(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j)
      m(i, j) = num(n.m(i, j));
    v[i] = num(n.v(i));
    w[i] = num(n.w(i));
    for (std::size_t k = 0; k < n.gens(); ++k)
      g[k][i] = num(n.g(k, i));
  }
  if (!ok)
    return std::nullopt;

  for (ConeKind k : shapes_for_dim(d)) {
    auto it = outcome.model.find(shape_selector(k));
    if (it == outcome.model.end() || it->second != "true")
      continue;
    try {
      Cone2 c;
      switch (k) {
      case ConeKind::Zero:
        c = cone_canonical(d, {}, {});
        break;
      case ConeKind::Ray:
        c = cone_canonical(d, {g[0]}, {});
        break;
      case ConeKind::Line:
        c = cone_canonical(d, {}, {g[0]});
        break;
      case ConeKind::Sector:
        c = cone_canonical(d, {g[0], g[1]}, {});
        break;
      case ConeKind::HalfPlane:
        c = cone_canonical(d, {g[1]}, {g[0]});
        break;
      case ConeKind::Plane:
        c = cone_canonical(d, {}, {unit(d, 0), unit(d, 1)});
        break;
      }
      return Witness{m, c, v, w};
    } catch (const Error &) {
      continue; // rationalized generators degenerated
    }
  }
  return std::nullopt;
}

std::optional<Witness> rationalize_and_verify(const SolverOutcome &outcome,
                                              const TransitionRelation &rel,
                                              const Integer &max_denominator) {
  if (outcome.status != SolverStatus::Sat)
    return std::nullopt;
  std::optional<Cone2> cone;
  for (const Integer &bound : {max_denominator, Integer(max_denominator * 1000)}) {
    auto w = witness_from_model(outcome, rel.dim, bound);
    if (!w)
      continue;
    if (verify_witness(rel, *w).ok)
      return w;
    if (!cone)
      cone = w->c;
  }
  if (cone)
    return complete_for_cone(rel, *cone);
  return std::nullopt;
}

} // namespace loopterm
