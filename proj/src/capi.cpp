// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

#include "loopterm/loopterm.h"

#include "decider.hpp"
#include "errors.hpp"
#include "heuristics.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace loopterm;

struct lt_loop {
  ConstraintLoop loop;
  TransitionRelation rel;
};

struct lt_config {
  DecideConfig cfg;
};

struct lt_verdict {
  TransitionRelation rel;
  Verdict verdict;
};

namespace {

thread_local std::string last_error;

lt_status status_of(ErrorCode c) {
  switch (c) {
  case ErrorCode::InvalidArgument:
  case ErrorCode::EmptyPolyhedron:
    return LT_ERR_INVALID_ARGUMENT;
  case ErrorCode::DimensionMismatch:
    return LT_ERR_DIMENSION;
  case ErrorCode::Precondition:
    return LT_ERR_PRECONDITION;
  case ErrorCode::Parse:
    return LT_ERR_PARSE;
  case ErrorCode::StrictInequality:
    return LT_ERR_STRICT_INEQUALITY;
  case ErrorCode::Unsupported:
    return LT_ERR_UNSUPPORTED;
  case ErrorCode::Io:
    return LT_ERR_IO;
  case ErrorCode::Tool:
    return LT_ERR_TOOL;
  case ErrorCode::Internal:
    return LT_ERR_INTERNAL;
  }
  return LT_ERR_INTERNAL;
}

lt_status fail(lt_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F> lt_status guarded(F &&f) {
  try {
    last_error.clear();
    return f();
  } catch (const Error &e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception &e) {
    return fail(LT_ERR_PARSE, e.what());
  } catch (const std::bad_alloc &) {
    return fail(LT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(LT_ERR_INTERNAL, e.what());
  }
}

char *dup(const std::string &s) {
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p)
    throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

bool parse_bool(const std::string &v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    return true;
  if (v == "false" || v == "0" || v == "no" || v == "off")
    return false;
  throw Error(ErrorCode::InvalidArgument, "expected true or false, got '" + v + "'");
}

unsigned long long parse_count(const std::string &v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    if (!v.empty() && v[0] != '-')
      n = std::stoull(v, &used, 0);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != v.size())
    throw Error(ErrorCode::InvalidArgument, "expected a non-negative integer, got '" + v + "'");
  return n;
}

std::string vec_text(const Vec &v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

std::string cone_text(const Cone2 &c) {
  std::string s = to_string(c.kind);
  if (c.kind == ConeKind::Zero || c.kind == ConeKind::Plane)
    return s;
  s += " {";
  bool first = true;
  for (const auto &g : c.generators) {
    s += (first ? "" : ", ") + vec_text(g);
    first = false;
  }
  for (const auto &l : c.lineality) {
    s += (first ? "+-" : ", +-") + vec_text(l);
    first = false;
  }
  return s + "}";
}

std::string summary(const lt_verdict &v) {
  std::ostringstream o;
  const Verdict &r = v.verdict;
  o << "verdict: " << to_string(r.kind) << "\n";
  o << "loop:    " << relation_hash(v.rel) << "\n";
  switch (r.kind) {
  case VerdictKind::NonTerminating: {
    const Witness &w = *r.witness;
    const std::size_t d = w.m.rows();
    o << "origin:  " << r.origin << "\n";
    o << "M:       [";
    for (std::size_t i = 0; i < d; ++i) {
      o << (i ? "; " : "");
      for (std::size_t j = 0; j < d; ++j)
        o << (j ? " " : "") << w.m(i, j).get_str();
    }
    o << "]\n";
    o << "C:       " << cone_text(w.c) << "\n";
    o << "v:       " << vec_text(w.v) << "\n";
    o << "w:       " << vec_text(w.w) << "\n";
    std::size_t in_k = 0;
    for (bool b : r.run.membership)
      in_k += b;
    o << "run:     " << r.run.points.size() - 1 << " steps, " << in_k << "/"
      << r.run.membership.size() << " pairs in K";
    const std::size_t shown = std::min<std::size_t>(r.run.points.size(), 5);
    o << ", starts";
    for (std::size_t i = 0; i < shown; ++i)
      o << " " << vec_text(r.run.points[i]);
    o << (shown < r.run.points.size() ? " ..." : "") << "\n";
    break;
  }
  case VerdictKind::Terminating:
    o << "method:  " << to_string(r.method) << "\n";
    break;
  case VerdictKind::Unknown:
    o << "reason:  " << r.reason << "\n";
    break;
  }
  return o.str();
}

} // namespace

extern "C" {

const char *lt_version(void) { return "0.1.0"; }

const char *lt_status_string(lt_status status) {
  switch (status) {
  case LT_OK:
    return "ok";
  case LT_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case LT_ERR_DIMENSION:
    return "dimension mismatch";
  case LT_ERR_PRECONDITION:
    return "precondition violated";
  case LT_ERR_PARSE:
    return "parse error";
  case LT_ERR_STRICT_INEQUALITY:
    return "strict inequality";
  case LT_ERR_UNSUPPORTED:
    return "unsupported";
  case LT_ERR_IO:
    return "i/o error";
  case LT_ERR_TOOL:
    return "external tool error";
  case LT_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

const char *lt_last_error(void) { return last_error.c_str(); }

void lt_string_free(char *s) { std::free(s); }

lt_status lt_loop_parse(const char *text, lt_loop **out) {
  return guarded([&] {
    if (!text || !out)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    auto h = std::make_unique<lt_loop>();
    h->loop = load_loop(text);
    h->rel = loop_to_relation(h->loop);
    *out = h.release();
    return LT_OK;
  });
}

lt_status lt_loop_parse_file(const char *path, lt_loop **out) {
  return guarded([&] {
    if (!path || !out)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    std::ifstream f(path, std::ios::binary);
    if (!f)
      return fail(LT_ERR_IO, std::string("cannot open ") + path);
    std::stringstream ss;
    ss << f.rdbuf();
    lt_status s = lt_loop_parse(ss.str().c_str(), out);
    if (s != LT_OK)
      last_error = std::string(path) + ":" + last_error;
    return s;
  });
}

void lt_loop_free(lt_loop *loop) { delete loop; }

size_t lt_loop_dimension(const lt_loop *loop) { return loop ? loop->rel.dim : 0; }

lt_status lt_loop_hash(const lt_loop *loop, char **out) {
  return guarded([&] {
    if (!loop || !out)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    *out = dup(relation_hash(loop->rel));
    return LT_OK;
  });
}

lt_status lt_loop_print(const lt_loop *loop, char **out) {
  return guarded([&] {
    if (!loop || !out)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    *out = dup(print_loop(loop->loop));
    return LT_OK;
  });
}

lt_status lt_config_new(lt_config **out) {
  return guarded([&] {
    if (!out)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    *out = new lt_config();
    return LT_OK;
  });
}

lt_status lt_config_set(lt_config *cfg, const char *key, const char *value) {
  return guarded([&] {
    if (!cfg || !key || !value)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    const std::string k = key, v = value;
    DecideConfig &c = cfg->cfg;
    if (k == "solver") {
      std::istringstream in(v);
      std::vector<std::string> argv;
      for (std::string w; in >> w;)
        argv.push_back(w);
      if (argv.empty())
        return fail(LT_ERR_INVALID_ARGUMENT, "empty solver command");
      c.solver.argv = std::move(argv);
    } else if (k == "timeout") {
      std::size_t used = 0;
      double t = 0;
      try {
        t = std::stod(v, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != v.size() || !(t > 0))
        return fail(LT_ERR_INVALID_ARGUMENT, "timeout must be a positive number, got '" + v + "'");
      c.solver.timeout_seconds = t;
    } else if (k == "steps") {
      c.steps = parse_count(v);
      if (c.steps < 1)
        return fail(LT_ERR_INVALID_ARGUMENT, "steps must be at least 1");
    } else if (k == "starts") {
      c.starts = parse_count(v);
    } else if (k == "seed") {
      c.seed = parse_count(v);
    } else if (k == "jobs") {
      c.jobs = static_cast<unsigned>(std::max<unsigned long long>(1, parse_count(v)));
    } else if (k == "denominator") {
      Integer d;
      if (d.set_str(v, 10) != 0 || d < 1)
        return fail(LT_ERR_INVALID_ARGUMENT, "denominator must be a positive integer");
      c.max_denominator = d;
    } else if (k == "smt") {
      c.use_smt = parse_bool(v);
    } else if (k == "heuristics") {
      c.use_heuristics = parse_bool(v);
    } else if (k == "per_shape") {
      c.per_shape = parse_bool(v);
    } else {
      return fail(LT_ERR_INVALID_ARGUMENT, "unknown config key '" + k + "'");
    }
    return LT_OK;
  });
}

void lt_config_free(lt_config *cfg) { delete cfg; }

int lt_solver_available(const lt_config *cfg) {
  return solver_available(cfg ? cfg->cfg.solver : SolverConfig{}) ? 1 : 0;
}

lt_status lt_analyze(const lt_loop *loop, const lt_config *cfg, lt_verdict **out) {
  return guarded([&] {
    if (!loop || !out)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    auto h = std::make_unique<lt_verdict>();
    h->rel = loop->rel;
    h->verdict = decide(loop->rel, cfg ? cfg->cfg : DecideConfig{});
    *out = h.release();
    return LT_OK;
  });
}

lt_verdict_kind lt_verdict_get_kind(const lt_verdict *verdict) {
  if (!verdict)
    return LT_UNKNOWN;
  switch (verdict->verdict.kind) {
  case VerdictKind::NonTerminating:
    return LT_NONTERMINATING;
  case VerdictKind::Terminating:
    return LT_TERMINATING;
  case VerdictKind::Unknown:
    break;
  }
  return LT_UNKNOWN;
}

lt_status lt_verdict_certificate(const lt_verdict *verdict, char **json) {
  return guarded([&] {
    if (!verdict || !json)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    *json = dup(certificate_json(verdict->rel, verdict->verdict).dump(2) + "\n");
    return LT_OK;
  });
}

lt_status lt_verdict_summary(const lt_verdict *verdict, char **text) {
  return guarded([&] {
    if (!verdict || !text)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    *text = dup(summary(*verdict));
    return LT_OK;
  });
}

void lt_verdict_free(lt_verdict *verdict) { delete verdict; }

lt_status lt_certificate_check(const lt_loop *loop, const char *cert_json, int *ok,
                               char **detail) {
  return guarded([&] {
    if (!loop || !cert_json || !ok)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    nlohmann::json cert = nlohmann::json::parse(cert_json);
    CheckResult r = check_certificate(loop->rel, cert);
    *ok = r.ok ? 1 : 0;
    if (detail)
      *detail = dup(r.detail);
    return LT_OK;
  });
}

lt_status lt_simulate(const lt_loop *loop, const char *const *start,
                      size_t start_len, size_t steps, char **json) {
  return guarded([&] {
    if (!loop || (!start && start_len) || !json)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    if (start_len != loop->rel.dim)
      return fail(LT_ERR_DIMENSION, "start has " + std::to_string(start_len) +
                                        " coordinates, the loop has " +
                                        std::to_string(loop->rel.dim));
    Vec u;
    for (std::size_t i = 0; i < start_len; ++i)
      u.push_back(parse_rational(start[i]));
    RunTrace t = greedy_run(loop->rel, u, steps);
    *json = dup(to_json(t).dump(2) + "\n");
    return LT_OK;
  });
}

lt_status lt_encode(const lt_loop *loop, const char *shape, char **script) {
  return guarded([&] {
    if (!loop || !script)
      return fail(LT_ERR_INVALID_ARGUMENT, "null argument");
    EncodeOptions opts;
    if (shape)
      opts.shape = cone_kind_from_string(shape);
    *script = dup(encode_witness_exists(loop->rel, opts).text);
    return LT_OK;
  });
}

} // extern "C"
