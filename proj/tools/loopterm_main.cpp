// SPDX-FileCopyrightText: (c) 2026 The loopterm authors
//
// SPDX-License-Identifier: Apache-2.0

// loopterm: command-line front end over the loopterm C API.

#include "loopterm/loopterm.h"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Exit codes beyond the verdict protocol (0 nonterminating, 1 terminating,
// 2 unknown) follow sysexits.h.
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitUnavailable = 69;
constexpr int kExitSoftware = 70;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(lt_status s) {
  switch (s) {
  case LT_ERR_PARSE:
  case LT_ERR_STRICT_INEQUALITY:
  case LT_ERR_INVALID_ARGUMENT:
    return kExitUsage;
  case LT_ERR_IO:
    return kExitNoInput;
  case LT_ERR_UNSUPPORTED:
  case LT_ERR_DIMENSION:
  case LT_ERR_PRECONDITION:
    return kExitData;
  case LT_ERR_TOOL:
    return kExitUnavailable;
  default:
    return kExitSoftware;
  }
}

void check(lt_status s) {
  if (s != LT_OK)
    throw Failure{exit_code_for(s), lt_last_error()};
}

struct CString {
  char *p = nullptr;
  ~CString() { lt_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using LoopPtr = std::unique_ptr<lt_loop, decltype(&lt_loop_free)>;
using ConfigPtr = std::unique_ptr<lt_config, decltype(&lt_config_free)>;
using VerdictPtr = std::unique_ptr<lt_verdict, decltype(&lt_verdict_free)>;

LoopPtr load(const std::string &path) {
  lt_loop *l = nullptr;
  check(lt_loop_parse_file(path.c_str(), &l));
  return {l, lt_loop_free};
}

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

// key = value lines; '#' starts a comment; values may be double-quoted.
std::map<std::string, std::string> read_config_file(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw Failure{kExitNoInput, "cannot open config file " + path};
  std::map<std::string, std::string> out;
  std::string line;
  for (int n = 1; std::getline(f, line); ++n) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"')
        quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.erase(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[')
      continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Failure{kExitUsage, path + ":" + std::to_string(n) + ": expected key = value"};
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '-', '_');
    out[key] = value;
  }
  return out;
}

const std::vector<std::string> kKeys = {"solver", "timeout", "steps", "starts",
                                        "seed", "jobs", "denominator", "smt",
                                        "heuristics", "per_shape", "format"};

struct Settings {
  std::map<std::string, std::string> values;
  std::string format = "json";
};

struct Flags {
  std::string config;
  std::string solver, timeout, steps, seed, jobs, format;
  bool no_smt = false;
  bool no_heuristics = false;
};

Settings resolve(const CLI::App &app, const Flags &flags) {
  Settings s;
  if (!flags.config.empty())
    s.values = read_config_file(flags.config);
  for (const auto &[k, v] : s.values)
    if (std::find(kKeys.begin(), kKeys.end(), k) == kKeys.end())
      throw Failure{kExitUsage, "unknown key '" + k + "' in " + flags.config};
  for (const auto &k : kKeys) {
    std::string env = "LOOPTERM_";
    for (char c : k)
      env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char *v = std::getenv(env.c_str()))
      s.values[k] = v;
  }
  auto flag = [&](const char *name, const char *key, const std::string &v) {
    if (app.count(name) > 0)
      s.values[key] = v;
  };
  flag("--solver", "solver", flags.solver);
  flag("--timeout", "timeout", flags.timeout);
  flag("--steps", "steps", flags.steps);
  flag("--seed", "seed", flags.seed);
  flag("--jobs", "jobs", flags.jobs);
  flag("--format", "format", flags.format);
  if (flags.no_smt)
    s.values["smt"] = "false";
  if (flags.no_heuristics)
    s.values["heuristics"] = "false";
  if (auto it = s.values.find("format"); it != s.values.end()) {
    if (it->second != "json" && it->second != "human")
      throw Failure{kExitUsage, "format must be json or human, got '" + it->second + "'"};
    s.format = it->second;
  }
  return s;
}

ConfigPtr make_config(const Settings &s) {
  lt_config *c = nullptr;
  check(lt_config_new(&c));
  ConfigPtr cfg(c, lt_config_free);
  for (const auto &[k, v] : s.values) {
    if (k == "format")
      continue;
    lt_status st = lt_config_set(cfg.get(), k.c_str(), v.c_str());
    if (st != LT_OK)
      throw Failure{kExitUsage, k + ": " + lt_last_error()};
  }
  return cfg;
}

bool setting_true(const Settings &s, const char *key) {
  auto it = s.values.find(key);
  if (it == s.values.end())
    return true;
  const std::string &v = it->second;
  return !(v == "false" || v == "0" || v == "no" || v == "off");
}

std::string json_escape(const std::string &s) {
  std::string o;
  for (char c : s) {
    switch (c) {
    case '"':
      o += "\\\"";
      break;
    case '\\':
      o += "\\\\";
      break;
    case '\n':
      o += "\\n";
      break;
    default:
      o += c;
    }
  }
  return o;
}

int analyze(const std::string &file, const Settings &s) {
  LoopPtr loop = load(file);
  ConfigPtr cfg = make_config(s);
  if (lt_loop_dimension(loop.get()) == 2 && !setting_true(s, "heuristics") &&
      setting_true(s, "smt") && !lt_solver_available(cfg.get()))
    throw Failure{kExitUnavailable,
                  "no solver binary found and heuristics are disabled"};
  lt_verdict *v = nullptr;
  check(lt_analyze(loop.get(), cfg.get(), &v));
  VerdictPtr verdict(v, lt_verdict_free);
  CString out;
  if (s.format == "human")
    check(lt_verdict_summary(verdict.get(), &out.p));
  else
    check(lt_verdict_certificate(verdict.get(), &out.p));
  std::cout << out.str();
  switch (lt_verdict_get_kind(verdict.get())) {
  case LT_NONTERMINATING:
    return 0;
  case LT_TERMINATING:
    return 1;
  case LT_UNKNOWN:
    break;
  }
  return 2;
}

int verify(const std::string &file, const std::string &cert_path,
           const Settings &s) {
  LoopPtr loop = load(file);
  std::ifstream f(cert_path, std::ios::binary);
  if (!f)
    throw Failure{kExitNoInput, "cannot open " + cert_path};
  std::stringstream ss;
  ss << f.rdbuf();
  int ok = 0;
  CString detail;
  check(lt_certificate_check(loop.get(), ss.str().c_str(), &ok, &detail.p));
  if (s.format == "human")
    std::cout << (ok ? "ok: " : "FAILED: ") << detail.str() << "\n";
  else
    std::cout << "{\n  \"detail\": \"" << json_escape(detail.str())
              << "\",\n  \"ok\": " << (ok ? "true" : "false") << "\n}\n";
  return ok ? 0 : 1;
}

int simulate(const std::string &file, const std::vector<std::string> &start,
             const Settings &s) {
  LoopPtr loop = load(file);
  make_config(s); // validates every setting
  std::size_t steps = 64;
  if (auto it = s.values.find("steps"); it != s.values.end())
    steps = std::stoul(it->second);
  std::vector<const char *> args;
  for (const auto &a : start)
    args.push_back(a.c_str());
  CString out;
  check(lt_simulate(loop.get(), args.data(), args.size(), steps, &out.p));
  std::cout << out.str();
  return 0;
}

int encode(const std::string &file, const std::string &shape) {
  LoopPtr loop = load(file);
  CString out;
  check(lt_encode(loop.get(), shape.empty() ? nullptr : shape.c_str(), &out.p));
  std::cout << out.str();
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Termination analysis for linear constraint loops in one or two variables",
               "loopterm"};
  app.set_version_flag("--version", lt_version());
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config, "key = value settings file");
  app.add_option("--solver", flags.solver, "solver command line (default: z3 -in -smt2 ...)");
  app.add_option("--timeout", flags.timeout, "solver wall-clock budget in seconds");
  app.add_option("--steps", flags.steps, "run prefix length");
  app.add_option("--seed", flags.seed, "seed for random start points");
  app.add_option("--jobs", flags.jobs, "run heuristics and solver concurrently when > 1");
  app.add_option("--format", flags.format, "json or human");
  app.add_flag("--no-smt", flags.no_smt, "never call the external solver");
  app.add_flag("--no-heuristics", flags.no_heuristics, "skip heuristic witness search");

  std::string file, cert, shape;
  std::vector<std::string> start;

  auto *an = app.add_subcommand("analyze", "decide termination and print a certificate");
  an->add_option("file", file, "loop file")->required();

  auto *ve = app.add_subcommand("verify", "re-check a certificate against a loop");
  ve->add_option("file", file, "loop file")->required();
  ve->add_option("cert", cert, "certificate JSON")->required();

  auto *si = app.add_subcommand("simulate", "greedy run from a start point");
  si->add_option("file", file, "loop file")->required();
  si->add_option("--start", start, "start point, e.g. 1,-1/2")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);

  auto *en = app.add_subcommand("encode", "print the witness-existence solver script");
  en->add_option("file", file, "loop file")->required();
  en->add_option("--shape", shape, "restrict to one cone shape");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    Settings s = resolve(app, flags);
    if (an->parsed())
      return analyze(file, s);
    if (ve->parsed())
      return verify(file, cert, s);
    if (si->parsed())
      return simulate(file, start, s);
    return encode(file, shape);
  } catch (const Failure &f) {
    std::cerr << "loopterm: " << f.message << "\n";
    return f.code;
  } catch (const std::exception &e) {
    std::cerr << "loopterm: " << e.what() << "\n";
    return kExitSoftware;
  }
}
