#include "fraclap/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view text, std::string_view what) {
  const long long v = parse_integer(text, what);
  if (v < -2147483647LL || v > 2147483647LL) {
    throw Error(Errc::BadValue, std::string(what) + " is out of range: " + std::string(text));
  }
  return static_cast<int>(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::BadValue, std::string(what) + " is not a decimal number: '" + std::string(text) + "'");
  }
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::BadValue, std::string(what) + " is not an integer: '" + std::string(text) + "'");
  }
  return v;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "problem.s",     "problem.a",       "problem.b",          "problem.N",     "problem.seed",
      "quad.regular",  "quad.singular",   "nl.kind",            "nl.lambda",     "nl.mu",
      "nl.p",          "nl.q",            "nl.T1",              "nl.a_br",       "nl.b_br",
      "solver.name",   "solver.tol",      "solver.max_iter",    "solver.path_points",
      "solver.k_max",  "out.dir"};
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "problem.s") cfg.s = parse_double(value, key);
  else if (key == "problem.a") cfg.a = parse_double(value, key);
  else if (key == "problem.b") cfg.b = parse_double(value, key);
  else if (key == "problem.N") cfg.N = parse_int(value, key);
  else if (key == "problem.seed") {
    const long long v = parse_integer(value, key);
    if (v < 0) throw Error(Errc::BadValue, "problem.seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(v);
  }
  else if (key == "quad.regular") cfg.quad_regular = parse_int(value, key);
  else if (key == "quad.singular") cfg.quad_singular = parse_int(value, key);
  else if (key == "nl.kind") {
    try {
      cfg.nl_kind = parse_nl_kind(value);
    } catch (const Error& e) {
      throw Error(Errc::BadValue, std::string("nl.kind: ") + e.what());
    }
  }
  else if (key == "nl.lambda") cfg.nl.lambda = parse_double(value, key);
  else if (key == "nl.mu") cfg.nl.mu = parse_double(value, key);
  else if (key == "nl.p") cfg.nl.p = parse_double(value, key);
  else if (key == "nl.q") cfg.nl.q = parse_double(value, key);
  else if (key == "nl.T1") cfg.nl.T1 = parse_double(value, key);
  else if (key == "nl.a_br") cfg.nl.a_br = parse_double(value, key);
  else if (key == "nl.b_br") cfg.nl.b_br = parse_double(value, key);
  else if (key == "solver.name") {
    if (value.empty()) throw Error(Errc::BadValue, "solver.name is empty");
    cfg.solver_name = std::string(value);
  }
  else if (key == "solver.tol") {
    cfg.solver_tol = parse_double(value, key);
    if (!(cfg.solver_tol > 0.0)) throw Error(Errc::BadValue, "solver.tol must be positive");
  }
  else if (key == "solver.max_iter") {
    cfg.solver_max_iter = parse_int(value, key);
    if (cfg.solver_max_iter < 1) throw Error(Errc::BadValue, "solver.max_iter must be positive");
  }
  else if (key == "solver.path_points") cfg.solver_path_points = parse_int(value, key);
  else if (key == "solver.k_max") cfg.solver_k_max = parse_int(value, key);
  else if (key == "out.dir") {
    if (value.empty()) throw Error(Errc::BadValue, "out.dir is empty");
    cfg.out_dir = std::string(value);
  }
  else throw Error(Errc::UnknownKey, "unknown key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::BadValue, "line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "problem.s=" << format_double(cfg.s) << '\n'
     << "problem.a=" << format_double(cfg.a) << '\n'
     << "problem.b=" << format_double(cfg.b) << '\n'
     << "problem.N=" << cfg.N << '\n'
     << "problem.seed=" << cfg.seed << '\n'
     << "quad.regular=" << cfg.quad_regular << '\n'
     << "quad.singular=" << cfg.quad_singular << '\n'
     << "nl.kind=" << nl_kind_name(cfg.nl_kind) << '\n'
     << "nl.lambda=" << format_double(cfg.nl.lambda) << '\n'
     << "nl.mu=" << format_double(cfg.nl.mu) << '\n'
     << "nl.p=" << format_double(cfg.nl.p) << '\n'
     << "nl.q=" << format_double(cfg.nl.q) << '\n'
     << "nl.T1=" << format_double(cfg.nl.T1) << '\n'
     << "nl.a_br=" << format_double(cfg.nl.a_br) << '\n'
     << "nl.b_br=" << format_double(cfg.nl.b_br) << '\n'
     << "solver.name=" << cfg.solver_name << '\n'
     << "solver.tol=" << format_double(cfg.solver_tol) << '\n'
     << "solver.max_iter=" << cfg.solver_max_iter << '\n'
     << "solver.path_points=" << cfg.solver_path_points << '\n'
     << "solver.k_max=" << cfg.solver_k_max << '\n'
     << "out.dir=" << cfg.out_dir << '\n';
  return os.str();
}

ProblemSpec problem_of(const RunConfig& cfg, bool coarse) {
  const ProblemSpec base = coarse ? make_coarse_problem(cfg.s, cfg.a, cfg.b, cfg.N, cfg.seed)
                                  : make_problem(cfg.s, cfg.a, cfg.b, cfg.N, cfg.seed);
  return with_quadrature(base, cfg.quad_regular, cfg.quad_singular);
}

Nonlinearity nonlinearity_of(const RunConfig& cfg) { return make_nonlinearity(cfg.nl_kind, cfg.nl); }

}  // namespace fraclap
