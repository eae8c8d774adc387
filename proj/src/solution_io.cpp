#include "fraclap/solution_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fraclap/config.hpp"
#include "fraclap/error.hpp"

namespace fraclap {

namespace {

constexpr int kFormatVersion = 1;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Classification parse_classification(const std::string& label, int* k) {
  *k = 0;
  auto indexed = [&](const std::string& prefix) {
    if (label.rfind(prefix, 0) != 0) return false;
    *k = static_cast<int>(parse_integer(label.substr(prefix.size()), "classification index"));
    return true;
  };
  if (label == "mountain_pass") return Classification::mountain_pass;
  if (label == "ball_min") return Classification::ball_min;
  if (label == "newton_refined") return Classification::newton_refined;
  if (label == "trivial") return Classification::trivial;
  if (indexed("dual_fountain_")) return Classification::dual_fountain_k;
  if (indexed("fountain_")) return Classification::fountain_k;
  throw Error(Errc::BadValue, "unknown classification '" + label + "'");
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string render_solution(const SolutionFile& file) {
  const auto& s = file.spec;
  const auto& p = file.params;
  const auto& r = file.record;
  std::ostringstream os;
  os << "format_version=" << kFormatVersion << '\n'
     << "problem.s=" << format_double(s.s) << '\n'
     << "problem.a=" << format_double(s.a) << '\n'
     << "problem.b=" << format_double(s.b) << '\n'
     << "problem.N=" << s.N << '\n'
     << "problem.seed=" << s.seed << '\n'
     << "quad.regular=" << s.quad_regular << '\n'
     << "quad.singular=" << s.quad_singular << '\n'
     << "nl.kind=" << nl_kind_name(file.kind) << '\n'
     << "nl.lambda=" << format_double(p.lambda) << '\n'
     << "nl.mu=" << format_double(p.mu) << '\n'
     << "nl.p=" << format_double(p.p) << '\n'
     << "nl.q=" << format_double(p.q) << '\n'
     << "nl.T1=" << format_double(p.T1) << '\n'
     << "nl.a_br=" << format_double(p.a_br) << '\n'
     << "nl.b_br=" << format_double(p.b_br) << '\n'
     << "nl.T0=" << format_double(p.T0) << '\n'
     << "energy=" << format_double(r.energy) << '\n'
     << "residual=" << format_double(r.residual) << '\n'
     << "solver=" << r.solver << '\n'
     << "classification=" << r.label() << '\n'
     << "iterations=" << r.iterations << '\n'
     << "seed=" << r.seed << '\n'
     << "accepted=" << (r.accepted ? 1 : 0) << '\n'
     << "coeffs=" << r.u.coeffs.size() << '\n';
  for (Eigen::Index i = 0; i < r.u.coeffs.size(); ++i) os << format_double(r.u.coeffs[i]) << '\n';
  const std::string body = os.str();
  return body + "checksum=" + hex64(fnv1a64(body)) + '\n';
}

SolutionFile parse_solution(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
  }
  if (lines.empty() || lines.front().rfind("format_version=", 0) != 0) {
    throw Error(Errc::VersionMismatch, "missing format_version line");
  }
  const long long version = parse_integer(lines.front().substr(15), "format_version");
  if (version != kFormatVersion) {
    throw Error(Errc::VersionMismatch, "format_version " + std::to_string(version) + " is not supported (expected " +
                                           std::to_string(kFormatVersion) + ")");
  }
  if (lines.back().rfind("checksum=", 0) != 0) throw Error(Errc::ChecksumMismatch, "missing checksum line");
  std::string body;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) body += lines[i] + '\n';
  if (lines.back().substr(9) != hex64(fnv1a64(body))) {
    throw Error(Errc::ChecksumMismatch, "checksum does not match the file contents");
  }

  std::map<std::string, std::string> fields;
  std::size_t i = 1;
  long long ncoeffs = -1;
  for (; i + 1 < lines.size(); ++i) {
    const auto eq = lines[i].find('=');
    if (eq == std::string::npos) throw Error(Errc::BadValue, "malformed line " + std::to_string(i + 1));
    const std::string key = lines[i].substr(0, eq);
    fields[key] = lines[i].substr(eq + 1);
    if (key == "coeffs") {
      ncoeffs = parse_integer(fields[key], "coeffs");
      ++i;
      break;
    }
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw Error(Errc::BadValue, "missing field " + key);
    return it->second;
  };
  if (ncoeffs < 0 || i + ncoeffs + 1 != lines.size()) {
    throw Error(Errc::BadValue, "coefficient count does not match the file");
  }

  SolutionFile file;
  ProblemSpec spec = make_coarse_problem(parse_double(get("problem.s"), "problem.s"),
                                         parse_double(get("problem.a"), "problem.a"),
                                         parse_double(get("problem.b"), "problem.b"),
                                         static_cast<int>(parse_integer(get("problem.N"), "problem.N")),
                                         static_cast<std::uint64_t>(parse_integer(get("problem.seed"), "problem.seed")));
  file.spec = with_quadrature(spec, static_cast<int>(parse_integer(get("quad.regular"), "quad.regular")),
                              static_cast<int>(parse_integer(get("quad.singular"), "quad.singular")));
  file.kind = parse_nl_kind(get("nl.kind"));
  file.params.lambda = parse_double(get("nl.lambda"), "nl.lambda");
  file.params.mu = parse_double(get("nl.mu"), "nl.mu");
  file.params.p = parse_double(get("nl.p"), "nl.p");
  file.params.q = parse_double(get("nl.q"), "nl.q");
  file.params.T1 = parse_double(get("nl.T1"), "nl.T1");
  file.params.a_br = parse_double(get("nl.a_br"), "nl.a_br");
  file.params.b_br = parse_double(get("nl.b_br"), "nl.b_br");
  file.params.T0 = parse_double(get("nl.T0"), "nl.T0");

  auto& r = file.record;
  r.energy = parse_double(get("energy"), "energy");
  r.residual = parse_double(get("residual"), "residual");
  r.solver = get("solver");
  r.classification = parse_classification(get("classification"), &r.k);
  r.iterations = static_cast<int>(parse_integer(get("iterations"), "iterations"));
  r.seed = static_cast<std::uint64_t>(parse_integer(get("seed"), "seed"));
  r.accepted = parse_integer(get("accepted"), "accepted") != 0;
  Vector c(ncoeffs);
  for (long long j = 0; j < ncoeffs; ++j) c[j] = parse_double(lines[i + j], "coefficient");
  if (c.size() != file.spec.dim()) throw Error(Errc::BadValue, "coefficient count does not match problem.N");
  r.u = DiscreteFunction::from(file.spec, std::move(c));
  return file;
}

void save_solution(const SolutionFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path);
  out << render_solution(file);
  if (!out) throw Error(Errc::Io, "write failed for " + path);
}

SolutionFile load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_solution(ss.str());
}

}  // namespace fraclap
