#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fraclap/config.hpp"
#include "fraclap/csv.hpp"
#include "fraclap/error.hpp"
#include "fraclap/oracle.hpp"
#include "fraclap/pipelines.hpp"
#include "fraclap/solution_io.hpp"
#include "fraclap/audit.hpp"
#include "fraclap/solvers.hpp"

using namespace fraclap;
namespace fs = std::filesystem;

namespace {

template <class Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Io;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("fraclap_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SolutionFile sample_file() {
  SolutionFile f;
  f.spec = make_problem(1.5, 0, 1, 8, 42);
  f.kind = NlKind::concave_convex;
  f.params.lambda = 0.125;
  f.params.p = 1.25;
  f.record.u = DiscreteFunction::from(f.spec, Vector{{0.1, -2.5, 1.0 / 3.0, 4e-17, 12345.678}});
  f.record.energy = -0.1064912345678901;
  f.record.residual = 3.3e-12;
  f.record.solver = "ball_min";
  f.record.iterations = 17;
  f.record.seed = 42;
  f.record.classification = Classification::dual_fountain_k;
  f.record.k = 3;
  f.record.accepted = true;
  return f;
}

int run(const std::string& command, const RunConfig& cfg, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_pipeline(command, cfg, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = parse_config("# comment\nproblem.s=1.25\n\n  nl.kind = f3_logsquare \nproblem.N=16\nnl.lambda=0.5\n");
  CHECK(cfg.s == 1.25);
  CHECK(cfg.N == 16);
  CHECK(cfg.nl_kind == NlKind::f3_logsquare);
  CHECK(cfg.nl.lambda == 0.5);
  CHECK(cfg.b == 1.0);
  CHECK(config_keys().size() == 21);

  try {
    parse_config("problem.s=1.5\nproblem.size=3\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownKey);
    CHECK(std::string(e.what()).find("problem.size") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(error_of([] { parse_config("problem.N=3.5\n"); }) == Errc::BadValue);
  CHECK(error_of([] { parse_config("problem.s=abc\n"); }) == Errc::BadValue);
  CHECK(error_of([] { parse_config("nl.kind=f9\n"); }) == Errc::BadValue);
  CHECK(error_of([] { parse_config("just text\n"); }) == Errc::BadValue);
  CHECK(error_of([] { load_config("/nonexistent/fraclap.cfg"); }) == Errc::Io);
  CHECK(is_validation_error(Errc::UnknownKey));
  CHECK_FALSE(is_validation_error(Errc::Diverged));

  // render and parse back
  RunConfig c;
  c.s = 1.75;
  c.nl.q = 3.3;
  c.solver_name = "ball_min";
  c.out_dir = "/tmp/x";
  auto back = parse_config(render_config(c));
  CHECK(render_config(back) == render_config(c));
  CHECK(back.nl.q == 3.3);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 25241.817043720755, 1e22}) CHECK(parse_double(format_double(v), "v") == v);
  CHECK(parse_integer("-12", "n") == -12);
  CHECK(error_of([] { parse_integer("12x", "n"); }) == Errc::BadValue);
}

TEST_CASE("solution files") {
  const SolutionFile f = sample_file();
  const std::string text = render_solution(f);
  CHECK(text.rfind("format_version=1\n", 0) == 0);
  const SolutionFile g = parse_solution(text);
  CHECK(g.spec == f.spec);
  CHECK(g.kind == f.kind);
  CHECK(g.params == f.params);
  CHECK(g.record.u.coeffs == f.record.u.coeffs);
  CHECK(g.record.u.spec_id == f.spec.id());
  CHECK(g.record.energy == f.record.energy);
  CHECK(g.record.residual == f.record.residual);
  CHECK(g.record.solver == f.record.solver);
  CHECK(g.record.iterations == f.record.iterations);
  CHECK(g.record.seed == f.record.seed);
  CHECK(g.record.classification == f.record.classification);
  CHECK(g.record.k == f.record.k);
  CHECK(g.record.accepted == f.record.accepted);
  CHECK(render_solution(g) == text);

  // truncated
  const auto cut = text.substr(0, text.size() / 2);
  CHECK(error_of([&] { parse_solution(cut); }) == Errc::ChecksumMismatch);
  // one flipped digit
  std::string flipped = text;
  flipped[flipped.find("energy=") + 8] ^= 1;
  CHECK(error_of([&] { parse_solution(flipped); }) == Errc::ChecksumMismatch);
  // version bump
  std::string v2 = text;
  v2.replace(0, 16, "format_version=2");
  CHECK(error_of([&] { parse_solution(v2); }) == Errc::VersionMismatch);

  TempDir dir("solution");
  save_solution(f, (dir.path / "s.txt").string());
  CHECK(render_solution(load_solution((dir.path / "s.txt").string())) == text);
  CHECK(error_of([&] { load_solution((dir.path / "missing.txt").string()); }) == Errc::Io);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("csv") {
  CHECK(csv_text({"a", "b"}, {{"1", "2"}, {"3", "4"}}) == "a,b\n1,2\n3,4\n");
  CHECK(error_of([] { csv_text({"a", "b"}, {{"1"}}); }) == Errc::BadParams);
  CHECK(error_of([] { write_text("/nonexistent/dir/x.csv", "x"); }) == Errc::Io);
}

TEST_CASE("grid oracle") {
  auto spec = make_coarse_problem(1.5, 0, 10, 6, 0);
  Basis basis(spec);
  auto sys = assemble(spec, basis);
  EnergyContext zero(sys, basis, Forcing::from(make_nonlinearity(NlKind::zero)));
  auto o = oracle_global_min(zero, 2.0, 0.02);
  CHECK(o.energy == 0.0);
  CHECK(o.coeffs.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(o.evaluations == 201LL * 201 * 201);

  const auto pw = make_nonlinearity(NlKind::power);
  EnergyContext cc(sys, basis, Forcing::of(pw, 0.1, 1.0, 1.5));
  auto ec = embedding_constants(cc, 1.5, 4.0);
  auto ls = lambda_star(1.5, 4.0, 0.1, [&](double e) { return extract_delta(pw, e, 4.0, 1e8); }, ec);
  REQUIRE(ls.below_threshold);
  auto m = oracle_global_min(cc, 2.0, 0.02, ls.t0, 2);
  CHECK(m.energy < 0.0);
  CHECK(m.energy == doctest::Approx(-2.9479763657e-4).epsilon(1e-8));
  // the grid minimum is a minimum over its own samples
  CHECK(m.energy <= eval_energy(cc, Vector::Zero(3)));
  CHECK(m.energy == doctest::Approx(eval_energy(cc, m.coeffs)).epsilon(1e-14));

  auto big = make_problem(1.5, 0, 1, 8, 0);
  Basis bb(big);
  EnergyContext large(assemble(big, bb), bb, Forcing::from(make_nonlinearity(NlKind::power)));
  CHECK(error_of([&] { oracle_global_min(large, 2.0, 0.02); }) == Errc::DimTooLarge);
  CHECK(error_of([&] { oracle_global_min(zero, 2.0, 0.0); }) == Errc::BadParams);
}

TEST_CASE("pipelines write their outputs") {
  TempDir dir("pipelines");
  RunConfig cfg;
  cfg.out_dir = dir.path.string();
  CHECK(run("eig", cfg) == kExitOk);
  const std::string eig = read_file(dir.path / "eig.csv");
  std::istringstream lines(eig);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "k,lambda,l2check,orthomax");
  int rows = 0;
  double last = 0.0;
  while (std::getline(lines, line)) {
    ++rows;
    const double lambda = std::stod(line.substr(line.find(',') + 1));
    CHECK(lambda > last);
    last = lambda;
  }
  CHECK(rows == 29);

  CHECK(run("solve-mp", cfg) == kExitOk);
  auto sol = load_solution((dir.path / "solution_1.txt").string());
  CHECK(sol.record.energy == doctest::Approx(25241.81704).epsilon(1e-8));
  CHECK(sol.record.residual < 1e-10);
  CHECK(fs::exists(dir.path / "solutions.csv"));
  CHECK(fs::exists(dir.path / "trace_1.csv"));

  RunConfig f3 = cfg;
  f3.nl_kind = NlKind::f3_logsquare;
  CHECK(run("audit", f3) == kExitOk);
  CHECK(read_file(dir.path / "audit.json").find("\"AR\"") != std::string::npos);
}

TEST_CASE("pipeline exit codes") {
  TempDir dir("codes");
  RunConfig cfg;
  cfg.out_dir = dir.path.string();
  std::string text;
  CHECK(run("nope", cfg) == kExitValidation);

  RunConfig bad = cfg;
  bad.s = 2.5;
  CHECK(run("eig", bad, &text) == kExitValidation);
  CHECK(text.find("OrderOutOfRange") != std::string::npos);

  RunConfig above = cfg;
  above.nl_kind = NlKind::concave_convex;
  above.nl.lambda = 400.0;
  CHECK(run("solve-cc", above, &text) == kExitNotAccepted);
  CHECK(text.find("GeometryFailure") != std::string::npos);

  RunConfig no_concave = cfg;
  CHECK(run("solve-cc", no_concave) == kExitValidation);

  std::ofstream(dir.path / "file") << "x";
  RunConfig missing = cfg;
  missing.out_dir = (dir.path / "file" / "sub").string();
  CHECK(run("eig", missing) == kExitValidation);
}

TEST_CASE("command line") {
  TempDir dir("cli");
  const std::string cli = FRACLAP_CLI;
  auto sh = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > " + (dir.path / "out.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(sh("eig --problem.size 3 --out.dir " + dir.path.string()) == 2);
  CHECK(read_file(dir.path / "out.txt").find("problem.size") != std::string::npos);
  CHECK(sh("eig --problem.N 16 --out.dir " + dir.path.string()) == 0);
  CHECK(fs::exists(dir.path / "eig.csv"));

  std::ofstream(dir.path / "run.cfg") << "problem.N=12\nout.dir=" << dir.path.string() << "\n";
  CHECK(sh("eig -c " + (dir.path / "run.cfg").string()) == 0);
  CHECK(read_file(dir.path / "eig.csv").find("\n9,") != std::string::npos);
  CHECK(sh("eig -c " + (dir.path / "missing.cfg").string()) == 2);
  CHECK(sh("--help") == 0);
  CHECK(sh("") == 2);
}
