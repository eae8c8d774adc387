#include "fraclap/pipelines.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fraclap/csv.hpp"
#include "fraclap/error.hpp"
#include "fraclap/oracle.hpp"
#include "fraclap/solution_io.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

namespace {

constexpr double kAuditTmax = 1e8;
constexpr double kMpTol = 1e-5;  // path phase; Newton takes it to solver.tol
constexpr double kOracleWidth = 2.0;
constexpr double kOracleStep = 0.02;
constexpr int kOracleLevels = 2;

// A solver ran but its output does not meet the acceptance contract.
struct Rejected {
  std::string message;
};

struct Setup {
  ProblemSpec spec;
  Nonlinearity nl;
  EnergyContext ctx;
};

Setup setup(const RunConfig& cfg, bool coarse = false) {
  const ProblemSpec spec = problem_of(cfg, coarse);
  const Nonlinearity nl = nonlinearity_of(cfg);
  const Basis basis = build_basis(spec);
  return {spec, nl, EnergyContext(assemble(spec, basis), basis, Forcing::from(nl))};
}

std::string path_in(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string fd(double v) { return format_double(v); }

DeltaFn delta_of(const Nonlinearity& g, double q) {
  return [g, q](double eps) { return extract_delta(g, eps, q, kAuditTmax); };
}

CsvRow trace_header() { return {"iter", "energy", "residual", "norm"}; }

std::vector<CsvRow> trace_rows(const Trace& trace) {
  std::vector<CsvRow> rows;
  for (const auto& tp : trace) rows.push_back({std::to_string(tp.iter), fd(tp.energy), fd(tp.residual), fd(tp.norm)});
  return rows;
}

// solutions.csv plus one checksummed file per record
void write_solutions(const RunConfig& cfg, const Setup& st, const std::vector<SolutionRecord>& records) {
  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string id = std::to_string(i + 1);
    rows.push_back({id, r.label(), fd(r.energy), fd(r.residual), fd(h_norm(st.ctx.sys(), r.u.coeffs))});
    save_solution({st.spec, cfg.nl_kind, cfg.nl, r}, path_in(cfg, "solution_" + id + ".txt"));
  }
  write_csv(path_in(cfg, "solutions.csv"), {"id", "classification", "energy", "residual", "norm"}, rows);
}

void print_records(std::ostream& out, const Setup& st, const std::vector<SolutionRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << (i + 1) << ' ' << r.label() << " energy=" << fd(r.energy) << " residual=" << fd(r.residual)
        << " norm=" << fd(h_norm(st.ctx.sys(), r.u.coeffs)) << '\n';
  }
}

void require_concave(const Setup& st) {
  if (!(st.ctx.forcing().lambda > 0.0)) {
    throw Error(Errc::BadParams, "this command needs a concave term (nl.lambda > 0 with a concave-convex kind)");
  }
}

// Mountain pass followed by Newton; the record keeps the mountain-pass label.
SolutionRecord mp_then_newton(const RunConfig& cfg, const Setup& st, const MpGeometry& geo) {
  MountainPassOptions mo;
  mo.path_points = cfg.solver_path_points;
  mo.max_iter = cfg.solver_max_iter;
  mo.tol = std::max(kMpTol, cfg.solver_tol);
  const SolutionRecord mp = mountain_pass(st.ctx, geo, mo);
  SolutionRecord rec = newton_refine(st.ctx, mp.u.coeffs, cfg.solver_tol);
  rec.solver = "mountain_pass+newton";
  rec.classification = Classification::mountain_pass;
  rec.iterations += mp.iterations;
  Trace trace = mp.trace;
  for (auto tp : rec.trace) {
    tp.iter += mp.iterations + 1;
    trace.push_back(tp);
  }
  rec.trace = std::move(trace);
  rec.seed = cfg.seed;
  if (!rec.accepted) throw Rejected{"Newton refinement stopped at residual " + fd(rec.residual)};
  if (rec.energy < geo.beta - 1e-6) {
    throw Rejected{"mountain-pass energy " + fd(rec.energy) + " is below the geometry bound " + fd(geo.beta)};
  }
  if (!(h_norm(st.ctx.sys(), rec.u.coeffs) > 1e-6)) throw Rejected{"mountain pass converged to the trivial solution"};
  return rec;
}

MpGeometry geometry_for(const Setup& st, const EmbeddingConstants& ec, double q, LambdaStar* ls_out = nullptr) {
  const auto& f = st.ctx.forcing();
  if (f.lambda > 0.0) {
    const LambdaStar ls = lambda_star(f.p, q, f.lambda, delta_of(f.g, q), ec);
    if (ls_out) *ls_out = ls;
    return cc_geometry(st.ctx, ls);
  }
  return mp_geometry(st.ctx, q, delta_of(f.g, q), ec);
}

int cmd_eig(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  const SpectralData data = eig_dense(st.ctx.sys());
  const SpectralChecks checks = check_spectrum(st.ctx.sys(), data);
  std::vector<CsvRow> rows;
  for (int k = 0; k < data.count(); ++k) {
    rows.push_back({std::to_string(k + 1), fd(data.lambdas[k]), fd(checks.l2check[k]), fd(checks.orthomax[k])});
  }
  write_csv(path_in(cfg, "eig.csv"), {"k", "lambda", "l2check", "orthomax"}, rows);
  out << "eig: " << data.count() << " eigenpairs, lambda_1=" << fd(data.lambdas.front())
      << " ortho_M=" << fd(checks.ortho_M) << " ortho_S=" << fd(checks.ortho_S) << '\n';
  return kExitOk;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out) {
  const Nonlinearity nl = nonlinearity_of(cfg);
  const AuditReport rep = audit(nl, cfg.nl.q, kAuditTmax);
  const std::string table = render_audit_table(rep);
  write_text(path_in(cfg, "audit.txt"), table);
  write_text(path_in(cfg, "audit.json"), render_audit_json(rep, std::string(nl_kind_name(cfg.nl_kind))));
  out << table;
  return kExitOk;
}

int cmd_geometry(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  const auto& f = st.ctx.forcing();
  const double q = cfg.nl.q;
  const double p = cfg.nl.p;
  const EmbeddingConstants ec = embedding_constants(st.ctx, p, q);
  nlohmann::ordered_json j;
  j["c2"] = ec.c2;
  j["cp"] = ec.cp;
  j["cq"] = ec.cq;
  try {
    const MpGeometry g = geometry_for(st, ec, q);
    j["mp"] = {{"eps", g.eps},     {"delta_eps", g.delta_eps}, {"alpha", g.alpha},
               {"kappa", g.kappa}, {"rho", g.rho},             {"beta", g.beta},
               {"e_energy", g.e_energy}};
  } catch (const Error& e) {
    j["mp"] = {{"error", std::string(errc_name(e.code()))}, {"message", e.what()}};
  }
  if (1.0 < p && p < 2.0 && q > 2.0) {
    const LambdaStar ls = lambda_star(p, q, f.lambda, delta_of(f.g, q), ec);
    j["lambda_star"] = {{"A", ls.A},           {"K", ls.K},         {"C_q", ls.C_q},
                        {"beta_bar", ls.beta_bar}, {"p_bar", ls.p_bar}, {"q_bar", ls.q_bar},
                        {"lambda_star", ls.lambda_star}, {"lambda", ls.lambda}, {"t0", ls.t0},
                        {"Q_t0", ls.Q_t0},     {"R", ls.R},         {"below_threshold", ls.below_threshold}};
  }
  const SpectralData spectral = eig_dense(st.ctx.sys());
  const int kmax = std::min(cfg.solver_k_max, spectral.count());
  const auto bq = beta_sequence(st.ctx.basis(), st.ctx.sys(), spectral, q, kmax, 8, cfg.seed);
  const FountainConstants fc = fountain_constants(bq, q, growth_constant(f.g, q, kAuditTmax), st.spec.length());
  std::vector<double> bp;
  DualConstants dc;
  const bool dual = f.lambda > 0.0;
  if (dual) {
    bp = beta_sequence(st.ctx.basis(), st.ctx.sys(), spectral, f.p, kmax, 8, cfg.seed);
    dc = dual_constants(bp, f.lambda, f.mu, f.p, q, delta_of(f.g, q), ec);
    j["dual"] = {{"eps0", dc.eps0}, {"delta_eps0", dc.delta_eps0}, {"C2", dc.C2}, {"Cq", dc.Cq}, {"R", dc.R}};
  }
  j["fountain"] = {{"C", fc.C}};
  std::vector<CsvRow> rows;
  for (int k = 0; k < kmax; ++k) {
    CsvRow r{std::to_string(k + 1), fd(bq[k]), fd(fc.gamma[k]), fd(fc.b_bound[k])};
    if (dual) {
      for (double v : {bp[k], dc.rho[k], dc.a_bound[k], dc.d_bound[k]}) r.push_back(fd(v));
    } else {
      r.insert(r.end(), 4, "");
    }
    rows.push_back(r);
  }
  write_csv(path_in(cfg, "geometry_k.csv"),
            {"k", "beta_q", "gamma", "b_bound", "beta_p", "rho", "a_bound", "d_bound"}, rows);
  write_text(path_in(cfg, "geometry.json"), j.dump(2) + '\n');
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_solve_mp(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  const EmbeddingConstants ec = embedding_constants(st.ctx, cfg.nl.p, cfg.nl.q);
  const MpGeometry geo = geometry_for(st, ec, cfg.nl.q);
  const SolutionRecord rec = mp_then_newton(cfg, st, geo);
  write_solutions(cfg, st, {rec});
  write_csv(path_in(cfg, "trace_1.csv"), trace_header(), trace_rows(rec.trace));
  out << "geometry: rho=" << fd(geo.rho) << " beta=" << fd(geo.beta) << '\n';
  print_records(out, st, {rec});
  return kExitOk;
}

int cmd_solve_cc(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  require_concave(st);
  const auto& f = st.ctx.forcing();
  const EmbeddingConstants ec = embedding_constants(st.ctx, f.p, cfg.nl.q);
  const LambdaStar ls = lambda_star(f.p, cfg.nl.q, f.lambda, delta_of(f.g, cfg.nl.q), ec);
  out << "lambda*=" << fd(ls.lambda_star) << " lambda=" << fd(ls.lambda) << '\n';
  if (!ls.below_threshold) {
    throw Error(Errc::GeometryFailure, "lambda=" + fd(ls.lambda) + " is not below lambda*=" + fd(ls.lambda_star));
  }
  const MpGeometry geo = cc_geometry(st.ctx, ls);
  const SolutionRecord u = mp_then_newton(cfg, st, geo);
  DescentOptions dopt;
  dopt.tol = cfg.solver_tol;
  dopt.max_iter = cfg.solver_max_iter;
  SolutionRecord v = ball_minimize(st.ctx, ls.t0, dopt);
  v.seed = cfg.seed;
  if (!v.accepted) throw Rejected{"ball minimization did not produce an accepted negative-energy solution"};
  if (!(u.energy > 0.0 && v.energy < 0.0)) throw Rejected{"energies are not ordered J(u) > 0 > J(v)"};
  write_solutions(cfg, st, {u, v});
  write_csv(path_in(cfg, "trace_1.csv"), trace_header(), trace_rows(u.trace));
  write_csv(path_in(cfg, "trace_2.csv"), trace_header(), trace_rows(v.trace));
  print_records(out, st, {u, v});
  return kExitOk;
}

int cmd_fountain(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  const SpectralData spectral = eig_dense(st.ctx.sys());
  FountainOptions fo;
  fo.tol = cfg.solver_tol;
  fo.seed = cfg.seed;
  std::vector<SolutionRecord> recs;
  try {
    recs = fountain_search(st.ctx, spectral, cfg.solver_k_max, fo);
  } catch (const Error& e) {
    if (e.code() == Errc::InsufficientSolutions) throw Rejected{e.what()};
    throw;
  }
  write_solutions(cfg, st, recs);
  print_records(out, st, recs);
  return kExitOk;
}

int cmd_dual_fountain(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  require_concave(st);
  const auto& f = st.ctx.forcing();
  const double q = cfg.nl.q;
  const SpectralData spectral = eig_dense(st.ctx.sys());
  const int kmax = std::min(cfg.solver_k_max, spectral.count());
  const EmbeddingConstants ec = embedding_constants(st.ctx, f.p, q);
  const auto bp = beta_sequence(st.ctx.basis(), st.ctx.sys(), spectral, f.p, kmax, 8, cfg.seed);
  const DualConstants dc = dual_constants(bp, f.lambda, f.mu, f.p, q, delta_of(f.g, q), ec);
  std::vector<int> ks;
  for (int k = 1; k <= kmax; ++k) ks.push_back(k);
  FountainOptions fo;
  fo.tol = cfg.solver_tol;
  fo.seed = cfg.seed;
  const auto recs = dual_fountain_search(st.ctx, spectral, ks, dc, fo);
  std::vector<CsvRow> rows;
  for (int k = 0; k < kmax; ++k) {
    rows.push_back({std::to_string(k + 1), fd(bp[k]), fd(dc.rho[k]), fd(dc.a_bound[k]), fd(dc.d_bound[k])});
  }
  write_csv(path_in(cfg, "dual_constants.csv"), {"k", "beta_p", "rho", "a_bound", "d_bound"}, rows);
  write_solutions(cfg, st, recs);
  print_records(out, st, recs);
  if (recs.size() < 4) throw Rejected{"fewer than two distinct negative-energy solution pairs"};
  return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg, true);
  const auto& f = st.ctx.forcing();
  double ball = INFINITY;
  if (f.lambda > 0.0) {
    const EmbeddingConstants ec = embedding_constants(st.ctx, f.p, cfg.nl.q);
    const LambdaStar ls = lambda_star(f.p, cfg.nl.q, f.lambda, delta_of(f.g, cfg.nl.q), ec);
    if (ls.below_threshold) ball = ls.t0;
  }
  const OracleResult res = oracle_global_min(st.ctx, kOracleWidth, kOracleStep, ball, kOracleLevels);
  CsvRow header{"energy", "ball"};
  CsvRow row{fd(res.energy), fd(ball)};
  for (int i = 0; i < res.coeffs.size(); ++i) {
    header.push_back("c" + std::to_string(i + 1));
    row.push_back(fd(res.coeffs[i]));
  }
  write_csv(path_in(cfg, "oracle.csv"), header, {row});
  out << "oracle: energy=" << fd(res.energy) << " evaluations=" << res.evaluations << '\n';
  return kExitOk;
}

int cmd_trace(const RunConfig& cfg, std::ostream& out) {
  const Setup st = setup(cfg);
  const auto& f = st.ctx.forcing();
  const EmbeddingConstants ec = embedding_constants(st.ctx, f.lambda > 0.0 ? f.p : 0.0, cfg.nl.q);
  SolutionRecord rec;
  if (cfg.solver_name == "mountain_pass") {
    rec = mp_then_newton(cfg, st, geometry_for(st, ec, cfg.nl.q));
  } else if (cfg.solver_name == "ball_min") {
    require_concave(st);
    const LambdaStar ls = lambda_star(f.p, cfg.nl.q, f.lambda, delta_of(f.g, cfg.nl.q), ec);
    DescentOptions dopt;
    dopt.tol = cfg.solver_tol;
    dopt.max_iter = cfg.solver_max_iter;
    rec = ball_minimize(st.ctx, ls.t0, dopt);
  } else {
    throw Error(Errc::BadValue, "trace supports solver.name = mountain_pass or ball_min, got '" + cfg.solver_name + "'");
  }
  write_csv(path_in(cfg, "trace.csv"), trace_header(), trace_rows(rec.trace));
  std::optional<ChainParams> chain;
  if (f.lambda > 0.0) chain = ChainParams{f.lambda, f.p, cfg.nl.q, ec.cp};
  const PsReport ps = ps_diagnostics(rec.trace, chain);
  std::ostringstream os;
  os << "max_norm=" << fd(ps.max_norm) << '\n'
     << "bounded=" << (ps.bounded ? 1 : 0) << '\n'
     << "final_residual=" << fd(ps.final_residual) << '\n'
     << "residual_ratio=" << fd(ps.residual_ratio) << '\n'
     << "chain_checked=" << (ps.chain_checked ? 1 : 0) << '\n'
     << "chain_holds=" << (ps.chain_holds ? 1 : 0) << '\n'
     << "chain_violations=" << ps.chain_violations << '\n';
  write_text(path_in(cfg, "ps.txt"), os.str());
  out << os.str();
  if (!rec.accepted) throw Rejected{"traced solver did not accept"};
  return kExitOk;
}

std::string verdict_name(const HypothesisResult& h) { return h.holds() ? "holds_on_grid" : "violated"; }

nlohmann::ordered_json hypothesis_json(const HypothesisResult& h) {
  nlohmann::ordered_json j;
  j["verdict"] = verdict_name(h);
  if (h.witness) {
    const auto& w = *h.witness;
    j["witness"] = {{"x", w.x}, {"t", w.t}, {"s", std::isnan(w.s) ? nlohmann::ordered_json() : nlohmann::ordered_json(w.s)},
                    {"margin", w.margin}};
  } else {
    j["witness"] = nullptr;
  }
  j["detail"] = h.detail;
  return j;
}

}  // namespace

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> cmds{"eig",      "audit",         "geometry", "solve-mp", "solve-cc",
                                             "fountain", "dual-fountain", "oracle",   "trace"};
  return cmds;
}

std::string render_audit_table(const AuditReport& rep) {
  std::ostringstream os;
  os << "q_candidate=" << fd(rep.q_candidate) << " tmax=" << fd(rep.tmax) << " grid=" << rep.tgrid.size() << '\n';
  os << "hypothesis  verdict        witness_t               margin\n";
  const std::pair<const char*, const HypothesisResult*> rows[] = {
      {"H1", &rep.h1}, {"H2", &rep.h2}, {"H3", &rep.h3}, {"H4", &rep.h4},
      {"H4*", &rep.h4_star}, {"AR", &rep.ar}, {"S", &rep.s}};
  for (const auto& [name, h] : rows) {
    std::string name_col = name;
    name_col.resize(12, ' ');
    std::string verdict = verdict_name(*h);
    verdict.resize(15, ' ');
    std::string t = h->witness ? fd(h->witness->t) : "-";
    t.resize(24, ' ');
    os << name_col << verdict << t << (h->witness ? fd(h->witness->margin) : "-") << '\n';
  }
  os << "a1=" << fd(rep.a1) << " a2=" << fd(rep.a2) << " C_star=" << fd(rep.C_star) << " T0=" << fd(rep.T0)
     << " zeta=" << fd(rep.zeta) << " r=" << fd(rep.r_ar) << '\n';
  for (const auto& [eps, d] : rep.delta) os << "delta(" << fd(eps) << ")=" << fd(d) << '\n';
  for (const auto& [M, c] : rep.C_M) os << "C_M(" << fd(M) << ")=" << fd(c) << '\n';
  return os.str();
}

std::string render_audit_json(const AuditReport& rep, const std::string& nl_name) {
  nlohmann::ordered_json j;
  j["nl"] = nl_name;
  j["q_candidate"] = rep.q_candidate;
  j["tmax"] = rep.tmax;
  j["grid_points"] = rep.tgrid.size();
  j["H1"] = hypothesis_json(rep.h1);
  j["H2"] = hypothesis_json(rep.h2);
  j["H3"] = hypothesis_json(rep.h3);
  j["H4"] = hypothesis_json(rep.h4);
  j["H4_star"] = hypothesis_json(rep.h4_star);
  j["AR"] = hypothesis_json(rep.ar);
  j["S"] = hypothesis_json(rep.s);
  j["a1"] = rep.a1;
  j["a2"] = rep.a2;
  j["C_star"] = rep.C_star;
  j["T0"] = rep.T0;
  j["zeta"] = rep.zeta;
  j["r"] = rep.r_ar;
  nlohmann::ordered_json delta = nlohmann::ordered_json::array();
  for (const auto& [eps, d] : rep.delta) delta.push_back({{"eps", eps}, {"delta", d}});
  j["delta"] = delta;
  nlohmann::ordered_json cm = nlohmann::ordered_json::array();
  for (const auto& [M, c] : rep.C_M) cm.push_back({{"M", M}, {"C_M", c}});
  j["C_M"] = cm;
  return j.dump(2) + '\n';
}

int run_pipeline(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(cfg.out_dir);
    if (command == "eig") return cmd_eig(cfg, out);
    if (command == "audit") return cmd_audit(cfg, out);
    if (command == "geometry") return cmd_geometry(cfg, out);
    if (command == "solve-mp") return cmd_solve_mp(cfg, out);
    if (command == "solve-cc") return cmd_solve_cc(cfg, out);
    if (command == "fountain") return cmd_fountain(cfg, out);
    if (command == "dual-fountain") return cmd_dual_fountain(cfg, out);
    if (command == "oracle") return cmd_oracle(cfg, out);
    if (command == "trace") return cmd_trace(cfg, out);
    err << "error: unknown subcommand '" << command << "'\n";
    return kExitValidation;
  } catch (const Rejected& r) {
    err << "not accepted: " << r.message << '\n';
    return kExitNotAccepted;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitValidation : kExitNotAccepted;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace fraclap
