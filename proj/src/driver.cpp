#include "graphsplit/driver.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "graphsplit/bench.hpp"
#include "graphsplit/error.hpp"
#include "graphsplit/solver.hpp"

namespace graphsplit {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, r.ptr);
}

struct Context {
  Json config;
  fs::path out;
  std::uint64_t seed = 0;
  std::vector<std::string> files;

  std::string provenance(const std::string& scheme_id, const std::string& problem) const {
    return "# graphsplit " + std::string(kVersion) + " | seed=" + std::to_string(seed) + " | scheme=" + scheme_id +
           " | problem=" + problem;
  }
  void write(const std::string& name, const std::string& text) {
    const fs::path p = out / name;
    write_text_file(p.string(), text);
    files.push_back(p.string());
  }
};

const Json& section(const Json& cfg, const char* key) {
  static const Json empty = Json::object();
  if (!cfg.contains(key)) return empty;
  if (!cfg.at(key).is_object()) fail(ErrorKind::InvalidInput, std::string("config section '") + key + "' must be an object");
  return cfg.at(key);
}

struct LoadedProblem {
  ProblemInstance problem;
  std::string label;
  bool generated = false;
};

LoadedProblem load_problem(Context& ctx) {
  const Json& pj = section(ctx.config, "problem");
  LoadedProblem lp;
  if (pj.contains("file")) {
    if (pj.contains("generator")) fail(ErrorKind::InvalidConfig, "problem needs exactly one of 'file' or 'generator'");
    lp.problem = problem_from_json(read_json_file(pj.at("file").get<std::string>()));
    lp.label = lp.problem.name + " file=" + pj.at("file").get<std::string>();
    return lp;
  }
  if (!pj.contains("generator")) fail(ErrorKind::InvalidConfig, "config needs a problem source ('file' or 'generator')");
  const std::string gen = pj.at("generator").get<std::string>();
  const std::uint64_t seed = pj.value("seed", ctx.seed);
  ctx.seed = seed;
  const std::size_t d = pj.value("d", std::size_t{20});
  if (gen == "ball_qp") {
    const std::size_t n = pj.value("n", std::size_t{10});
    lp.problem = gen_ball_qp(n, d, seed);
  } else if (gen == "matrix_game") {
    const std::size_t p = pj.value("p", std::size_t{5});
    lp.problem = gen_matrix_game(p, pj.value("d", std::size_t{10}), seed);
  } else {
    fail(ErrorKind::InvalidConfig, "unknown problem generator '" + gen + "'");
  }
  lp.label = lp.problem.provenance;
  lp.generated = true;
  return lp;
}

struct LoadedScheme {
  CoefficientScheme scheme;
  Regularity regularity = Regularity::Cocoercive;
  std::string id;
  std::optional<Preset> preset;
  std::optional<WeightedGraph> graph;

  ProblemInstance adapt(const ProblemInstance& p) const { return preset ? preset->adapt(p) : p; }
};

// `cocoercive` (from the problem) picks the regularity of presets that support both when the config is silent.
LoadedScheme load_scheme(const Context& ctx, std::size_t default_n, std::optional<bool> cocoercive = std::nullopt) {
  const Json& sj = section(ctx.config, "scheme");
  LoadedScheme ls;
  if (sj.contains("file") == sj.contains("preset"))
    fail(ErrorKind::InvalidConfig, "scheme needs exactly one of 'file' or 'preset'");
  if (sj.contains("file")) {
    const Json bundle = read_json_file(sj.at("file").get<std::string>());
    ls.scheme = scheme_from_json(bundle);
    ls.id = "file:" + sj.at("file").get<std::string>();
    if (sj.contains("regularity"))
      ls.regularity = parse_regularity(sj.at("regularity").get<std::string>());
    else if (bundle.contains("regularity"))
      ls.regularity = parse_regularity(bundle.at("regularity").get<std::string>());
    else
      ls.regularity = ls.scheme.q_is_zero() ? Regularity::Cocoercive : Regularity::Lipschitz;
    if (bundle.contains("graph")) ls.graph = graphs_from_json(bundle.at("graph")).parent();
    return ls;
  }
  PresetSpec spec = preset_spec_from_json(sj, default_n);
  if (!spec.regularity && cocoercive) spec.regularity = *cocoercive ? Regularity::Cocoercive : Regularity::Lipschitz;
  Preset pre = make_preset(spec);
  ls.scheme = pre.scheme;
  ls.regularity = pre.meta.regularity;
  ls.id = pre.meta.name;
  if (sj.contains("pqr")) ls.id += "_" + std::to_string(sj.at("pqr").get<int>());
  ls.graph = pre.graphs.parent();
  ls.preset = std::move(pre);
  return ls;
}

std::string report_text(const AssumptionReport& rep, const std::string& id) {
  std::ostringstream os;
  os << "scheme " << id << "\n";
  for (const auto& it : rep.items)
    os << (it.pass ? "PASS " : "FAIL ") << it.id << "  " << it.description << "  witness=" << fmt(it.witness) << "  ("
       << it.detail << ")\n";
  os << (rep.all_pass() ? "all required items pass\n" : "some required items fail\n");
  return os.str();
}

CommandOutcome cmd_check(Context& ctx) {
  const Json& sj = section(ctx.config, "scheme");
  std::size_t default_n = sj.value("n", std::size_t{0});
  std::optional<LoadedProblem> lp;
  if (ctx.config.contains("problem")) {
    lp = load_problem(ctx);
    default_n = lp->problem.n();
  }
  if (default_n == 0) default_n = 5;
  const LoadedScheme ls =
      load_scheme(ctx, default_n, lp ? std::optional<bool>(lp->problem.all_cocoercive()) : std::nullopt);
  const AssumptionReport rep = check_assumptions(ls.scheme);
  Json items = Json::array();
  for (const auto& it : rep.items)
    items.push_back({{"id", it.id}, {"description", it.description}, {"pass", it.pass}, {"witness", it.witness},
                     {"detail", it.detail}});
  Json out = {{"provenance", ctx.provenance(ls.id, lp ? lp->label : "none").substr(2)},
              {"scheme", ls.id},
              {"regularity", to_string(ls.regularity)},
              {"all_pass", rep.all_pass()},
              {"items", items}};
  std::string text = report_text(rep, ls.id);
  try {
    out["tau"] = compute_tau(ls.scheme, ls.regularity);
  } catch (const Error& e) {
    out["tau_error"] = e.what();
  }
  const Json& cj = section(ctx.config, "check");
  if (cj.contains("gamma")) {
    const double ell = cj.value("ell", lp ? lp->problem.ell() : 1.0);
    const auto v = check_variant_psd(ls.scheme, cj.at("gamma").get<double>(), ell, ls.regularity);
    out["variant_psd"] = {{"pass", v.pass}, {"min_eigenvalue", v.min_eigenvalue}, {"ell", ell}};
    text += std::string("variant PSD (optional): ") + (v.pass ? "PASS" : "FAIL") + " min eigenvalue " +
            fmt(v.min_eigenvalue) + "\n";
  }
  if (ls.graph) {
    const auto loc = locality_audit(ls.scheme, *ls.graph);
    out["locality_violations"] = loc.violations.size();
    text += "locality violations: " + std::to_string(loc.violations.size()) + "\n";
  }
  ctx.write("check_report.json", out.dump(2) + "\n");
  ctx.write("check_report.txt", text);
  CommandOutcome res;
  res.exit_code = rep.all_pass() ? 0 : 1;
  res.message = text;
  return res;
}

std::optional<Vector> reference_for(const Context& ctx, const LoadedProblem& lp) {
  const Json& sj = section(ctx.config, "solver");
  if (lp.problem.reference) return lp.problem.reference;
  if (!sj.value("reference", true)) return std::nullopt;
  if (!lp.generated && lp.problem.name != "ball_qp" && lp.problem.name != "matrix_game") return std::nullopt;
  return reference_solution(lp.problem).x;
}

SolverConfig solver_config(const Context& ctx, const ParameterRanges& ranges, const LoadedScheme& ls,
                           const ProblemInstance& adapted) {
  const Json& sj = section(ctx.config, "solver");
  SolverConfig cfg;
  cfg.regularity = ls.regularity;
  if (sj.contains("gamma")) {
    cfg.gamma = sj.at("gamma").get<double>();
  } else {
    const double gh = sj.value("gamma_hat", 0.5);
    if (ranges.unbounded()) fail(ErrorKind::InvalidConfig, "gamma_max is unbounded (tau * ell = 0); set solver.gamma");
    cfg.gamma = gh * *ranges.gamma_max;
  }
  cfg.lambda = sj.contains("lambda") ? sj.at("lambda").get<double>()
                                     : sj.value("lambda_hat", 0.9) * ranges.lambda_max(cfg.gamma);
  cfg.max_iters = sj.value("max_iters", std::size_t{1000});
  cfg.residual_tol = sj.value("residual_tol", 0.0);
  if (sj.contains("error_tol")) cfg.error_tol = sj.at("error_tol").get<double>();
  cfg.mode = parse_dual_mode(sj.value("mode", std::string("full_z")));
  cfg.record_every = sj.value("record_every", std::size_t{1});
  cfg.timing = sj.value("timing", false);
  if (sj.contains("z0_seed")) {
    Rng rng = Rng(sj.at("z0_seed").get<std::uint64_t>()).substream(0);
    const std::size_t rows = cfg.mode == DualMode::FullZ ? ls.scheme.m() : ls.scheme.n();
    Block z(rows, adapted.dim);
    if (cfg.mode == DualMode::FullZ) {
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < adapted.dim; ++k) z.matrix()(i, k) = rng.normal();
    } else {
      Block zf(ls.scheme.m(), adapted.dim);
      for (std::size_t i = 0; i < ls.scheme.m(); ++i)
        for (std::size_t k = 0; k < adapted.dim; ++k) zf.matrix()(i, k) = rng.normal();
      z = lift_apply(ls.scheme.M(), zf);
    }
    cfg.initial_dual = z;
  }
  return cfg;
}

std::string trace_csv(const std::string& header, const std::vector<TraceRow>& trace) {
  std::string s = header + "\nk,residual,consensus_gap,relative_error,elapsed_seconds\n";
  for (const auto& r : trace) {
    s += std::to_string(r.k) + "," + fmt(r.residual) + "," + fmt(r.consensus_gap) + "," +
         (r.relative_error ? fmt(*r.relative_error) : "") + "," + (r.elapsed_seconds ? fmt(*r.elapsed_seconds) : "") +
         "\n";
  }
  return s;
}

CommandOutcome cmd_run(Context& ctx) {
  const LoadedProblem lp = load_problem(ctx);
  const LoadedScheme ls = load_scheme(ctx, lp.problem.n(), lp.problem.all_cocoercive());
  const ProblemInstance adapted = ls.adapt(lp.problem);
  const auto ranges = parameter_ranges(ls.scheme, adapted.ell(), ls.regularity);
  SolverConfig cfg = solver_config(ctx, ranges, ls, adapted);
  cfg.reference = reference_for(ctx, lp);
  const SolveResult r = solve(ls.scheme, adapted, cfg);
  ctx.write("trace.csv", trace_csv(ctx.provenance(ls.id, lp.label), r.trace));
  const auto& last = r.trace.back();
  Json summary = {{"provenance", ctx.provenance(ls.id, lp.label).substr(2)},
                  {"scheme", ls.id},
                  {"regularity", to_string(ls.regularity)},
                  {"gamma", cfg.gamma},
                  {"lambda", cfg.lambda},
                  {"tau", ranges.tau},
                  {"ell", ranges.ell},
                  {"gamma_max", ranges.unbounded() ? Json("inf") : Json(*ranges.gamma_max)},
                  {"iterations", r.iterations},
                  {"converged", r.converged},
                  {"final_residual", last.residual},
                  {"final_consensus_gap", last.consensus_gap},
                  {"consensus_point", to_json_vector(r.consensus)}};
  if (last.relative_error) summary["final_relative_error"] = *last.relative_error;
  ctx.write("summary.json", summary.dump(2) + "\n");
  CommandOutcome res;
  res.message = "run " + ls.id + ": " + std::to_string(r.iterations) + " iterations, residual " + fmt(last.residual) +
                (last.relative_error ? ", relative error " + fmt(*last.relative_error) : "");
  return res;
}

std::vector<double> grid_from(const Json& j, const char* key) {
  if (!j.contains(key)) return default_grid();
  return j.at(key).get<std::vector<double>>();
}

std::string sweep_csv(const std::string& header, const SweepResult& r) {
  std::string s = header + "\ngamma_hat,lambda_hat,final_error,iters_to_tol,seconds\n";
  for (const auto& c : r.cells)
    s += fmt(c.gamma_hat) + "," + fmt(c.lambda_hat) + "," + fmt(c.final_error) + "," +
         (c.iters_to_tol ? std::to_string(*c.iters_to_tol) : "") + "," + (c.seconds ? fmt(*c.seconds) : "") + "\n";
  return s;
}

SweepSpec sweep_spec(const Json& j, std::size_t default_iters) {
  SweepSpec sp;
  sp.gamma_hats = grid_from(j, "gamma_hats");
  sp.lambda_hats = grid_from(j, "lambda_hats");
  sp.max_iters = j.value("max_iters", default_iters);
  if (j.contains("error_tol")) sp.error_tol = j.at("error_tol").get<double>();
  sp.mode = parse_dual_mode(j.value("mode", std::string("reduced_v")));
  sp.timing = j.value("timing", false);
  return sp;
}

CommandOutcome cmd_sweep(Context& ctx) {
  const LoadedProblem lp = load_problem(ctx);
  const LoadedScheme ls = load_scheme(ctx, lp.problem.n(), lp.problem.all_cocoercive());
  const ProblemInstance adapted = ls.adapt(lp.problem);
  const auto ref = reference_for(ctx, lp);
  if (!ref) fail(ErrorKind::InvalidConfig, "sweep needs a reference solution");
  const SweepSpec sp = sweep_spec(section(ctx.config, "sweep"), 1000);
  const SweepResult r = sweep(ls.scheme, ls.regularity, adapted, *ref, sp);
  ctx.write("sweep.csv", sweep_csv(ctx.provenance(ls.id, lp.label), r));
  const auto& b = r.cells[r.best];
  CommandOutcome res;
  res.message = "sweep " + ls.id + ": best gamma_hat=" + fmt(b.gamma_hat) + " lambda_hat=" + fmt(b.lambda_hat) +
                " final_error=" + fmt(b.final_error);
  return res;
}

CommandOutcome cmd_bench(Context& ctx) {
  const LoadedProblem lp = load_problem(ctx);
  const Json& bj = section(ctx.config, "bench");
  const auto ref = reference_for(ctx, lp);
  if (!ref) fail(ErrorKind::InvalidConfig, "bench needs a reference solution");
  const std::string suite =
      bj.value("suite", std::string(lp.problem.all_cocoercive() ? "cocoercive" : "lipschitz"));
  std::vector<SuiteEntry> entries;
  if (suite == "cocoercive")
    entries = cocoercive_suite(lp.problem.n());
  else if (suite == "lipschitz")
    entries = lipschitz_suite(lp.problem.n());
  else
    fail(ErrorKind::InvalidConfig, "bench.suite must be 'cocoercive' or 'lipschitz'");
  const SweepSpec sp = sweep_spec(bj, bj.value("max_iters", std::size_t{2000}));
  const std::size_t record_every = bj.value("record_every", std::size_t{10});

  std::string summary = ctx.provenance("bench_" + suite, lp.label) +
                        "\nalgorithm,gamma_hat,lambda_hat,final_error,iterations,iters_to_tol\n";
  for (const auto& e : entries) {
    const Preset pre = make_preset(e.spec);
    const ProblemInstance adapted = pre.adapt(lp.problem);
    const SweepResult r = sweep(pre.scheme, pre.meta.regularity, adapted, *ref, sp);
    const auto& b = r.cells[r.best];
    const auto ranges = parameter_ranges(pre.scheme, adapted.ell(), pre.meta.regularity);
    SolverConfig cfg = cell_config(ranges, b.gamma_hat, b.lambda_hat, sp.max_iters);
    cfg.reference = ref;
    cfg.record_every = record_every;
    cfg.mode = sp.mode;
    cfg.timing = sp.timing;
    const SolveResult run = solve(pre.scheme, adapted, cfg);
    ctx.write("bench_" + e.label + ".csv", trace_csv(ctx.provenance(e.label, lp.label), run.trace));
    summary += e.label + "," + fmt(b.gamma_hat) + "," + fmt(b.lambda_hat) + "," +
               fmt(run.trace.back().relative_error.value_or(NAN)) + "," + std::to_string(run.iterations) + "," +
               (b.iters_to_tol ? std::to_string(*b.iters_to_tol) : "") + "\n";
  }
  ctx.write("bench_summary.csv", summary);
  CommandOutcome res;
  res.message = "bench " + suite + ": " + std::to_string(entries.size()) + " algorithms";
  return res;
}

CommandOutcome cmd_equivalence(Context& ctx) {
  const Json& ej = section(ctx.config, "equivalence");
  const std::uint64_t seed = ej.value("seed", ctx.seed);
  ctx.seed = seed;
  const auto results = reduction_suite(seed, ej.value("iters", std::size_t{200}), ej.value("tol", 1e-10));
  std::string csv = ctx.provenance("reduction_suite", "random small instances") +
                    "\nname,iterations,max_deviation,tolerance,pass,matching\n";
  bool all = true;
  std::string text;
  for (const auto& r : results) {
    all = all && r.pass;
    csv += r.name + "," + std::to_string(r.iterations) + "," + fmt(r.max_deviation) + "," + fmt(r.tolerance) + "," +
           (r.pass ? "pass" : "fail") + ",\"" + r.matching + "\"\n";
    text += (r.pass ? "PASS " : "FAIL ") + r.name + " max deviation " + fmt(r.max_deviation) + "\n";
  }
  ctx.write("equivalence.csv", csv);
  CommandOutcome res;
  res.exit_code = all ? 0 : 1;
  res.message = text;
  return res;
}

}  // namespace

void apply_override(Json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) fail(ErrorKind::Io, "override '" + assignment + "' must be key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::parse_error&) {
    value = raw;
  }
  Json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) fail(ErrorKind::Io, "override key '" + key + "' has an empty component");
    if (!node->is_object()) *node = Json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

CommandOutcome run_command(const std::string& command, const Json& config, const std::string& out_dir) {
  CommandOutcome res;
  Context ctx;
  ctx.config = config.is_null() ? Json::object() : config;
  try {
    if (!ctx.config.is_object()) fail(ErrorKind::Io, "config must be a JSON object");
    ctx.seed = ctx.config.value("seed", std::uint64_t{0});
    ctx.out = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory '" + ctx.out.string() + "': " + ec.message());
    if (command == "check")
      res = cmd_check(ctx);
    else if (command == "run")
      res = cmd_run(ctx);
    else if (command == "sweep")
      res = cmd_sweep(ctx);
    else if (command == "bench")
      res = cmd_bench(ctx);
    else if (command == "equivalence")
      res = cmd_equivalence(ctx);
    else
      fail(ErrorKind::Io, "unknown command '" + command + "'");
  } catch (const Error& e) {
    const bool io = e.kind() == ErrorKind::Io || e.kind() == ErrorKind::InvalidInput;
    res.exit_code = io ? 2 : 1;
    res.message = std::string(to_string(e.kind())) + ": " + e.what();
  } catch (const Json::exception& e) {
    res.exit_code = 2;
    res.message = std::string("config error: ") + e.what();
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.message = std::string("error: ") + e.what();
  }
  res.files = ctx.files;
  return res;
}

}  // namespace graphsplit
