#include "graphsplit/graphsplit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "graphsplit/driver.hpp"
#include "graphsplit/error.hpp"
#include "graphsplit/json_io.hpp"
#include "graphsplit/solver.hpp"

using namespace graphsplit;

struct gs_scheme {
  CoefficientScheme scheme;
};
struct gs_problem {
  ProblemInstance problem;
};
struct gs_result {
  SolveResult result;
  double gamma = 0;
  double lambda = 0;
};

namespace {

thread_local std::string last_error;

gs_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return GS_ERR_INVALID_INPUT;
    case ErrorKind::InvalidConfig: return GS_ERR_INVALID_CONFIG;
    case ErrorKind::UnsupportedScheme: return GS_ERR_UNSUPPORTED_SCHEME;
    case ErrorKind::Divergence: return GS_ERR_DIVERGENCE;
    case ErrorKind::Io: return GS_ERR_IO;
    case ErrorKind::Internal: return GS_ERR_INTERNAL;
  }
  return GS_ERR_INTERNAL;
}

template <class F>
gs_status guard(F&& f) {
  last_error.clear();
  try {
    f();
    return GS_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const Json::exception& e) {
    last_error = e.what();
    return GS_ERR_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GS_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorKind::InvalidInput, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* gs_version(void) { return kVersion; }
const char* gs_last_error(void) { return last_error.c_str(); }
void gs_string_free(char* s) { std::free(s); }

gs_status gs_scheme_from_json(const char* json, gs_scheme** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new gs_scheme{scheme_from_json(Json::parse(json))};
  });
}

gs_status gs_scheme_from_preset(const char* preset_json, gs_scheme** out) {
  return guard([&] {
    need(preset_json, "preset_json");
    need(out, "out");
    const Json j = Json::parse(preset_json);
    *out = new gs_scheme{make_preset(preset_spec_from_json(j, j.value("n", std::size_t{5}))).scheme};
  });
}

void gs_scheme_free(gs_scheme* s) { delete s; }

gs_status gs_scheme_dims(const gs_scheme* s, size_t* n, size_t* m, size_t* p) {
  return guard([&] {
    need(s, "scheme");
    if (n) *n = s->scheme.n();
    if (m) *m = s->scheme.m();
    if (p) *p = s->scheme.p();
  });
}

gs_status gs_scheme_check(const gs_scheme* s, int* all_pass, char** report_json) {
  return guard([&] {
    need(s, "scheme");
    const auto rep = check_assumptions(s->scheme);
    if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
    if (report_json) {
      Json items = Json::array();
      for (const auto& it : rep.items)
        items.push_back({{"id", it.id}, {"pass", it.pass}, {"witness", it.witness}, {"detail", it.detail}});
      *report_json = dup(Json{{"all_pass", rep.all_pass()}, {"items", items}}.dump());
    }
  });
}

gs_status gs_scheme_tau(const gs_scheme* s, const char* regularity, double* tau) {
  return guard([&] {
    need(s, "scheme");
    need(regularity, "regularity");
    need(tau, "tau");
    *tau = compute_tau(s->scheme, parse_regularity(regularity));
  });
}

gs_status gs_scheme_to_json(const gs_scheme* s, char** json) {
  return guard([&] {
    need(s, "scheme");
    need(json, "json");
    *json = dup(to_json(s->scheme).dump());
  });
}

gs_status gs_problem_from_json(const char* json, gs_problem** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new gs_problem{problem_from_json(Json::parse(json))};
  });
}

void gs_problem_free(gs_problem* p) { delete p; }

gs_status gs_problem_dims(const gs_problem* p, size_t* n, size_t* dim) {
  return guard([&] {
    need(p, "problem");
    if (n) *n = p->problem.n();
    if (dim) *dim = p->problem.dim;
  });
}

gs_status gs_solve(const gs_scheme* s, const gs_problem* p, const char* config_json, gs_result** out) {
  return guard([&] {
    need(s, "scheme");
    need(p, "problem");
    need(out, "out");
    const Json j = config_json ? Json::parse(config_json) : Json::object();
    SolverConfig cfg;
    cfg.regularity = parse_regularity(
        j.value("regularity", std::string(p->problem.all_cocoercive() ? "cocoercive" : "lipschitz")));
    const auto ranges = parameter_ranges(s->scheme, p->problem.ell(), cfg.regularity);
    if (j.contains("gamma")) {
      cfg.gamma = j.at("gamma").get<double>();
    } else {
      if (ranges.unbounded()) fail(ErrorKind::InvalidConfig, "gamma_max is unbounded; set gamma");
      cfg.gamma = j.value("gamma_hat", 0.5) * *ranges.gamma_max;
    }
    cfg.lambda = j.contains("lambda") ? j.at("lambda").get<double>()
                                      : j.value("lambda_hat", 0.9) * ranges.lambda_max(cfg.gamma);
    cfg.max_iters = j.value("max_iters", std::size_t{1000});
    cfg.residual_tol = j.value("residual_tol", 0.0);
    cfg.mode = parse_dual_mode(j.value("mode", std::string("full_z")));
    cfg.record_every = j.value("record_every", std::size_t{1});
    if (p->problem.reference) cfg.reference = p->problem.reference;
    *out = new gs_result{solve(s->scheme, p->problem, cfg), cfg.gamma, cfg.lambda};
  });
}

void gs_result_free(gs_result* r) { delete r; }

gs_status gs_result_summary(const gs_result* r, char** json) {
  return guard([&] {
    need(r, "result");
    need(json, "json");
    const auto& last = r->result.trace.back();
    Json j = {{"gamma", r->gamma},
              {"lambda", r->lambda},
              {"iterations", r->result.iterations},
              {"converged", r->result.converged},
              {"final_residual", last.residual},
              {"final_consensus_gap", last.consensus_gap}};
    if (last.relative_error) j["final_relative_error"] = *last.relative_error;
    *json = dup(j.dump());
  });
}

gs_status gs_result_trace_csv(const gs_result* r, char** csv) {
  return guard([&] {
    need(r, "result");
    need(csv, "csv");
    std::string s = "k,residual,consensus_gap,relative_error,elapsed_seconds\n";
    char buf[128];
    for (const auto& row : r->result.trace) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", row.k, row.residual, row.consensus_gap);
      s += buf;
      if (row.relative_error) {
        std::snprintf(buf, sizeof buf, "%.17g", *row.relative_error);
        s += buf;
      }
      s += ",";
      if (row.elapsed_seconds) {
        std::snprintf(buf, sizeof buf, "%.17g", *row.elapsed_seconds);
        s += buf;
      }
      s += "\n";
    }
    *csv = dup(s);
  });
}

gs_status gs_result_consensus(const gs_result* r, double* out, size_t dim) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    const Vector& c = r->result.consensus;
    if (static_cast<size_t>(c.size()) != dim)
      fail(ErrorKind::InvalidInput, "dim does not match the consensus point size " + std::to_string(c.size()));
    for (size_t i = 0; i < dim; ++i) out[i] = c[static_cast<Eigen::Index>(i)];
  });
}

gs_status gs_config_set(const char* config_json, const char* assignment, char** out_json) {
  return guard([&] {
    need(assignment, "assignment");
    need(out_json, "out_json");
    Json cfg = config_json && *config_json ? Json::parse(config_json) : Json::object();
    apply_override(cfg, assignment);
    *out_json = dup(cfg.dump());
  });
}

gs_status gs_run_command(const char* command, const char* config_json, const char* out_dir, char** message,
                         int* exit_code) {
  return guard([&] {
    need(command, "command");
    Json cfg = Json::object();
    CommandOutcome res;
    bool parsed = true;
    if (config_json && *config_json) {
      try {
        cfg = Json::parse(config_json);
      } catch (const Json::parse_error& e) {
        parsed = false;
        res.exit_code = 2;
        res.message = std::string("config parse error: ") + e.what();
      }
    }
    if (parsed) res = run_command(command, cfg, out_dir ? out_dir : ".");
    if (exit_code) *exit_code = res.exit_code;
    if (message) *message = dup(res.message);
  });
}

}  // extern "C"
