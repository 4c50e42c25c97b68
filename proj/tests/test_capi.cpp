#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "graphsplit/graphsplit.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  gs_string_free(s);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("graphsplit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + GRAPHSPLIT_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kProblem = R"({
  "format": "graphsplit-problem", "kind": "ball_qp", "dim": 2,
  "resolvents": [
    {"kind": "normal_cone_ball", "center": [5, 0], "radius": 1},
    {"kind": "normal_cone_ball", "center": [5, 0], "radius": 1}
  ],
  "forwards": [{"kind": "quadratic_gradient", "matrix": {"rows": 2, "cols": 2, "data": [1, 0, 0, 1]}}],
  "reference": [4, 0]
})";

}  // namespace

TEST_CASE("scheme handles") {
  CHECK(std::string(gs_version()).size() > 0);
  gs_scheme* s = nullptr;
  REQUIRE(gs_scheme_from_preset(R"({"preset": "par_up_fadr", "n": 5, "mu2": 0.5})", &s) == GS_OK);
  size_t n = 0, m = 0, p = 0;
  CHECK(gs_scheme_dims(s, &n, &m, &p) == GS_OK);
  CHECK(n == 5);
  CHECK(m == 4);
  CHECK(p == 3);
  int pass = 0;
  char* report = nullptr;
  CHECK(gs_scheme_check(s, &pass, &report) == GS_OK);
  CHECK(pass == 1);
  CHECK(json::parse(take(report))["items"].size() == 7);
  double tau = 0;
  CHECK(gs_scheme_tau(s, "lipschitz", &tau) == GS_OK);
  CHECK(tau == doctest::Approx(10.0));
  CHECK(gs_scheme_tau(s, "cocoercive", &tau) == GS_ERR_INVALID_CONFIG);
  CHECK(std::string(gs_last_error()).size() > 0);

  char* bundle = nullptr;
  REQUIRE(gs_scheme_to_json(s, &bundle) == GS_OK);
  gs_scheme* s2 = nullptr;
  CHECK(gs_scheme_from_json(bundle, &s2) == GS_OK);
  gs_string_free(bundle);
  double tau2 = 0;
  CHECK(gs_scheme_tau(s2, "lipschitz", &tau2) == GS_OK);
  CHECK(tau2 == doctest::Approx(tau).epsilon(1e-12));
  gs_scheme_free(s2);
  gs_scheme_free(s);
}

TEST_CASE("errors are reported through status codes") {
  gs_scheme* s = nullptr;
  CHECK(gs_scheme_from_json("{not json", &s) == GS_ERR_INVALID_INPUT);
  CHECK(s == nullptr);
  CHECK(gs_scheme_from_json(R"({"format": "graphsplit-scheme"})", &s) == GS_ERR_INVALID_INPUT);
  CHECK(gs_scheme_from_preset(R"({"preset": "unknown"})", &s) != GS_OK);
  CHECK(gs_scheme_dims(nullptr, nullptr, nullptr, nullptr) == GS_ERR_INVALID_INPUT);
  CHECK(std::string(gs_last_error()).find("null") != std::string::npos);
  gs_problem* p = nullptr;
  CHECK(gs_problem_from_json(R"({"dim": 2, "resolvents": [{"kind": "nope"}]})", &p) == GS_ERR_INVALID_INPUT);
}

TEST_CASE("solve through the C interface") {
  gs_scheme* s = nullptr;
  gs_problem* p = nullptr;
  REQUIRE(gs_scheme_from_preset(R"({"preset": "davis_yin"})", &s) == GS_OK);
  REQUIRE(gs_problem_from_json(kProblem, &p) == GS_OK);
  size_t n = 0, dim = 0;
  CHECK(gs_problem_dims(p, &n, &dim) == GS_OK);
  CHECK(n == 2);
  CHECK(dim == 2);
  gs_result* r = nullptr;
  REQUIRE(gs_solve(s, p, R"({"gamma_hat": 0.5, "lambda_hat": 0.9, "max_iters": 3000, "residual_tol": 1e-13})", &r) ==
          GS_OK);
  double x[2];
  CHECK(gs_result_consensus(r, x, 2) == GS_OK);
  CHECK(x[0] == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(std::abs(x[1]) < 1e-8);
  CHECK(gs_result_consensus(r, x, 3) == GS_ERR_INVALID_INPUT);
  char* summary = nullptr;
  CHECK(gs_result_summary(r, &summary) == GS_OK);
  const json js = json::parse(take(summary));
  CHECK(js["converged"] == true);
  CHECK(js["final_relative_error"].get<double>() < 1e-8);
  char* csv = nullptr;
  CHECK(gs_result_trace_csv(r, &csv) == GS_OK);
  CHECK(take(csv).rfind("k,residual,consensus_gap,relative_error,elapsed_seconds\n0,", 0) == 0);
  gs_result_free(r);

  r = nullptr;
  CHECK(gs_solve(s, p, R"({"gamma_hat": 1.5})", &r) == GS_ERR_INVALID_CONFIG);
  CHECK(std::string(gs_last_error()).find("gamma_max") != std::string::npos);
  CHECK(r == nullptr);
  gs_problem_free(p);
  gs_scheme_free(s);
}

TEST_CASE("config overrides") {
  char* out = nullptr;
  REQUIRE(gs_config_set(R"({"solver": {"gamma_hat": 0.5}})", "solver.lambda_hat=0.25", &out) == GS_OK);
  json j = json::parse(take(out));
  CHECK(j["solver"]["gamma_hat"] == 0.5);
  CHECK(j["solver"]["lambda_hat"] == 0.25);
  REQUIRE(gs_config_set("", "scheme.preset=seq_fb", &out) == GS_OK);
  CHECK(json::parse(take(out))["scheme"]["preset"] == "seq_fb");
  CHECK(gs_config_set("{}", "novalue", &out) == GS_ERR_IO);
}

TEST_CASE("command runner") {
  const fs::path dir = scratch("capi_cmd");
  char* msg = nullptr;
  int code = -1;
  CHECK(gs_run_command("check", R"({"scheme": {"preset": "seq_fb", "n": 4}})", dir.string().c_str(), &msg, &code) ==
        GS_OK);
  take(msg);
  CHECK(code == 0);
  CHECK(fs::exists(dir / "check_report.json"));
  CHECK(gs_run_command("check", "{oops", dir.string().c_str(), &msg, &code) == GS_OK);
  take(msg);
  CHECK(code == 2);
  CHECK(gs_run_command("launch", "{}", dir.string().c_str(), &msg, &code) == GS_OK);
  take(msg);
  CHECK(code == 2);
}

TEST_CASE("command line exit codes and outputs") {
  const fs::path dir = scratch("cli");
  const fs::path log = dir / "log.txt";

  CHECK(cli("check --set scheme.preset=seq_fb --set scheme.n=5 --out \"" + (dir / "a").string() + "\"", log) == 0);
  const json rep = json::parse(slurp(dir / "a" / "check_report.json"));
  CHECK(rep["all_pass"] == true);
  CHECK(slurp(dir / "a" / "check_report.txt").find("PASS n_delta") != std::string::npos);

  // scheme bundle with doubled N
  gs_scheme* s = nullptr;
  REQUIRE(gs_scheme_from_preset(R"({"preset": "seq_fb", "n": 4})", &s) == GS_OK);
  char* bundle = nullptr;
  REQUIRE(gs_scheme_to_json(s, &bundle) == GS_OK);
  gs_scheme_free(s);
  json b = json::parse(take(bundle));
  for (auto& v : b["N"]["data"]) v = 2 * v.get<double>();
  std::ofstream(dir / "doubled.json") << b.dump();
  std::ofstream(dir / "doubled_cfg.json") << json{{"scheme", {{"file", (dir / "doubled.json").string()}}}}.dump();
  CHECK(cli("check --config \"" + (dir / "doubled_cfg.json").string() + "\" --out \"" + (dir / "b").string() + "\"",
            log) == 1);
  const json bad = json::parse(slurp(dir / "b" / "check_report.json"));
  bool n_delta_failed = false;
  for (const auto& it : bad["items"])
    if (it["id"] == "n_delta") n_delta_failed = it["pass"] == false;
  CHECK(n_delta_failed);

  CHECK(cli("check --set scheme.file=/nonexistent/scheme.json --out \"" + dir.string() + "\"", log) == 2);
  CHECK(cli("check --config /nonexistent/config.json", log) == 2);
  std::ofstream(dir / "broken.json") << "{\"scheme\": ";
  CHECK(cli("check --config \"" + (dir / "broken.json").string() + "\" --out \"" + dir.string() + "\"", log) == 2);
  CHECK(cli("frobnicate", log) == 2);

  const std::string run = "run --set scheme.preset=seq_fb --set problem.generator=ball_qp --set problem.n=3 "
                          "--set problem.d=4 --set problem.seed=9 --set solver.max_iters=200 ";
  CHECK(cli(run + "--set solver.gamma_hat=1.5 --out \"" + dir.string() + "\"", log) == 1);
  CHECK(slurp(log).find("gamma_max") != std::string::npos);

  CHECK(cli(run + "--out \"" + (dir / "r1").string() + "\"", log) == 0);
  CHECK(cli(run + "--out \"" + (dir / "r2").string() + "\"", log) == 0);
  const std::string t1 = slurp(dir / "r1" / "trace.csv");
  CHECK(t1.rfind("# graphsplit ", 0) == 0);
  CHECK(t1.find("\nk,residual,consensus_gap,relative_error,elapsed_seconds\n") != std::string::npos);
  CHECK(t1 == slurp(dir / "r2" / "trace.csv"));
  const json summary = json::parse(slurp(dir / "r1" / "summary.json"));
  CHECK(summary["iterations"] == 200);

  CHECK(cli("sweep --set scheme.preset=complete --set problem.generator=ball_qp --set problem.n=3 "
            "--set problem.d=3 --set sweep.gamma_hats=[0.3,0.6] --set sweep.lambda_hats=[0.5] "
            "--set sweep.max_iters=100 --out \"" + (dir / "s").string() + "\"",
            log) == 0);
  const std::string sw = slurp(dir / "s" / "sweep.csv");
  CHECK(sw.find("gamma_hat,lambda_hat,final_error,iters_to_tol,seconds") != std::string::npos);

  CHECK(cli("equivalence --set equivalence.iters=100 --out \"" + (dir / "e").string() + "\"", log) == 0);
  CHECK(slurp(dir / "e" / "equivalence.csv").find(",fail,") == std::string::npos);
}

TEST_CASE("bench writes one trace per algorithm") {
  const fs::path dir = scratch("bench");
  const fs::path log = dir / "log.txt";
  CHECK(cli("bench --set problem.generator=ball_qp --set problem.n=4 --set problem.d=4 --set problem.seed=2 "
            "--set bench.gamma_hats=[0.5,0.9] --set bench.lambda_hats=[0.9] --set bench.max_iters=300 "
            "--out \"" + dir.string() + "\"",
            log) == 0);
  int traces = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("bench_", 0) == 0 && name != "bench_summary.csv") ++traces;
  }
  CHECK(traces == 7);
  CHECK(fs::exists(dir / "bench_summary.csv"));
}
