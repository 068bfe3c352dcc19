// End-to-end tests for the gna binary: real process invocations via popen,
// asserting stdout content, JSON report shape, and exit codes.
//
// GNA_CLI_PATH and GNA_SAMPLES_DIR are injected as compile definitions.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded; exit_code is the real process status.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd =
      env_prefix + std::string(GNA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const char* name) {
  return std::string(GNA_SAMPLES_DIR) + "/" + name;
}

json parse_json(const RunResult& r) {
  REQUIRE(!r.out.empty());
  return json::parse(r.out);
}

void write_file(const std::string& path, const std::string& body) {
  FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs(body.c_str(), f);
  std::fclose(f);
}

} // namespace

TEST_CASE("classify pretty output names the classification") {
  const RunResult r = run("classify 'eps^2'");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("strictly_positive") != std::string::npos);
  CHECK(r.out.find("grid: dyadic") != std::string::npos);
}

TEST_CASE("classify json carries value, report, and config") {
  const RunResult r = run("--output json classify 'eps^2'");
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["command"] == "classify");
  CHECK(j["expression"] == "eps^2");
  CHECK(j["grid"]["kind"] == "dyadic");
  CHECK(j["grid"]["k_min"] == 4);
  CHECK(j["grid"]["k_max"] == 40);
  CHECK(j["grid"]["size"] == 37);
  CHECK(j["config"]["m_neg"] == 8);
  CHECK(j["config"]["m_inv"] == 8);
  CHECK(j["report"]["classification"] == "strictly_positive");
  CHECK(j["report"]["slope"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["report"]["tail_start"] == 18);
  CHECK(j["value"]["kind"] == "real");
  REQUIRE(j["value"]["samples"].size() == 37);
  // eps(0) = 2^-4, so the first sample of eps^2 is exactly 2^-8.
  CHECK(j["value"]["samples"][0].get<double>() == 0.00390625);
}

TEST_CASE("json output is byte-identical across runs") {
  const RunResult a = run("--output json eigen " + sample("perturbed_symmetric.json") +
                          " --kind hermitian");
  const RunResult b = run("--output json eigen " + sample("perturbed_symmetric.json") +
                          " --kind hermitian");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("grid override changes the sample count") {
  const RunResult r = run("--grid dyadic:4:11 --output json classify eps");
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["grid"]["k_max"] == 11);
  CHECK(j["value"]["samples"].size() == 8);
}

TEST_CASE("threshold flags reach the classifier") {
  const RunResult base = run("--output json classify 'eps^6'");
  CHECK(parse_json(base)["report"]["classification"] == "strictly_positive");

  // Lowering the negligibility order to 4 absorbs an order-6 net.
  const RunResult low = run("--m-neg 4 --output json classify 'eps^6'");
  CHECK(low.exit_code == 0);
  const json j = parse_json(low);
  CHECK(j["config"]["m_neg"] == 4);
  CHECK(j["report"]["classification"] == "negligible");
}

TEST_CASE("det reports the determinant and invertibility") {
  const RunResult r = run("--output json det " + sample("rotation_block.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["command"] == "det");
  CHECK(j["det"]["kind"] == "real");
  CHECK(j["det"]["samples"][0].get<double>() == 9.0);
  CHECK(j["report"]["classification"] == "strictly_positive");
  CHECK(j["invertible"] == true);
}

TEST_CASE("det of an idempotent projector is exactly zero") {
  const RunResult r = run("--output json det " + sample("interleaved_projector.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  for (const auto& s : j["det"]["samples"]) CHECK(s.get<double>() == 0.0);
  CHECK(j["report"]["classification"] == "negligible");
  CHECK(j["invertible"] == false);
}

TEST_CASE("det --shift evaluates the shifted determinant") {
  const RunResult r = run("--output json det " + sample("interleaved_projector.json") +
                          " --shift 0.5");
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["shift"] == "0.5");
  // det(diag(1-c, c) - I/2) = -(c - 1/2)^2 = -1/4 for idempotent c.
  for (const auto& s : j["det"]["samples"]) CHECK(s.get<double>() == -0.25);
  CHECK(j["invertible"] == true);
}

TEST_CASE("parse errors exit 2 with a located json error") {
  const RunResult r = run("--output json classify 'eps^'");
  CHECK(r.exit_code == 2);
  const json j = parse_json(r);
  CHECK(j["error"]["type"] == "parse");
  CHECK(j["error"]["offset"] == 4);
  CHECK(j["error"].contains("expected"));
}

TEST_CASE("eval errors exit 2 and name the failing sample") {
  const RunResult r = run("--output json classify '1/0'");
  CHECK(r.exit_code == 2);
  const json j = parse_json(r);
  CHECK(j["error"]["type"] == "eval");
  CHECK(j["error"]["sample_index"] == 0);
}

TEST_CASE("solve returns the solution with a residual verdict") {
  const RunResult r = run("--output json solve " + sample("rotation_block.json") +
                          " " + sample("idempotent_pair_column.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["solution"]["n"] == 2);
  CHECK(j["residual_report"]["classification"] == "negligible");
}

TEST_CASE("solve on a singular matrix exits 3 with determinant evidence") {
  const RunResult r = run("--output json solve " +
                          sample("interleaved_projector.json") + " " +
                          sample("idempotent_pair_column.json"));
  CHECK(r.exit_code == 3);
  const json j = parse_json(r);
  CHECK(j["error"]["type"] == "precondition");
  CHECK(j["error"]["det_report"]["classification"] == "negligible");
}

TEST_CASE("invertible verdict carries the determinant report") {
  const RunResult r = run("--output json invertible " + sample("rotation_block.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["invertible"] == true);
  CHECK(j["det_report"]["classification"] == "strictly_positive");
}

TEST_CASE("symplectic-basis produces a verified basis") {
  const RunResult r = run("--output json symplectic-basis " +
                          sample("standard_form_4.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["basis"]["n_pairs"] == 2);
  CHECK(j["basis"]["matrix"]["rows"] == 4);
  CHECK(j["basis"]["matrix"]["cols"] == 4);
  CHECK(j["relations_ok"] == true);
}

TEST_CASE("symplectic-basis rejects a symmetric Gramian with exit 3") {
  const RunResult r = run("symplectic-basis " + sample("interleaved_projector.json"));
  CHECK(r.exit_code == 3);
}

TEST_CASE("extend completes partial symplectic data") {
  const RunResult r = run("--output json extend " + sample("standard_form_2.json") +
                          " --e 1=" + sample("idempotent_pair_column.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["basis"]["n_pairs"] == 1);
  CHECK(j["relations_ok"] == true);
}

TEST_CASE("extend rejects a vector of the wrong length with exit 2") {
  const RunResult r = run("--output json extend " + sample("standard_form_4.json") +
                          " --e 1=" + sample("idempotent_pair_column.json"));
  CHECK(r.exit_code == 2);
  CHECK(parse_json(r)["error"]["type"] == "structural");
}

TEST_CASE("annihilator reports both ranks and generators") {
  const RunResult r = run("--output json annihilator " +
                          sample("standard_form_4.json") + " " +
                          sample("lagrangian_plane.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["rank"] == 2);
  CHECK(j["annihilator_rank"] == 2);
  REQUIRE(!j["generators"].is_null());
  CHECK(j["generators"]["rows"] == 4);
  CHECK(j["generators"]["cols"] == 2);
}

TEST_CASE("classify-submodule identifies a lagrangian plane") {
  const RunResult r = run("--output json classify-submodule " +
                          sample("standard_form_4.json") + " " +
                          sample("lagrangian_plane.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["class"] == "lagrangian");
  CHECK(j["rank"] == 2);
  CHECK(j["annihilator_rank"] == 2);
  CHECK(j["contains_annihilator"] == true);
  CHECK(j["isotropy_report"]["classification"] == "negligible");
}

TEST_CASE("degenerate Gramians are rejected with determinant evidence") {
  const std::string gram = "/tmp/gna_cli_degenerate_gram.json";
  write_file(gram,
             "{\"grid\": {\"kind\": \"dyadic\", \"k_min\": 4, \"k_max\": 40},\n"
             " \"scalar_kind\": \"real\",\n"
             " \"entries\": [[\"0\", \"-1\", \"0\", \"0\"],\n"
             "              [\"1\", \"0\", \"0\", \"0\"],\n"
             "              [\"0\", \"0\", \"0\", \"0\"],\n"
             "              [\"0\", \"0\", \"0\", \"0\"]]}\n");
  const RunResult r = run("--output json classify-submodule " + gram + " " +
                          sample("lagrangian_plane.json"));
  CHECK(r.exit_code == 3);
  const json j = parse_json(r);
  CHECK(j["error"]["type"] == "precondition");
  CHECK(j["error"]["det_report"]["classification"] == "negligible");
  std::remove(gram.c_str());
}

TEST_CASE("eigen hermitian yields a descending real tuple and transform") {
  const RunResult r = run("--output json eigen " + sample("perturbed_symmetric.json") +
                          " --kind hermitian");
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["kind"] == "hermitian");
  REQUIRE(j["values"].size() == 3);
  CHECK(j["values"][0]["kind"] == "real");
  CHECK(j["values"][0]["samples"][0].get<double>() >=
        j["values"][1]["samples"][0].get<double>());
  CHECK(j["transform"]["rows"] == 3);
  CHECK(j["transform"]["cols"] == 3);
}

TEST_CASE("eigen skew yields conjugate imaginary pairs") {
  const RunResult r = run("--output json eigen " + sample("rotation_block.json") +
                          " --kind skew");
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["kind"] == "skew");
  REQUIRE(j["values"].size() == 2);
  CHECK(j["values"][0]["kind"] == "complex");
  // [[0,-3],[3,0]] has distinguished eigenvalues +-3i; the rotation
  // solver recovers them to the last ulp.
  CHECK(j["values"][0]["samples"][0][0].get<double>() == 0.0);
  CHECK(j["values"][0]["samples"][0][1].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j["values"][1]["samples"][0][1].get<double>() == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(!j.contains("transform"));
}

TEST_CASE("eigen rejects a matrix of the wrong symmetry with exit 3") {
  const RunResult r = run("eigen " + sample("rotation_block.json") +
                          " --kind hermitian");
  CHECK(r.exit_code == 3);
}

TEST_CASE("normal-form reports blocks and invariants") {
  const RunResult r = run("--output json normal-form " + sample("rotation_block.json"));
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  CHECK(j["block_count"] == 1);
  CHECK(j["zero_block_count"] == 0);
  REQUIRE(j["lambdas"].size() == 1);
  CHECK(j["lambdas"][0]["value"]["samples"][0].get<double>() == doctest::Approx(3.0));
  CHECK(j["lambdas"][0]["report"]["classification"] == "strictly_positive");
  CHECK(j["lambdas"][0]["warning"] == false);
  CHECK(j["transform"]["rows"] == 2);
}

TEST_CASE("check-eigenvalue separates members from non-members") {
  const std::string base = "--output json check-eigenvalue " +
                           sample("interleaved_projector.json");
  const RunResult yes = run(base + " --lambda 'chi(even(k))'");
  CHECK(yes.exit_code == 0);
  const json jy = parse_json(yes);
  CHECK(jy["is_eigenvalue"] == true);
  CHECK(jy["det_report"]["classification"] == "negligible");
  CHECK(!jy.contains("eigenvector"));

  const RunResult no = run(base + " --lambda 0.5");
  CHECK(no.exit_code == 0);
  const json jn = parse_json(no);
  CHECK(jn["is_eigenvalue"] == false);
  CHECK(jn["det_report"]["classification"] != "negligible");
}

TEST_CASE("check-eigenvalue --eigenvector emits a unit vector") {
  const RunResult r = run("--output json check-eigenvalue " +
                          sample("interleaved_projector.json") +
                          " --lambda 'chi(even(k))' --eigenvector");
  CHECK(r.exit_code == 0);
  const json j = parse_json(r);
  REQUIRE(j.contains("eigenvector"));
  CHECK(j["eigenvector"]["n"] == 2);
}

TEST_CASE("config file named by GNA_CONFIG feeds the defaults") {
  const std::string cfg = "/tmp/gna_cli_config.json";
  write_file(cfg, "{\"m_neg\": 11}\n");
  const std::string env = "GNA_CONFIG=" + cfg + " ";

  const RunResult r = run("--output json classify eps", env);
  CHECK(r.exit_code == 0);
  CHECK(parse_json(r)["config"]["m_neg"] == 11);

  // Explicit flags still win over the file.
  const RunResult f = run("--m-neg 5 --output json classify eps", env);
  CHECK(parse_json(f)["config"]["m_neg"] == 5);
  std::remove(cfg.c_str());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("classify").exit_code == 2);
  CHECK(run("--bogus classify eps").exit_code == 2);
  CHECK(run("det /nonexistent/gna_no_such_file.json").exit_code == 2);
}

TEST_CASE("--help exits 0 and lists subcommands") {
  const RunResult r = run("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("classify") != std::string::npos);
  CHECK(r.out.find("normal-form") != std::string::npos);
}
