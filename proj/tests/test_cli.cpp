// End-to-end checks of the command-line tool: exit codes, CSV/JSON shapes, and
// rerun determinism.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <sys/wait.h>

namespace {

struct CliResult {
  int exit_code{};
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SPINOSC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = out;
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/" + name;
  std::ofstream f(path);
  f << text;
  return path;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) fields.push_back(cell);
  return fields;
}

constexpr double pi = 3.14159265358979323846;

}  // namespace

TEST_CASE("witness sweep emits the documented CSV") {
  const auto cfg = write_file(
      "cli_noiseless.json",
      R"({"scenario": "noiseless", "lambda": 1e-4, "n_atoms": 1e6, "time": 0.0})");
  char to_arg[40];
  std::snprintf(to_arg, sizeof to_arg, "%.17g", pi);
  const auto r = run_cli("witness " + cfg + " --sweep t --from 0 --to " +
                         std::string(to_arg) + " --points 5");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] ==
        "sweep_var,w_bound,w_en,w_diff,w_ratio,violated,scenario,coefficient_provenance");
  const auto last = split_fields(lines.back());
  REQUIRE(last.size() == 8);
  CHECK(std::stod(last[0]) == doctest::Approx(pi).epsilon(1e-12));
  // w_diff = 1.5 lambda^2 N^2 (1 - cos x) = 30000 at x = pi.
  CHECK(std::stod(last[3]) == doctest::Approx(30000.0).epsilon(1e-9));
  CHECK(last[5] == "1");
  CHECK(last[6] == "noiseless");
  CHECK(last[7] == "closed_form_o1");
  const auto first = split_fields(lines[1]);
  CHECK(first[5] == "0");  // no violation at t = 0
}

TEST_CASE("witness sweep with zero points prints only the header") {
  const auto cfg = write_file(
      "cli_noiseless0.json",
      R"({"scenario": "noiseless", "lambda": 1e-4, "n_atoms": 1e6, "time": 0.0})");
  const auto r = run_cli("witness " + cfg + " --sweep t --points 0");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].substr(0, 9) == "sweep_var");
}

TEST_CASE("witness sweep writes identical bytes to stdout and --out") {
  const auto cfg = write_file(
      "cli_bath.json",
      R"({"scenario": "thermal_initial_plus_bath", "lambda": 1e-4, "n_atoms": 1e6,
          "time": 3.14159265358979323846, "nbar": 10.0, "q_factor": 400.0})");
  const std::string args = "witness " + cfg + " --sweep q_over_nbar --from 20 --to 60 --points 9";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  const auto c = run_cli(args + " --out /tmp/cli_sweep_out.csv");
  CHECK(c.exit_code == 0);
  CHECK(c.out.empty());
  std::ifstream f("/tmp/cli_sweep_out.csv");
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == a.out);

  // The sweep crosses the violation threshold, so both labels appear.
  bool saw_violated = false, saw_not = false;
  for (const auto& line : split_lines(a.out)) {
    const auto fields = split_fields(line);
    if (fields.size() == 8 && fields[0] != "sweep_var") {
      (fields[5] == "1" ? saw_violated : saw_not) = true;
    }
  }
  CHECK(saw_violated);
  CHECK(saw_not);
}

TEST_CASE("usage and config failures exit with code 2") {
  const auto cfg = write_file(
      "cli_ok.json",
      R"({"scenario": "noiseless", "lambda": 1e-4, "n_atoms": 1e6, "time": 1.0})");
  CHECK(run_cli("witness " + cfg + " --sweep voltage").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("witness").exit_code == 2);
  CHECK(run_cli("witness /tmp/definitely_missing.json --sweep t").exit_code == 2);

  const auto bad = write_file("cli_bad.json", "{broken");
  CHECK(run_cli("witness " + bad + " --sweep t").exit_code == 2);

  const auto unknown = write_file(
      "cli_unknown.json", R"({"scenario": "noiseless", "voltage": 3.0})");
  CHECK(run_cli("witness " + unknown + " --sweep t").exit_code == 2);

  const auto neg = write_file(
      "cli_neg.json", R"({"scenario": "noiseless", "n_atoms": -4.0})");
  CHECK(run_cli("witness " + neg + " --sweep t --points 1").exit_code == 2);

  const auto noq = write_file(
      "cli_noq.json",
      R"({"scenario": "ground_plus_bath", "lambda": 1e-4, "n_atoms": 1e6,
          "time": 1.0, "nbar": 1.0})");
  CHECK(run_cli("witness " + noq + " --sweep t --points 1").exit_code == 2);

  // q_over_nbar needs a positive nbar in the config.
  const auto nonbar = write_file(
      "cli_nonbar.json",
      R"({"scenario": "thermal_initial_plus_bath", "lambda": 1e-4, "n_atoms": 1e6,
          "time": 1.0, "q_factor": 10.0})");
  CHECK(run_cli("witness " + nonbar + " --sweep q_over_nbar --points 1").exit_code == 2);
}

TEST_CASE("strict perturbativity violations exit with code 3") {
  const auto cfg = write_file(
      "cli_strict.json",
      R"({"scenario": "noiseless", "lambda": 0.1, "n_atoms": 1e6, "time": 1.0,
          "strict": true})");
  CHECK(run_cli("witness " + cfg + " --sweep t --points 1 --from 1").exit_code == 3);

  // The same config without strict runs and reports.
  const auto loose = write_file(
      "cli_loose.json",
      R"({"scenario": "noiseless", "lambda": 0.1, "n_atoms": 1e6, "time": 1.0})");
  CHECK(run_cli("witness " + loose + " --sweep t --points 1 --from 1").exit_code == 0);
}

TEST_CASE("coupling subcommand reports both modes as JSON") {
  const auto quad = run_cli("coupling");
  CHECK(quad.exit_code == 0);
  const auto jq = nlohmann::json::parse(quad.out);
  CHECK(jq["mode"] == "quadratic_clock");
  CHECK(jq["lambda"].get<double>() ==
        doctest::Approx(-3.7313206379732789e-16).epsilon(1e-6));
  CHECK(jq["meissner_caveat"] == false);
  CHECK(jq.contains("g_rate"));
  CHECK(jq.contains("theta_zpf"));
  CHECK(jq.contains("cross_term_ratio"));
  CHECK(!jq.contains("scaling_exponents"));

  const auto lin = run_cli("coupling --mode linear");
  CHECK(lin.exit_code == 0);
  const auto jl = nlohmann::json::parse(lin.out);
  CHECK(jl["mode"] == "linear_mf");
  CHECK(jl["lambda_n"].get<double>() ==
        doctest::Approx(0.00058653915191995596).epsilon(1e-6));
  CHECK(jl["meissner_caveat"] == true);

  const auto rerun = run_cli("coupling --mode linear");
  CHECK(rerun.out == lin.out);
}

TEST_CASE("coupling scaling report carries the measured exponents") {
  const auto r = run_cli("coupling --scaling");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.contains("scaling_exponents"));
  CHECK(j["scaling_exponents"]["b_ext"].get<double>() ==
        doctest::Approx(2.0).epsilon(0.01));
  CHECK(j["scaling_exponents"]["alpha"].get<double>() ==
        doctest::Approx(-3.5).epsilon(0.01));
}

TEST_CASE("coupling accepts a geometry file and a mode override") {
  const auto geom = write_file("cli_geom.json",
                               R"({"preset": "simplified_linear", "b_ext": 0.06})");
  const auto r = run_cli("coupling " + geom);
  CHECK(r.exit_code == 0);
  CHECK(nlohmann::json::parse(r.out)["mode"] == "linear_mf");

  const auto forced = run_cli("coupling " + geom + " --mode quad");
  CHECK(forced.exit_code == 0);
  CHECK(nlohmann::json::parse(forced.out)["mode"] == "quadratic_clock");

  CHECK(run_cli("coupling /tmp/missing_geom.json").exit_code == 2);
  const auto badgeom = write_file("cli_badgeom.json", R"({"n_cyl": 3})");
  CHECK(run_cli("coupling " + badgeom).exit_code == 2);
}

TEST_CASE("phase subcommand emits the drive trace CSV") {
  const auto r = run_cli("phase --steps 50 --periods 0.5 --theta-max 0.01");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 52);
  CHECK(lines[0] == "t,theta,phi");
  const auto last = split_fields(lines.back());
  REQUIRE(last.size() == 3);
  CHECK(std::stod(last[0]) == doctest::Approx(10.0).epsilon(1e-12));

  const auto still = run_cli("phase --steps 10 --theta-max 0");
  for (const auto& line : split_lines(still.out)) {
    const auto fields = split_fields(line);
    if (fields.size() == 3 && fields[0] != "t") {
      CHECK(std::stod(fields[2]) == 0.0);
    }
  }

  CHECK(run_cli("phase --steps 0").exit_code == 2);
}

TEST_CASE("verify subcommand reports machine-readable properties") {
  const auto r = run_cli("verify --suite closedform");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["suite"] == "closedform");
  REQUIRE(j["properties"].is_array());
  CHECK(j["properties"].size() >= 5);
  for (const auto& p : j["properties"]) {
    CHECK(p.contains("name"));
    CHECK(p.contains("residual"));
    CHECK(p.contains("tolerance"));
    const std::string status = p["status"].get<std::string>();
    CHECK((status == "pass" || status == "underpowered"));
  }

  const std::string args = "verify --suite separable --seed 7 --n-real 20";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(nlohmann::json::parse(a.out)["seed"] == 7);

  CHECK(run_cli("verify --suite bogus").exit_code == 2);
}
