// Command-line front end: witness sweeps, coupling reports, verification suites,
// and classical-drive phase traces.
#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace spinosc::cli;

  CLI::App app{"Spin-oscillator witness toolkit"};
  app.require_subcommand(1);

  WitnessOptions wo;
  auto* witness = app.add_subcommand("witness", "Sweep a parameter and emit witness CSV");
  witness->add_option("config", wo.config_path, "Scenario JSON file")->required();
  witness->add_option("--sweep", wo.sweep, "Swept variable")
      ->required()
      ->check(CLI::IsMember({"t", "nbar", "lambda", "q_over_nbar"}));
  witness->add_option("--from", wo.from, "Sweep start");
  witness->add_option("--to", wo.to, "Sweep end");
  witness->add_option("--points", wo.points, "Number of sweep points")
      ->check(CLI::NonNegativeNumber);
  witness->add_option("--out", wo.out, "Output CSV path (default stdout)");

  CouplingOptions co;
  auto* coupling = app.add_subcommand("coupling", "Coupling-rate report as JSON");
  coupling->add_option("config", co.config_path, "Geometry JSON file");
  auto* mode_opt = coupling->add_option("--mode", co.mode, "quad or linear")
                       ->check(CLI::IsMember({"quad", "linear"}));
  coupling->add_flag("--scaling", co.scaling, "Measure parameter scaling exponents");
  coupling->add_option("--out", co.out, "Output JSON path (default stdout)");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run cross-module verification suites");
  verify->add_option("--suite", vo.suite, "Suite name")
      ->check(CLI::IsMember({"closedform", "bath", "dephasing", "separable", "all"}));
  verify->add_option("--seed", vo.seed, "RNG seed");
  verify->add_option("--n-real", vo.n_real, "Monte Carlo realizations / sample count")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--out", vo.out, "Output JSON path (default stdout)");

  PhaseOptions po;
  auto* phase = app.add_subcommand("phase", "Classical drive phase trace as CSV");
  phase->add_option("config", po.config_path, "Geometry JSON file");
  phase->add_option("--theta-max", po.theta_max, "Drive amplitude, rad");
  phase->add_option("--periods", po.periods, "Trace length in drive periods")
      ->check(CLI::PositiveNumber);
  phase->add_option("--steps", po.steps, "Quadrature steps")->check(CLI::PositiveNumber);
  phase->add_option("--out", po.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  co.mode_given = mode_opt->count() > 0;

  if (witness->parsed()) return guarded([&] { return run_witness(wo); });
  if (coupling->parsed()) return guarded([&] { return run_coupling(co); });
  if (verify->parsed()) return guarded([&] { return run_verify(vo); });
  if (phase->parsed()) return guarded([&] { return run_phase(po); });
  return kExitUsage;
}
