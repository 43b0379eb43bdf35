// Scenario parameters for the witness calculations, with validation and JSON loading.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spinosc {

enum class Scenario {
  Noiseless,
  ThermalInitial,
  ThermalInitialPlusBath,
  GroundPlusBath,
  Dephasing,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ScenarioConfig {
  Scenario scenario{Scenario::Noiseless};
  double lambda{1e-3};                  // coupling ratio g/omega
  double n_atoms{2.0};                  // N
  double mass{1.0};                     // oscillator mass, natural units
  double omega{1.0};                    // oscillator angular frequency, rad/s
  double time{0.0};                     // interaction time, s
  double nbar{0.0};                     // thermal occupancy (initial state or bath)
  std::optional<double> q_factor{};     // quality factor, bath scenarios only
  double sigma2{0.0};                   // dephasing variance sigma^2
  std::optional<double> j_min_exp{};    // minimum spin length at measurement, default N/2
  bool strict{false};                   // promote validity warnings to errors

  double x() const { return omega * time; }  // dimensionless phase omega t
  double j_min() const { return j_min_exp ? *j_min_exp : n_atoms / 2.0; }
  bool has_bath() const {
    return scenario == Scenario::ThermalInitialPlusBath ||
           scenario == Scenario::GroundPlusBath;
  }
};

// Checks hard invariants (throws NonPositiveParameter) and the perturbative-validity
// windows: lambda < 1/sqrt(2N), and nbar*lambda^2 < 0.1 for thermal initial states.
// Window breaches are returned as warnings, or thrown as PerturbativityViolated when
// config.strict is set. Returns the normalized config's warning list; idempotent.
std::vector<std::string> validate(const ScenarioConfig& config);

// Parses the lower_snake_case JSON schema (lambda, n_atoms, mass, omega, time, nbar,
// q_factor, sigma2, j_min_exp, scenario, strict). Unknown scenario names or malformed
// fields raise ConfigParseError naming the field.
ScenarioConfig scenario_from_json_text(const std::string& text);
ScenarioConfig scenario_from_json_file(const std::string& path);

}  // namespace spinosc
