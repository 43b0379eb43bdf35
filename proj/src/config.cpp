// Scenario configuration: validation windows and JSON loading.
#include "spinosc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinosc/errors.hpp"

namespace spinosc {

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Noiseless: return "noiseless";
    case Scenario::ThermalInitial: return "thermal_initial";
    case Scenario::ThermalInitialPlusBath: return "thermal_initial_plus_bath";
    case Scenario::GroundPlusBath: return "ground_plus_bath";
    case Scenario::Dephasing: return "dephasing";
  }
  return "unknown";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "noiseless") return Scenario::Noiseless;
  if (name == "thermal_initial") return Scenario::ThermalInitial;
  if (name == "thermal_initial_plus_bath") return Scenario::ThermalInitialPlusBath;
  if (name == "ground_plus_bath") return Scenario::GroundPlusBath;
  if (name == "dephasing") return Scenario::Dephasing;
  throw ConfigParseError("unknown scenario '" + name + "'");
}

std::vector<std::string> validate(const ScenarioConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NonPositiveParameter(std::string(name) + " must be positive and finite");
    }
  };
  positive(c.n_atoms, "n_atoms");
  positive(c.mass, "mass");
  positive(c.omega, "omega");
  if (!std::isfinite(c.lambda)) throw NonPositiveParameter("lambda must be finite");
  if (!(c.time >= 0.0) || !std::isfinite(c.time)) {
    throw NonPositiveParameter("time must be nonnegative and finite");
  }
  if (!(c.nbar >= 0.0) || !std::isfinite(c.nbar)) {
    throw NonPositiveParameter("nbar must be nonnegative and finite");
  }
  if (!(c.sigma2 >= 0.0) || !std::isfinite(c.sigma2)) {
    throw NonPositiveParameter("sigma2 must be nonnegative and finite");
  }
  if (c.q_factor) positive(*c.q_factor, "q_factor");
  if (c.j_min_exp) {
    if (!(*c.j_min_exp > 0.0) || !(*c.j_min_exp <= c.n_atoms / 2.0)) {
      throw NonPositiveParameter("j_min_exp must lie in (0, n_atoms/2]");
    }
  }
  if (c.has_bath() && !c.q_factor) {
    throw MissingQualityFactor("scenario " + to_string(c.scenario) + " requires q_factor");
  }

  std::vector<std::string> warnings;
  auto flag = [&](const std::string& msg) {
    if (c.strict) throw PerturbativityViolated(msg);
    warnings.push_back(msg);
  };
  const double lambda_cap = 1.0 / std::sqrt(2.0 * c.n_atoms);
  if (std::abs(c.lambda) >= lambda_cap) {
    std::ostringstream os;
    os << "lambda = " << c.lambda << " outside the perturbative window |lambda| < "
       << lambda_cap;
    flag(os.str());
  }
  const bool thermal_start = c.scenario == Scenario::ThermalInitial ||
                             c.scenario == Scenario::ThermalInitialPlusBath;
  if (thermal_start && c.nbar * c.lambda * c.lambda >= 0.1) {
    std::ostringstream os;
    os << "nbar lambda^2 = " << c.nbar * c.lambda * c.lambda
       << " outside the thermal expansion window (< 0.1)";
    flag(os.str());
  }
  return warnings;
}

namespace {

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigParseError("configuration root must be a JSON object");
  ScenarioConfig c;
  bool saw_scenario = false;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "scenario") {
        c.scenario = scenario_from_string(value.get<std::string>());
        saw_scenario = true;
      } else if (key == "lambda") {
        c.lambda = value.get<double>();
      } else if (key == "n_atoms") {
        c.n_atoms = value.get<double>();
      } else if (key == "mass") {
        c.mass = value.get<double>();
      } else if (key == "omega") {
        c.omega = value.get<double>();
      } else if (key == "time") {
        c.time = value.get<double>();
      } else if (key == "nbar") {
        c.nbar = value.get<double>();
      } else if (key == "q_factor") {
        c.q_factor = value.get<double>();
      } else if (key == "sigma2") {
        c.sigma2 = value.get<double>();
      } else if (key == "j_min_exp") {
        c.j_min_exp = value.get<double>();
      } else if (key == "strict") {
        c.strict = value.get<bool>();
      } else {
        throw ConfigParseError("unknown configuration field '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigParseError("field '" + key + "': " + e.what());
    }
  }
  if (!saw_scenario) throw ConfigParseError("missing required field 'scenario'");
  return c;
}

}  // namespace

ScenarioConfig scenario_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigParseError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ScenarioConfig scenario_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open configuration file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

}  // namespace spinosc
