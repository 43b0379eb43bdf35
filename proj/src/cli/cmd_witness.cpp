// witness subcommand: parameter sweep to CSV.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "spinosc/config.hpp"
#include "spinosc/csvio.hpp"
#include "spinosc/errors.hpp"
#include "spinosc/witness.hpp"

namespace spinosc::cli {

namespace {

ScenarioConfig at_sweep_value(const ScenarioConfig& base, const std::string& sweep,
                              double v) {
  ScenarioConfig c = base;
  if (sweep == "t") {
    c.time = v;
  } else if (sweep == "nbar") {
    c.nbar = v;
  } else if (sweep == "lambda") {
    c.lambda = v;
  } else if (sweep == "q_over_nbar") {
    if (c.nbar <= 0.0) {
      throw ConfigParseError("q_over_nbar sweep needs nbar > 0 in the config");
    }
    c.q_factor = v * c.nbar;
  } else {
    throw ConfigParseError("unknown sweep variable: " + sweep);
  }
  return c;
}

}  // namespace

int run_witness(const WitnessOptions& opt) {
  const ScenarioConfig base = scenario_from_json_file(opt.config_path);

  std::string body;
  body += csvio::join_row({"sweep_var", "w_bound", "w_en", "w_diff", "w_ratio",
                           "violated", "scenario", "coefficient_provenance"});
  std::vector<std::string> seen_warnings;
  for (int i = 0; i < opt.points; ++i) {
    const double v =
        opt.points == 1
            ? opt.from
            : opt.from + (opt.to - opt.from) * double(i) / double(opt.points - 1);
    const ScenarioConfig c = at_sweep_value(base, opt.sweep, v);
    // Strict configs abort the sweep here; otherwise each distinct warning is
    // reported once on stderr.
    for (const auto& w : validate(c)) {
      if (std::find(seen_warnings.begin(), seen_warnings.end(), w) ==
          seen_warnings.end()) {
        seen_warnings.push_back(w);
        std::cerr << "warning: " << w << "\n";
      }
    }
    const auto report = witness::witness_value(c);
    body += csvio::join_row({csvio::fmt17(v), csvio::fmt17(report.w_bound),
                             csvio::fmt17(report.w_en), csvio::fmt17(report.w_diff),
                             csvio::fmt17(report.w_ratio),
                             report.violated ? "1" : "0", to_string(c.scenario),
                             to_string(report.coefficients.provenance)});
  }

  if (opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw ConfigParseError("cannot open output file: " + opt.out);
    f << body;
  }
  return kExitOk;
}

}  // namespace spinosc::cli
