// coupling subcommand: coupling-rate report (optionally with scaling exponents) as JSON.
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "commands.hpp"
#include "spinosc/errors.hpp"
#include "spinosc/magnetics.hpp"

namespace spinosc::cli {

int run_coupling(const CouplingOptions& opt) {
  using magnetics::CouplingGeometry;
  using magnetics::ZeemanMode;

  CouplingGeometry geom;
  if (!opt.config_path.empty()) {
    geom = magnetics::geometry_from_json_file(opt.config_path);
    if (opt.mode_given) {
      geom.zeeman_mode = opt.mode == "linear" ? ZeemanMode::LinearMF
                                              : ZeemanMode::QuadraticClock;
    }
  } else {
    geom = opt.mode == "linear" ? magnetics::simplified_linear_geometry()
                                : magnetics::quad_reference_geometry();
  }

  const auto result = magnetics::coupling_g(geom);

  nlohmann::json out;
  out["mode"] = geom.zeeman_mode == ZeemanMode::LinearMF ? "linear_mf" : "quadratic_clock";
  out["g_rate"] = result.g_rate;
  out["lambda"] = result.lambda;
  out["lambda_n"] = result.lambda_n;
  out["theta_zpf"] = result.theta_zpf;
  out["cross_term_ratio"] = result.cross_term_ratio;
  out["meissner_caveat"] = result.meissner_caveat;
  if (opt.scaling) {
    nlohmann::json exps;
    exps["b_ext"] = magnetics::scaling_exponent(geom, magnetics::ScalingFactor::BExt);
    exps["chi"] = magnetics::scaling_exponent(geom, magnetics::ScalingFactor::Chi);
    exps["rho"] = magnetics::scaling_exponent(geom, magnetics::ScalingFactor::Rho);
    exps["alpha"] = magnetics::scaling_exponent(geom, magnetics::ScalingFactor::Alpha);
    out["scaling_exponents"] = exps;
  }

  const std::string text = out.dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw ConfigParseError("cannot open output file: " + opt.out);
    f << text;
  }
  return kExitOk;
}

}  // namespace spinosc::cli
