// phase subcommand: classical drive trace (t, theta, phi) as CSV.
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "spinosc/constants.hpp"
#include "spinosc/csvio.hpp"
#include "spinosc/errors.hpp"
#include "spinosc/magnetics.hpp"

namespace spinosc::cli {

int run_phase(const PhaseOptions& opt) {
  const magnetics::CouplingGeometry geom =
      opt.config_path.empty() ? magnetics::quad_reference_geometry()
                              : magnetics::geometry_from_json_file(opt.config_path);
  const double theta_max = opt.theta_max < 0.0 ? geom.theta_max : opt.theta_max;
  const double t_end = opt.periods * 2.0 * constants::pi / geom.omega;

  const auto trace = magnetics::phase_trace(geom, theta_max, opt.steps, t_end);

  std::string body = csvio::join_row({"t", "theta", "phi"});
  for (const auto& pt : trace) {
    body += csvio::join_row(
        {csvio::fmt17(pt.t), csvio::fmt17(pt.theta), csvio::fmt17(pt.phi)});
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
