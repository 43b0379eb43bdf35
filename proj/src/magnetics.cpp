// Cylinder magnet fields via Bulirsch elliptic integrals, the atom-oscillator
// coupling rate, scaling probes, and classical phase traces.
#include "spinosc/magnetics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinosc/errors.hpp"

namespace spinosc::magnetics {

namespace {

using constants::mu_0;
using constants::pi;

double norm3(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

double cel(double kc, double p, double a, double b) {
  if (kc == 0.0 || !std::isfinite(kc)) {
    throw Error("cel: complementary modulus must be nonzero and finite");
  }
  const double errtol = 1e-13;
  double k = std::abs(kc);
  double aa = a, bb = b, pp = p, em = 1.0;
  if (pp > 0.0) {
    pp = std::sqrt(pp);
    bb = bb / pp;
  } else {
    double f = kc * kc;
    double q = 1.0 - f;
    double g = 1.0 - pp;
    f = f - pp;
    q = q * (bb - aa * pp);
    pp = std::sqrt(f / g);
    aa = (aa - bb) / g;
    bb = -q / (g * g * pp) + aa * pp;
  }
  double f = aa;
  aa = aa + bb / pp;
  double g = k / pp;
  bb = 2.0 * (bb + f * g);
  pp = g + pp;
  g = em;
  em = k + em;
  double kk = k;
  while (std::abs(g - k) > g * errtol) {
    k = 2.0 * std::sqrt(kk);
    kk = k * em;
    f = aa;
    aa = aa + bb / pp;
    g = kk / pp;
    bb = 2.0 * (bb + f * g);
    pp = g + pp;
    g = em;
    em = k + em;
  }
  return 0.5 * pi * (bb + aa * em) / (em * (em + pp));
}

Vec3 cylinder_field(const Vec3& point, const CylinderPose& pose, double magnetization) {
  const double dx = point[0] - pose.center[0];
  const double dy = point[1] - pose.center[1];
  const double z = point[2] - pose.center[2];
  const double rho = std::hypot(dx, dy);
  const double a = pose.radius;
  const double b = pose.half_length;
  if (rho < a * (1.0 + 1e-12) && std::abs(z) < b * (1.0 + 1e-12)) {
    throw PointInsideCylinder("field point lies inside a cylinder");
  }
  const double b0 = mu_0 * magnetization / pi;
  const double zp = z + b;
  const double zm = z - b;
  double b_rho, b_z;
  if (rho < 1e-8 * a) {
    b_rho = 0.0;
    b_z = 0.5 * mu_0 * magnetization *
          (zp / std::sqrt(zp * zp + a * a) - zm / std::sqrt(zm * zm + a * a));
  } else {
    const double sum = a + rho;
    const double dif = a - rho;
    const double np = std::sqrt(zp * zp + sum * sum);
    const double nm = std::sqrt(zm * zm + sum * sum);
    const double alpha_p = a / np;
    const double alpha_m = a / nm;
    const double beta_p = zp / np;
    const double beta_m = zm / nm;
    const double gamma = dif / sum;
    const double kp = std::sqrt((zp * zp + dif * dif) / (zp * zp + sum * sum));
    const double km = std::sqrt((zm * zm + dif * dif) / (zm * zm + sum * sum));
    b_rho = b0 * (alpha_p * cel(kp, 1.0, 1.0, -1.0) - alpha_m * cel(km, 1.0, 1.0, -1.0));
    b_z = b0 * a / sum *
          (beta_p * cel(kp, gamma * gamma, 1.0, gamma) -
           beta_m * cel(km, gamma * gamma, 1.0, gamma));
  }
  if (rho == 0.0) return {0.0, 0.0, b_z};
  return {b_rho * dx / rho, b_rho * dy / rho, b_z};
}

std::vector<CylinderPose> cylinder_poses(const CouplingGeometry& g, double theta) {
  if (g.n_cyl != 2 && g.n_cyl != 4) throw Error("n_cyl must be 2 or 4");
  const double rc = g.alpha * (g.r0 - g.cyl_radius);
  const double radius = g.alpha * g.cyl_radius;
  const double half_length = 0.5 * g.alpha * g.cyl_length;
  // Working cylinders trail the atom azimuth by theta0, 3*theta0, ...; an equal
  // set on the far side keeps the rotor balanced. An atom aligned with a cylinder
  // sees no angular gradient (mirror symmetry), hence the offset.
  std::vector<double> azimuths;
  for (int k = 0; k < g.n_cyl / 2; ++k) {
    azimuths.push_back(-(2.0 * k + 1.0) * g.theta0);
  }
  for (int k = 0; k < g.n_cyl / 2; ++k) {
    azimuths.push_back(pi - (2.0 * k + 1.0) * g.theta0);
  }
  std::vector<CylinderPose> poses;
  poses.reserve(azimuths.size());
  for (double phi0 : azimuths) {
    const double phi = phi0 + theta;
    poses.push_back(
        {{rc * std::cos(phi), rc * std::sin(phi), half_length}, radius, half_length});
  }
  return poses;
}

std::array<Vec3, 2> atom_arm_positions(const CouplingGeometry& g) {
  if (g.atom_positions) return *g.atom_positions;
  const double ra = g.alpha * (g.r0 + g.s);
  if (g.zeeman_mode == ZeemanMode::LinearMF) {
    const double zc = 0.5 * g.alpha * g.cyl_length;
    return {Vec3{ra, 0.0, zc + 0.5 * g.delta_z}, Vec3{ra, 0.0, zc - 0.5 * g.delta_z}};
  }
  return {Vec3{ra, 0.0, 0.5 * g.delta_z}, Vec3{ra, 0.0, -0.5 * g.delta_z}};
}

namespace {

double magnetization_of(const CouplingGeometry& g) { return g.chi_m * g.b_ext / mu_0; }

Vec3 cylinders_field(const Vec3& point, const CouplingGeometry& g, double theta) {
  const double mag = magnetization_of(g);
  Vec3 total{0.0, 0.0, 0.0};
  for (const CylinderPose& pose : cylinder_poses(g, theta)) {
    const Vec3 f = cylinder_field(point, pose, mag);
    total[0] += f[0];
    total[1] += f[1];
    total[2] += f[2];
  }
  return total;
}

}  // namespace

Vec3 total_field(const Vec3& point, const CouplingGeometry& g, double theta) {
  Vec3 f = cylinders_field(point, g, theta);
  f[2] += g.b_ext;
  return f;
}

double arm_frequency_difference(const CouplingGeometry& g, double theta) {
  const auto atoms = atom_arm_positions(g);
  if (g.zeeman_mode == ZeemanMode::LinearMF) {
    const Vec3 b1 = total_field(atoms[0], g, theta);
    const Vec3 b2 = total_field(atoms[1], g, theta);
    return constants::cs_linear_zeeman_rate * (norm3(b1) + norm3(b2));
  }
  const double phi0_si = g.phi0 * 1e9;  // rad/(ns T^2) -> rad/(s T^2)
  // b1^2 - b2^2 as (b1 - b2).(b1 + b2). The uniform external field is identical
  // at both arms, so the difference is formed from the cylinder fields alone;
  // subtracting the full fields would lose eight digits to cancellation.
  const Vec3 c1 = cylinders_field(atoms[0], g, theta);
  const Vec3 c2 = cylinders_field(atoms[1], g, theta);
  double diff_dot_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double sum = c1[k] + c2[k] + (k == 2 ? 2.0 * g.b_ext : 0.0);
    diff_dot_sum += (c1[k] - c2[k]) * sum;
  }
  return phi0_si * diff_dot_sum;
}

namespace {

// Central-difference derivative at zero, extrapolated over a shrinking step with
// the error tracked per table entry. Stops once roundoff makes the estimates
// diverge again and keeps the best one seen (Ridders' method).
template <typename F>
double derivative_at_zero(const F& f, double h0 = 1e-2) {
  constexpr int ntab = 12;
  constexpr double con = 1.6;
  constexpr double con2 = con * con;
  double a[ntab][ntab];
  double h = h0;
  a[0][0] = (f(h) - f(-h)) / (2.0 * h);
  double ans = a[0][0];
  double err = std::numeric_limits<double>::max();
  // Scale of the central difference itself, as a floor for near-zero derivatives.
  const double scale = (std::abs(f(h0)) + std::abs(f(-h0))) / (2.0 * h0) + 1e-300;
  for (int i = 1; i < ntab; ++i) {
    h /= con;
    a[0][i] = (f(h) - f(-h)) / (2.0 * h);
    double fac = con2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= con2;
      const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                   std::abs(a[j][i] - a[j - 1][i - 1]));
      if (errt <= err) {
        err = errt;
        ans = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
  }
  if (err > 1e-5 * std::abs(ans) + 1e-9 * scale) {
    throw DerivativeNonConvergent("angular derivative estimate did not stabilize");
  }
  return ans;
}

// B^2 split into the external cross term and the cylinder self term, combined across
// the two arms the same way the mode combines them (difference / sum).
struct ArmSplit {
  double cross{};
  double self{};
};

ArmSplit arm_split(const CouplingGeometry& g, double theta) {
  const auto atoms = atom_arm_positions(g);
  const Vec3 c1 = cylinders_field(atoms[0], g, theta);
  const Vec3 c2 = cylinders_field(atoms[1], g, theta);
  const double cross1 = 2.0 * g.b_ext * c1[2];
  const double cross2 = 2.0 * g.b_ext * c2[2];
  const double self1 = c1[0] * c1[0] + c1[1] * c1[1] + c1[2] * c1[2];
  const double self2 = c2[0] * c2[0] + c2[1] * c2[1] + c2[2] * c2[2];
  const double sign = g.zeeman_mode == ZeemanMode::LinearMF ? 1.0 : -1.0;
  return {cross1 + sign * cross2, self1 + sign * self2};
}

}  // namespace

CouplingResult coupling_g(const CouplingGeometry& g) {
  const double mass = g.n_cyl * pi * std::pow(g.alpha * g.cyl_radius, 2) *
                      (g.alpha * g.cyl_length) * g.rho_cyl;
  const double rc = g.alpha * (g.r0 - g.cyl_radius);
  const double theta_zpf = std::sqrt(constants::hbar / (2.0 * mass * g.omega)) / rc;

  CouplingResult out;
  out.theta_zpf = theta_zpf;
  out.g_rate =
      derivative_at_zero([&](double th) { return arm_frequency_difference(g, th); }) *
      theta_zpf;
  out.lambda = out.g_rate / g.omega;
  out.lambda_n = std::sqrt(g.n_atoms) * out.lambda;
  const double d_cross =
      derivative_at_zero([&](double th) { return arm_split(g, th).cross; });
  const double d_self =
      derivative_at_zero([&](double th) { return arm_split(g, th).self; });
  out.cross_term_ratio = std::abs(d_self) / std::abs(d_cross);
  out.meissner_caveat = g.chi_m < -0.9;
  return out;
}

double scaling_exponent(const CouplingGeometry& g, ScalingFactor which, double ratio) {
  CouplingGeometry scaled = g;
  switch (which) {
    case ScalingFactor::BExt: scaled.b_ext *= ratio; break;
    case ScalingFactor::Chi: scaled.chi_m *= ratio; break;
    case ScalingFactor::Rho: scaled.rho_cyl *= ratio; break;
    case ScalingFactor::Alpha: scaled.alpha *= ratio; break;
  }
  const double base = coupling_g(g).lambda;
  const double rescaled = coupling_g(scaled).lambda;
  return std::log(std::abs(rescaled / base)) / std::log(ratio);
}

std::vector<PhasePoint> phase_trace(const CouplingGeometry& g, double theta_max,
                                    int n_steps, double t_end) {
  if (n_steps < 1) throw Error("phase_trace needs at least one step");
  const double f0 = arm_frequency_difference(g, 0.0);
  std::vector<PhasePoint> out(n_steps + 1);
  double phi = 0.0;
  double prev_rate = 0.0;
  for (int i = 0; i <= n_steps; ++i) {
    const double t = t_end * i / n_steps;
    const double theta = theta_max * std::sin(g.omega * t);
    const double rate = arm_frequency_difference(g, theta) - f0;
    if (i > 0) phi += 0.5 * (prev_rate + rate) * t_end / n_steps;
    prev_rate = rate;
    out[i] = {t, theta, phi};
  }
  return out;
}

std::vector<MapPoint> phase_rate_map(const CouplingGeometry& g, int n_y, int n_z,
                                     double y_half_span, double z_min, double z_max) {
  const double x0 = g.alpha * (g.r0 + g.s);
  std::vector<MapPoint> out;
  out.reserve(static_cast<std::size_t>(n_y) * n_z);
  for (int iy = 0; iy < n_y; ++iy) {
    const double y = n_y > 1 ? -y_half_span + 2.0 * y_half_span * iy / (n_y - 1) : 0.0;
    for (int iz = 0; iz < n_z; ++iz) {
      const double z = n_z > 1 ? z_min + (z_max - z_min) * iz / (n_z - 1) : z_min;
      CouplingGeometry local = g;
      local.atom_positions = {Vec3{x0, y, z + 0.5 * g.delta_z},
                              Vec3{x0, y, z - 0.5 * g.delta_z}};
      double rate;
      try {
        rate = arm_frequency_difference(local, 0.0);
      } catch (const PointInsideCylinder&) {
        rate = std::numeric_limits<double>::quiet_NaN();
      }
      out.push_back({y, z, rate});
    }
  }
  return out;
}

std::vector<ThetaZPoint> phase_rate_theta_z(const CouplingGeometry& g, int n_theta,
                                            int n_z, double theta_span, double z_min,
                                            double z_max) {
  const double x0 = g.alpha * (g.r0 + g.s);
  std::vector<ThetaZPoint> out;
  out.reserve(static_cast<std::size_t>(n_theta) * n_z);
  for (int it = 0; it < n_theta; ++it) {
    const double theta =
        n_theta > 1 ? -theta_span + 2.0 * theta_span * it / (n_theta - 1) : 0.0;
    for (int iz = 0; iz < n_z; ++iz) {
      const double z = n_z > 1 ? z_min + (z_max - z_min) * iz / (n_z - 1) : z_min;
      CouplingGeometry local = g;
      local.atom_positions = {Vec3{x0, 0.0, z + 0.5 * g.delta_z},
                              Vec3{x0, 0.0, z - 0.5 * g.delta_z}};
      double rate;
      try {
        rate = arm_frequency_difference(local, theta);
      } catch (const PointInsideCylinder&) {
        rate = std::numeric_limits<double>::quiet_NaN();
      }
      out.push_back({theta, z, rate});
    }
  }
  return out;
}

CouplingGeometry quad_reference_geometry() { return CouplingGeometry{}; }

CouplingGeometry simplified_linear_geometry() {
  CouplingGeometry g;
  g.b_ext = 50e-3;
  g.chi_m = -1.0;
  g.r0 = 4.5e-2;
  g.rho_cyl = 11340.0;
  g.cyl_length = 5e-3;
  g.cyl_radius = 2.5e-3;
  g.s = 8e-3;
  g.n_cyl = 2;
  g.zeeman_mode = ZeemanMode::LinearMF;
  return g;
}

namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigParseError("field '" + key + "': expected an array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

CouplingGeometry geometry_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigParseError(std::string("geometry is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigParseError("geometry root must be a JSON object");
  CouplingGeometry g;
  if (j.contains("preset")) {
    const std::string preset = j["preset"].get<std::string>();
    if (preset == "quad_reference") {
      g = quad_reference_geometry();
    } else if (preset == "simplified_linear") {
      g = simplified_linear_geometry();
    } else {
      throw ConfigParseError("unknown geometry preset '" + preset + "'");
    }
  }
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "preset") {
        continue;
      } else if (key == "b_ext") {
        g.b_ext = value.get<double>();
      } else if (key == "chi_m") {
        g.chi_m = value.get<double>();
      } else if (key == "r0") {
        g.r0 = value.get<double>();
      } else if (key == "omega") {
        g.omega = value.get<double>();
      } else if (key == "rho_cyl") {
        g.rho_cyl = value.get<double>();
      } else if (key == "cyl_length") {
        g.cyl_length = value.get<double>();
      } else if (key == "cyl_radius") {
        g.cyl_radius = value.get<double>();
      } else if (key == "theta0") {
        g.theta0 = value.get<double>();
      } else if (key == "s") {
        g.s = value.get<double>();
      } else if (key == "delta_z") {
        g.delta_z = value.get<double>();
      } else if (key == "n_cyl") {
        g.n_cyl = value.get<int>();
      } else if (key == "phi0") {
        g.phi0 = value.get<double>();
      } else if (key == "alpha") {
        g.alpha = value.get<double>();
      } else if (key == "n_atoms") {
        g.n_atoms = value.get<double>();
      } else if (key == "theta_max") {
        g.theta_max = value.get<double>();
      } else if (key == "zeeman_mode") {
        const std::string mode = value.get<std::string>();
        if (mode == "quadratic_clock") {
          g.zeeman_mode = ZeemanMode::QuadraticClock;
        } else if (mode == "linear_mf") {
          g.zeeman_mode = ZeemanMode::LinearMF;
        } else {
          throw ConfigParseError("unknown zeeman_mode '" + mode + "'");
        }
      } else if (key == "atom_positions") {
        if (!value.is_array() || value.size() != 2) {
          throw ConfigParseError("field 'atom_positions': expected two 3-vectors");
        }
        g.atom_positions = {vec3_from_json(value[0], key), vec3_from_json(value[1], key)};
      } else {
        throw ConfigParseError("unknown geometry field '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigParseError("field '" + key + "': " + e.what());
    }
  }
  if (g.n_cyl != 2 && g.n_cyl != 4) throw ConfigParseError("n_cyl must be 2 or 4");
  return g;
}

CouplingGeometry geometry_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open geometry file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return geometry_from_json_text(buf.str());
}

}  // namespace spinosc::magnetics
