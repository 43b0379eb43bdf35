// Magnetostatics of pendulum-mounted magnetized cylinders and the resulting
// atom-oscillator coupling rate.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinosc/constants.hpp"

namespace spinosc::magnetics {

using Vec3 = std::array<double, 3>;

enum class ZeemanMode { QuadraticClock, LinearMF };

struct CouplingGeometry {
  double b_ext{5e-3};                    // external field along z, T
  double chi_m{6.8e-5};                  // volume susceptibility of the cylinders
  double r0{0.10};                       // pendulum arm radius, m
  double omega{2.0 * constants::pi / 20.0};  // pendulum frequency, rad/s
  double rho_cyl{19300.0};               // cylinder density, kg/m^3
  double cyl_length{0.010};              // cylinder length l, m
  double cyl_radius{0.005};              // cylinder radius R, m
  double theta0{2.0 * constants::pi / 180.0};  // half separation angle, rad
  double s{0.008};                       // atom standoff beyond the arm radius, m
  double delta_z{5e-6};                  // interferometer arm separation, m
  int n_cyl{4};  // half work the atoms, half balance the rotor on the far side
  double phi0{268.575};                  // clock shift coefficient, rad / (ns T^2)
  double alpha{1.0};                     // overall length scale factor
  double n_atoms{1e6};
  ZeemanMode zeeman_mode{ZeemanMode::QuadraticClock};
  double theta_max{2.0 * constants::pi / 180.0};  // classical drive amplitude, rad
  // Explicit atom positions override the mode defaults (quadratic: both arms straddle
  // the cylinder base plane at z = +-delta_z/2; linear: both sit near half height).
  std::optional<std::array<Vec3, 2>> atom_positions{};
};

// Tungsten quadrupole-clock preset (the struct defaults) and the superconducting
// linear-Zeeman variant.
CouplingGeometry quad_reference_geometry();
CouplingGeometry simplified_linear_geometry();
CouplingGeometry geometry_from_json_text(const std::string& text);
CouplingGeometry geometry_from_json_file(const std::string& path);

// Vertical-axis cylinder, described in global coordinates after the length scale and
// pendulum rotation are applied.
struct CylinderPose {
  Vec3 center{};
  double radius{};
  double half_length{};
};

// Cylinder placement at pendulum angle theta, plus the atom arm positions implied by
// the geometry (scaled by alpha as appropriate for the mode).
std::vector<CylinderPose> cylinder_poses(const CouplingGeometry& g, double theta);
std::array<Vec3, 2> atom_arm_positions(const CouplingGeometry& g);

// Field of one uniformly axially magnetized cylinder (magnetization M, A/m) at a point
// outside it. Throws PointInsideCylinder for interior points.
Vec3 cylinder_field(const Vec3& point, const CylinderPose& pose, double magnetization);

// External field plus all cylinders at pendulum angle theta.
Vec3 total_field(const Vec3& point, const CouplingGeometry& g, double theta);

// Bulirsch generalized complete elliptic integral, exposed for cross-checks.
double cel(double kc, double p, double a, double b);

// Differential frequency between the two atom arms at pendulum angle theta, rad/s.
// QuadraticClock: phi0 (B^2_top - B^2_bot); LinearMF: c_Z (|B|_1 + |B|_2) for opposite
// m_F = +-1 arms.
double arm_frequency_difference(const CouplingGeometry& g, double theta);

struct CouplingResult {
  double g_rate{};            // rad/s
  double lambda{};            // g / omega, signed
  double lambda_n{};          // sqrt(N) lambda
  double theta_zpf{};         // rad
  double cross_term_ratio{};  // |self term| / |external cross term| in d(B^2)/dtheta
  bool meissner_caveat{};     // chi_m = -1 treated as a fixed uniform magnetization
};
CouplingResult coupling_g(const CouplingGeometry& g);

enum class ScalingFactor { BExt, Chi, Rho, Alpha };

// Measured log-slope d ln|lambda| / d ln factor between the baseline and a rescaled
// geometry.
double scaling_exponent(const CouplingGeometry& g, ScalingFactor which, double ratio = 2.0);

struct PhasePoint {
  double t{};      // s
  double theta{};  // rad
  double phi{};    // rad, accumulated
};

// theta(t) = theta_max sin(omega t); phi integrates the drive-induced part of the arm
// frequency difference, f(theta(t)) - f(0), with trapezoidal quadrature.
std::vector<PhasePoint> phase_trace(const CouplingGeometry& g, double theta_max,
                                    int n_steps, double t_end);

struct MapPoint {
  double y{};
  double z{};
  double rate{};  // rad/s
};

// Arm frequency difference for hypothetical atom positions (x fixed at the nominal
// standoff) over a y-z grid at theta = 0, arms at z +- delta_z/2.
std::vector<MapPoint> phase_rate_map(const CouplingGeometry& g, int n_y, int n_z,
                                     double y_half_span, double z_min, double z_max);

struct ThetaZPoint {
  double theta{};
  double z{};
  double rate{};
};
std::vector<ThetaZPoint> phase_rate_theta_z(const CouplingGeometry& g, int n_theta,
                                            int n_z, double theta_span, double z_min,
                                            double z_max);

}  // namespace spinosc::magnetics
