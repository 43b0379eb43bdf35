// The witness as a quadratic form in the four oscillator admixture coefficients,
// with its exact minimizer and the separable-state bound.
#pragma once

#include <Eigen/Dense>
#include <array>

#include "spinosc/bathmc.hpp"
#include "spinosc/coefficients.hpp"
#include "spinosc/moments.hpp"

namespace spinosc::quadform {

// W(x) = constant + linear . x + x^T hessian x, x = (a_y, b_y, a_z, b_z).
struct QuadraticForm {
  double constant{};
  Eigen::Vector4d linear{Eigen::Vector4d::Zero()};
  Eigen::Matrix4d hessian{Eigen::Matrix4d::Zero()};

  double value(const Eigen::Vector4d& x) const {
    return constant + linear.dot(x) + x.dot(hessian * x);
  }
  double value(const WitnessCoefficients& c) const {
    return value(Eigen::Vector4d(c.a_y, c.b_y, c.a_z, c.b_z));
  }
};

// Exact expansion of Var(J_x) + Var(J_y + a_y q + b_y p) + Var(J_z + a_z q + b_z p)
// around the supplied second moments.
QuadraticForm assemble(const MomentTable& m);

// Direct evaluation of the three variances at given coefficients, for pinning the
// assembled form against an independent route through the same moments.
std::array<double, 3> witness_terms(const MomentTable& m, const WitnessCoefficients& c);

// Adds the white-noise covariances: constant += (N^2/4) C_XiXi, the J_y linear entries
// pick up -N C_XiQ and -N C_XiP, and both 2x2 oscillator blocks pick up Q/P covariances.
QuadraticForm with_bath(const QuadraticForm& f, const bathmc::BathCovariances& cov,
                        double n_atoms);

struct MinimizeResult {
  WitnessCoefficients coefficients;  // provenance NumericOptimum
  double w_min{};
};

// Stationary point of the form, solved per 2x2 block with a minimum-norm pseudo-inverse
// on singular blocks. Throws IndefiniteForm if the hessian has a negative eigenvalue
// beyond roundoff scale.
MinimizeResult minimize(const QuadraticForm& f);

// j_min_exp + |a_y b_z - a_z b_y|, the bound any separable state obeys.
double hofmann_bound(const WitnessCoefficients& c, double j_min_exp);

}  // namespace spinosc::quadform
