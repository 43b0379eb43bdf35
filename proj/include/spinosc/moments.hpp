// First and second moments of {J_x, J_y, J_z, q, p} needed to evaluate the witness.
#pragma once

#include "spinosc/config.hpp"

namespace spinosc {

// Mixed second moments are stored as full anticommutators <AB + BA>; diagonal entries
// are plain <A^2>. All entries real.
struct MomentTable {
  // means
  double jx{}, jy{}, jz{};
  double q{}, p{};
  // squares
  double jx2{}, jy2{}, jz2{};
  double q2{}, p2{};
  double qp{};  // <qp + pq>
  // spin-oscillator cross moments, <q J_mu + J_mu q> and <p J_mu + J_mu p>
  double q_jx{}, q_jy{}, q_jz{};
  double p_jx{}, p_jy{}, p_jz{};

  double var_q() const { return q2 - q * q; }
  double var_p() const { return p2 - p * p; }
  double cov_qp() const { return 0.5 * qp - q * p; }
  double var_jx() const { return jx2 - jx * jx; }
  double var_jy() const { return jy2 - jy * jy; }
  double var_jz() const { return jz2 - jz * jz; }
  double cov_q_jy() const { return 0.5 * q_jy - q * jy; }
  double cov_p_jy() const { return 0.5 * p_jy - p * jy; }
  double cov_q_jz() const { return 0.5 * q_jz - q * jz; }
  double cov_p_jz() const { return 0.5 * p_jz - p * jz; }
};

// Order-lambda^2 closed-form table for the Noiseless and ThermalInitial scenarios
// (K = 2 nbar + 1; noiseless is K = 1). The entries satisfy the exact sum rule
// sum <J_mu^2> = (N/2)(N/2 + 1).
MomentTable analytic_moments(const ScenarioConfig& config);

}  // namespace spinosc
