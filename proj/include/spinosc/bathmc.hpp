// White-noise bath covariances: closed forms, trajectory Monte Carlo, and the
// witness correction they assemble into.
#pragma once

#include <cstdint>

#include "spinosc/coefficients.hpp"
#include "spinosc/config.hpp"

namespace spinosc::bathmc {

enum class Cov { XiXi, XiQ, XiP, QQ, PP, QP };

struct BathCovariances {
  double xixi{};
  double xiq{};
  double xip{};
  double qq{};
  double pp{};
  double qp{};
};

// Closed-form symmetrized covariance at time config.time. Requires q_factor.
double covariance_closed_form(Cov which, const ScenarioConfig& config);
BathCovariances covariances_closed_form(const ScenarioConfig& config);

struct McEstimate {
  double mean{};
  double std_err{};
  int n_real{};
};

// Integrates force realizations on a uniform grid with roughly steps_per_period steps
// per oscillator period and trapezoidal weights. Streams are derived from
// (seed, realization index), so estimates do not depend on evaluation order.
McEstimate covariance_monte_carlo(Cov which, const ScenarioConfig& config, int n_real,
                                  std::uint64_t seed, int steps_per_period = 400);

// Single-realization witness correction averaged over realizations; same force
// realizations feed all covariance combinations.
McEstimate delta_w_monte_carlo(const ScenarioConfig& config, const WitnessCoefficients& coeffs,
                               int n_real, std::uint64_t seed, int steps_per_period = 400);

// (N^2/4) C_XiXi - N a_y C_XiQ - N b_y C_XiP + (a_y^2 + a_z^2) C_QQ
// + (b_y^2 + b_z^2) C_PP + 2 (a_y b_y + a_z b_z) C_QP.
double delta_w_from_covariances(const BathCovariances& cov, const WitnessCoefficients& coeffs,
                                double n_atoms);

// Per-witness-term split of the same correction: the J_x, J_y, J_z term contributions.
struct DeltaWTerms {
  double term_x{};
  double term_y{};
  double term_z{};
  double total() const { return term_x + term_y + term_z; }
};
DeltaWTerms delta_w_terms(const BathCovariances& cov, const WitnessCoefficients& coeffs,
                          double n_atoms);

}  // namespace spinosc::bathmc
