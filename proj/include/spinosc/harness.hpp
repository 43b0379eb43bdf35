// Measurement budgeting: how many projective measurements resolve the violation.
#pragma once

#include <array>
#include <cstdint>

#include "spinosc/config.hpp"
#include "spinosc/oracle.hpp"
#include "spinosc/witness.hpp"

namespace spinosc::harness {

// w_ratio^-2 from a closed-form report. Throws NotViolated when w_diff <= 0.
double n_meas_scaling(const witness::WitnessReport& report);

struct SimulatedBudget {
  long n_required{};          // total shots under an equal three-way split
  long n_required_optimal{};  // total shots when allocation follows sqrt(mu4 - var^2)
  std::array<long, 3> allocation_optimal{};
  double achieved_margin{};   // w_diff / SE(W_en hat) at n_required
  double w_diff{};
  double coverage{};          // fraction of repetitions with W_en hat < w_bound
  double normal_theory_target{};
  int repetitions{};
};

// Budget from exact per-observable spectral models (variance and central fourth
// moment), with sampling repetitions to report empirical coverage.
SimulatedBudget budget_from_models(const std::array<oracle::ObservableModel, 3>& models,
                                   double w_bound, double confidence_sigmas,
                                   std::uint64_t seed, int repetitions = 200);

// Builds the three witness observables for the configuration at the given coefficients
// and delegates to budget_from_models. Throws OracleScaleExceeded for N > 10 and
// NotViolated when the exact w_diff is not positive.
SimulatedBudget n_meas_simulated(const ScenarioConfig& config,
                                 const WitnessCoefficients& coeffs,
                                 double confidence_sigmas, std::uint64_t seed,
                                 int repetitions = 200);

// Unbiased sample-variance estimator variance: (mu4 - var^2 (n-3)/(n-1)) / n.
double variance_of_sample_variance(double var, double mu4, long n);

}  // namespace spinosc::harness
