// Closed-form witness coefficients, bounds, entangled-state values, and noise corrections.
#pragma once

#include <array>
#include <optional>

#include "spinosc/coefficients.hpp"
#include "spinosc/config.hpp"
#include "spinosc/moments.hpp"

namespace spinosc::witness {

enum class CoefficientOrder { FirstOrder, Full };

// Coefficient set used inside witness_value: the closed forms appropriate to the
// scenario, or the numeric re-optimization from the quadratic form (bath scenarios).
enum class CoefficientChoice { Default, NumericOptimum };

struct WitnessReport {
  double w_bound{};
  double w_en{};
  double w_diff{};   // w_bound - w_en
  double w_ratio{};  // w_diff / w_bound
  bool violated{};
  std::optional<double> n_meas_estimate{};  // w_ratio^-2 when violated
  WitnessCoefficients coefficients{};
  std::array<double, 3> per_term{};  // Var(J_x), Var(J_y + ...), Var(J_z + ...)
};

// Noiseless coefficients; the non-simplified forms are the default, the O(lambda)
// forms (which satisfy a_y b_y + a_z b_z = 0 exactly) on request.
WitnessCoefficients coefficients_noiseless(const ScenarioConfig& config,
                                           CoefficientOrder order = CoefficientOrder::Full);

// Thermal-start coefficients: a_y, b_y equal the O(lambda) noiseless forms, a_z, b_z
// divided by 2 nbar + 1.
WitnessCoefficients coefficients_thermal(const ScenarioConfig& config);

// Dephasing re-optimized coefficients at O(sigma^2) on top of the O(lambda) forms.
WitnessCoefficients coefficients_dephasing_optimized(const ScenarioConfig& config);

// j_min_exp + |a_y b_z - a_z b_y|.
double witness_bound(const WitnessCoefficients& coeffs, double j_min_exp);

// Scenario-dispatched closed-form report. Bath scenarios require q_factor.
WitnessReport witness_value(const ScenarioConfig& config,
                            CoefficientChoice choice = CoefficientChoice::Default);

// The six-covariance white-noise correction added to W_en, evaluated at the supplied
// coefficients. Requires q_factor.
double bath_correction(const ScenarioConfig& config, const WitnessCoefficients& coeffs);

// Minimum Q/nbar for violation. ThermalInitialPlusBath is defined at omega t = pi only
// (UnsupportedTime otherwise); GroundPlusBath accepts general omega t.
double violation_threshold(const ScenarioConfig& config);

struct DephasingReport {
  WitnessReport with_noiseless_coefficients;
  WitnessReport with_optimized_coefficients;
  double lambda_max{};
  // The optimized coefficients shrink the bound as much as the cross term, so the
  // noiseless-coefficient variant keeps the larger violation and is preferred.
  bool noiseless_preferred{true};
};
DephasingReport dephasing_report(const ScenarioConfig& config);

// Sum of the three spin variances, N/2 + (lambda^2 N^2/2)(1 - cos wt) with dephasing
// factors when sigma^2 > 0.
double spin_variance_sum(const ScenarioConfig& config);

// Companion identity W_en - sum Var(J_mu) = -lambda^2 N^2 (1 - cos wt) (1 - sigma^2/2).
double witness_minus_spin_variances(const ScenarioConfig& config);

}  // namespace spinosc::witness
