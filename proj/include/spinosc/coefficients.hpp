// The four witness measurement coefficients and their provenance.
#pragma once

namespace spinosc {

enum class Provenance { ClosedFormO1, ClosedFormFull, NumericOptimum };

const char* to_string(Provenance p);

struct WitnessCoefficients {
  double a_y{}, b_y{};  // a's multiply q (carry sqrt(m omega))
  double a_z{}, b_z{};  // b's multiply p (carry 1/sqrt(m omega))
  Provenance provenance{Provenance::ClosedFormO1};
  double cross{};  // a_y b_z - a_z b_y, the commutator term entering the bound
};

inline WitnessCoefficients make_coefficients(double a_y, double b_y, double a_z,
                                             double b_z, Provenance prov) {
  return {a_y, b_y, a_z, b_z, prov, a_y * b_z - a_z * b_y};
}

}  // namespace spinosc
