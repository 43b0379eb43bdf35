// Random separable spin (x) oscillator states with exact moment tables, for probing
// the separable-state bound.
#pragma once

#include <random>

#include "spinosc/coefficients.hpp"
#include "spinosc/moments.hpp"

namespace spinosc::separable {

struct SeparableState {
  MomentTable table;
  double j{};  // spin length of every mixture component (N/2 here)
};

// Mixture of up to three product states: a random pure state on the symmetric spin
// subspace times a random pure oscillator state (m = omega = 1).
SeparableState sample_state(int n_atoms, int fock_dim, std::mt19937_64& rng);

// W evaluated on the table at the given coefficients (sum of the three variances).
double witness_at(const MomentTable& table, const WitnessCoefficients& coeffs);

}  // namespace spinosc::separable
