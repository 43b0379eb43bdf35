// Exact per-sample moments under random per-atom phase offsets, their average over
// Gaussian draws, and a small brute-force reference on the full 2^N spin space.
#pragma once

#include <cstdint>
#include <vector>

#include "spinosc/config.hpp"
#include "spinosc/moments.hpp"

namespace spinosc::dephasing {

// Exact moments of the evolved state when atom j starts with phase offset alpha_j.
// Atom sums factorize, so the cost is O(N) regardless of Hilbert space size.
MomentTable sample_moments(const ScenarioConfig& config, const std::vector<double>& alpha,
                           bool include_squeezing = true);

struct DephaseAverage {
  MomentTable mean;
  MomentTable std_err;  // entrywise standard error of the mean
  int n_samples{};
};

// Draws alpha_j ~ N(0, sigma^2) i.i.d. per sample and averages sample_moments.
DephaseAverage dephase_average(const ScenarioConfig& config, int n_samples,
                               std::uint64_t seed, bool include_squeezing = true);

// Reference on the full (2^N) x fock_dim space for a fixed offset vector. Intended for
// N <= 5 in tests.
MomentTable brute_force_moments(const ScenarioConfig& config, const std::vector<double>& alpha,
                                int fock_dim, bool include_squeezing = true);

}  // namespace spinosc::dephasing
