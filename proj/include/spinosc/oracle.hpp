// Exact dynamics of N spins coupled to a truncated oscillator, restricted to the
// symmetric spin subspace, with moment extraction and projective sampling.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spinosc/config.hpp"
#include "spinosc/moments.hpp"

namespace spinosc::oracle {

struct HilbertSpec {
  int n_atoms{2};
  int fock_dim{0};  // 0 picks a size from the displacement tail bound, then verifies
  double tail_tol{1e-12};
};

struct EvolvedState {
  int n_atoms{};
  int fock_dim{};
  double mass{1.0};
  double omega{1.0};
  bool include_squeezing{true};
  // Column k holds the oscillator block paired with the J_z eigenvalue m = k - N/2,
  // including the binomial spin amplitude of the initial +x polarized state.
  Eigen::MatrixXcd sectors;
  double tail{};  // norm^2 lost to truncation
};

// Evolves (+x polarized) x |initial_fock> for config.time. Each J_z sector evolves by a
// quadratic phase, a rotating-frame phase, and a displacement; include_squeezing keeps
// the exact quadratic sector phase exp(+i lambda^2 m^2 omega t).
EvolvedState evolve(const ScenarioConfig& config, HilbertSpec spec,
                    bool include_squeezing = true, int initial_fock = 0);

// Same state through per-sector dense eigendecomposition of n + lambda m (c + c^dag),
// used to cross-check the displaced-frame propagator.
EvolvedState evolve_dense(const ScenarioConfig& config, HilbertSpec spec,
                          int initial_fock = 0);

double state_overlap(const EvolvedState& a, const EvolvedState& b);

// All first and second moments of the evolved pure state. Symmetrized products use the
// full anticommutator convention of MomentTable.
MomentTable moments(const EvolvedState& state);

// Thermal initial oscillator: geometric mixture over initial Fock states, truncated at
// cumulative weight 1 - 1e-12 and renormalized.
MomentTable thermal_moments(const ScenarioConfig& config, HilbertSpec spec,
                            bool include_squeezing = true);

struct ObservableSpec {
  int axis{0};  // 0, 1, 2 for J_x, J_y, J_z
  double a{0.0};
  double b{0.0};  // O = J_axis + a q + b p
};

struct ObservableModel {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd probabilities;
  double mean{};
  double variance{};
  double mu4_central{};
};

// Spectral model of O measured on the evolved state (Noiseless or ThermalInitial).
ObservableModel observable_model(const ScenarioConfig& config, HilbertSpec spec,
                                 const ObservableSpec& obs);
ObservableModel observable_model(const EvolvedState& state, const ObservableSpec& obs);

// Projective measurement outcomes drawn from the spectral model.
std::vector<double> sample_observable(const EvolvedState& state, const ObservableSpec& obs,
                                      int n_shots, std::uint64_t seed);
std::vector<double> sample_model(const ObservableModel& model, int n_shots,
                                 std::uint64_t seed);

// Internal building blocks exposed for tests.
Eigen::MatrixXcd spin_matrix(int n_atoms, int axis);          // (N+1)^2 collective spin
Eigen::VectorXcd displaced_fock_column(std::complex<double> d, int initial_fock,
                                       int fock_dim);         // D(d)|n0> amplitudes
int default_fock_dim(const ScenarioConfig& config, int initial_fock);

}  // namespace spinosc::oracle
