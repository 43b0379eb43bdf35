// Shot budgets for resolving the witness violation from sampled variances.
#include "spinosc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spinosc/errors.hpp"

namespace spinosc::harness {

namespace {

constexpr long kBudgetCap = 1L << 40;

double split_se(const std::array<oracle::ObservableModel, 3>& models,
                const std::array<long, 3>& alloc) {
  double var = 0.0;
  for (int i = 0; i < 3; ++i) {
    var += variance_of_sample_variance(models[i].variance, models[i].mu4_central,
                                       alloc[i]);
  }
  return std::sqrt(var);
}

std::array<long, 3> equal_split(long n_total) {
  const long per = n_total / 3;
  return {per, per, per};
}

double sample_variance(const std::vector<double>& xs) {
  const long n = static_cast<long>(xs.size());
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= double(n);
  double m2 = 0.0;
  for (double v : xs) m2 += (v - mean) * (v - mean);
  return m2 / double(n - 1);
}

}  // namespace

double variance_of_sample_variance(double var, double mu4, long n) {
  if (n < 2) throw Error("sample variance needs n >= 2");
  return (mu4 - var * var * (double(n) - 3.0) / (double(n) - 1.0)) / double(n);
}

double n_meas_scaling(const witness::WitnessReport& report) {
  if (!report.violated) throw NotViolated("no violation, measurement count undefined");
  return 1.0 / (report.w_ratio * report.w_ratio);
}

SimulatedBudget budget_from_models(const std::array<oracle::ObservableModel, 3>& models,
                                   double w_bound, double confidence_sigmas,
                                   std::uint64_t seed, int repetitions) {
  double w_en = 0.0;
  for (const auto& m : models) w_en += m.variance;
  const double w_diff = w_bound - w_en;
  if (w_diff <= 0.0) throw NotViolated("witness difference is not positive");
  if (confidence_sigmas <= 0.0) throw Error("confidence must be positive sigmas");

  // Smallest total n = 3k, k >= 2 per observable, meeting the margin.
  const auto meets = [&](long per_obs) {
    return w_diff >=
           confidence_sigmas * split_se(models, {per_obs, per_obs, per_obs});
  };
  long k_hi = 2;
  while (k_hi < kBudgetCap && !meets(k_hi)) k_hi *= 2;
  if (!meets(k_hi)) throw Error("shot budget exceeds supported range");
  long k_lo = 2;
  while (k_hi - k_lo > 1) {
    const long mid = k_lo + (k_hi - k_lo) / 2;
    (meets(mid) ? k_hi : k_lo) = mid;
  }
  const long n_required = 3 * (meets(k_lo) ? k_lo : k_hi);

  // Allocation proportional to sqrt(mu4 - var^2) minimizes the total count.
  std::array<double, 3> cost{};
  double sqrt_sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    cost[i] = std::max(0.0, models[i].mu4_central -
                                models[i].variance * models[i].variance);
    sqrt_sum += std::sqrt(cost[i]);
  }
  const double ratio = confidence_sigmas / w_diff;
  long n_opt = static_cast<long>(
      std::ceil(sqrt_sum * sqrt_sum * ratio * ratio));
  std::array<long, 3> alloc_opt{};
  const auto fill_alloc = [&](long n_total) {
    for (int i = 0; i < 3; ++i) {
      const double frac = sqrt_sum > 0.0 ? std::sqrt(cost[i]) / sqrt_sum : 1.0 / 3.0;
      alloc_opt[i] = std::max<long>(2, static_cast<long>(std::llround(frac * n_total)));
    }
  };
  fill_alloc(n_opt);
  while (split_se(models, alloc_opt) * confidence_sigmas > w_diff) {
    n_opt += std::max<long>(1, n_opt / 64);
    fill_alloc(n_opt);
    if (n_opt > kBudgetCap) throw Error("shot budget exceeds supported range");
  }

  SimulatedBudget out;
  out.n_required = n_required;
  out.n_required_optimal = alloc_opt[0] + alloc_opt[1] + alloc_opt[2];
  out.allocation_optimal = alloc_opt;
  out.w_diff = w_diff;
  out.achieved_margin = w_diff / split_se(models, equal_split(n_required));
  out.normal_theory_target =
      0.5 * (1.0 + std::erf(confidence_sigmas / std::sqrt(2.0)));
  out.repetitions = repetitions;

  // Empirical coverage: repeat the full estimate and count runs that stay below the
  // bound when the state violates it.
  const auto alloc = equal_split(n_required);
  int hits = 0;
  std::mt19937_64 mix(seed);
  for (int rep = 0; rep < repetitions; ++rep) {
    double w_hat = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto shots =
          oracle::sample_model(models[i], static_cast<int>(alloc[i]), mix());
      w_hat += sample_variance(shots);
    }
    if (w_hat < w_bound) ++hits;
  }
  out.coverage = repetitions > 0 ? double(hits) / double(repetitions) : 0.0;
  return out;
}

SimulatedBudget n_meas_simulated(const ScenarioConfig& config,
                                 const WitnessCoefficients& coeffs,
                                 double confidence_sigmas, std::uint64_t seed,
                                 int repetitions) {
  if (config.n_atoms > 10.0 + 1e-9) {
    throw OracleScaleExceeded("simulated budgets are limited to 10 atoms");
  }
  if (config.scenario != Scenario::Noiseless &&
      config.scenario != Scenario::ThermalInitial) {
    throw Error("simulated budgets need an exactly solvable scenario");
  }
  oracle::HilbertSpec spec;
  spec.n_atoms = static_cast<int>(std::lround(config.n_atoms));
  const std::array<oracle::ObservableSpec, 3> obs = {
      oracle::ObservableSpec{0, 0.0, 0.0},
      oracle::ObservableSpec{1, coeffs.a_y, coeffs.b_y},
      oracle::ObservableSpec{2, coeffs.a_z, coeffs.b_z},
  };
  std::array<oracle::ObservableModel, 3> models;
  for (int i = 0; i < 3; ++i) models[i] = oracle::observable_model(config, spec, obs[i]);
  const double w_bound =
      config.j_min() + std::abs(coeffs.a_y * coeffs.b_z - coeffs.a_z * coeffs.b_y);
  return budget_from_models(models, w_bound, confidence_sigmas, seed, repetitions);
}

}  // namespace spinosc::harness
