// White-noise bath covariances: closed forms and the trajectory Monte Carlo that
// validates them.
#include "spinosc/bathmc.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "spinosc/constants.hpp"
#include "spinosc/errors.hpp"

namespace spinosc::bathmc {

namespace {

double require_q(const ScenarioConfig& c) {
  if (!c.q_factor) {
    throw MissingQualityFactor("bath covariances require q_factor");
  }
  return *c.q_factor;
}

std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Realization {
  double xi{}, q{}, p{};
};

// One force realization integrated to time t on a uniform grid with trapezoidal
// weights. The same forces feed all three accumulated quantities.
Realization integrate_one(const ScenarioConfig& c, int steps_per_period,
                          std::uint64_t stream) {
  const double q_factor = *c.q_factor;
  const double gamma = c.omega / q_factor;
  const double t_end = c.time;
  const double period = 2.0 * constants::pi / c.omega;
  const double dt_target = period / steps_per_period;
  const int n = std::max(1, static_cast<int>(std::lround(t_end / dt_target)));
  const double dt = t_end / n;
  const double qf = std::sqrt(1.0 / (2.0 * c.mass * c.omega));
  const double pf = std::sqrt(c.mass * c.omega / 2.0);
  const double g = c.lambda * c.omega;

  std::mt19937_64 eng(stream);
  std::normal_distribution<double> gauss(0.0, std::sqrt(c.nbar * gamma / dt));
  std::vector<double> f(n + 1);
  for (double& v : f) v = gauss(eng);

  double acc_q = 0.0, acc_p = 0.0, acc_xi = 0.0;
  double cum_cos = 0.0, cum_sin = 0.0;  // cumulative integrals of F cos, F sin
  double prev_cos_term = f[0] * std::cos(0.0);
  double prev_sin_term = f[0] * std::sin(0.0);
  double prev_h = 0.0;  // sin(w t) cum_cos - cos(w t) cum_sin at the previous node
  for (int j = 0; j <= n; ++j) {
    const double t = j * dt;
    const double w = (j == 0 || j == n) ? 0.5 * dt : dt;
    acc_q += w * f[j] * std::sin(c.omega * (t_end - t));
    acc_p += w * f[j] * std::cos(c.omega * (t_end - t));
    const double cos_term = f[j] * std::cos(c.omega * t);
    const double sin_term = f[j] * std::sin(c.omega * t);
    if (j > 0) {
      cum_cos += 0.5 * dt * (prev_cos_term + cos_term);
      cum_sin += 0.5 * dt * (prev_sin_term + sin_term);
    }
    prev_cos_term = cos_term;
    prev_sin_term = sin_term;
    const double h = std::sin(c.omega * t) * cum_cos - std::cos(c.omega * t) * cum_sin;
    if (j > 0) acc_xi += 0.5 * dt * (prev_h + h);
    prev_h = h;
  }
  Realization r;
  r.q = -2.0 * qf * acc_q;
  r.p = -2.0 * pf * acc_p;
  r.xi = 2.0 * g * acc_xi;
  return r;
}

McEstimate average(const std::vector<double>& samples) {
  McEstimate e;
  e.n_real = static_cast<int>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= e.n_real;
  double m2 = 0.0;
  for (double v : samples) m2 += (v - mean) * (v - mean);
  e.mean = mean;
  e.std_err = e.n_real > 1 ? std::sqrt(m2 / (e.n_real - 1.0) / e.n_real) : 0.0;
  return e;
}

}  // namespace

double covariance_closed_form(Cov which, const ScenarioConfig& c) {
  const double q_factor = require_q(c);
  const double rho = c.nbar / q_factor;
  const double x = c.x();
  const double s = std::sin(x);
  const double s2x = std::sin(2.0 * x);
  const double qf = std::sqrt(1.0 / (2.0 * c.mass * c.omega));
  const double pf = std::sqrt(c.mass * c.omega / 2.0);
  const double lam = c.lambda;
  const double sh = std::sin(0.5 * x);
  switch (which) {
    case Cov::XiXi:
      return lam * lam * rho * (6.0 * x - 8.0 * s + s2x);
    case Cov::XiQ:
      return -qf * 8.0 * lam * rho * sh * sh * sh * sh;
    case Cov::XiP:
      return pf * 4.0 * lam * rho * (0.5 * x - s + 0.25 * s2x);
    case Cov::QQ:
      return qf * qf * rho * (2.0 * x - s2x);
    case Cov::PP:
      return pf * pf * rho * (2.0 * x + s2x);
    case Cov::QP:
      return rho * s * s;
  }
  throw Error("unhandled covariance");
}

BathCovariances covariances_closed_form(const ScenarioConfig& c) {
  return {covariance_closed_form(Cov::XiXi, c), covariance_closed_form(Cov::XiQ, c),
          covariance_closed_form(Cov::XiP, c), covariance_closed_form(Cov::QQ, c),
          covariance_closed_form(Cov::PP, c),  covariance_closed_form(Cov::QP, c)};
}

McEstimate covariance_monte_carlo(Cov which, const ScenarioConfig& c, int n_real,
                                  std::uint64_t seed, int steps_per_period) {
  require_q(c);
  std::vector<double> samples(n_real);
  for (int r = 0; r < n_real; ++r) {
    const Realization z = integrate_one(c, steps_per_period, mix_stream(seed, r));
    switch (which) {
      case Cov::XiXi: samples[r] = z.xi * z.xi; break;
      case Cov::XiQ: samples[r] = z.xi * z.q; break;
      case Cov::XiP: samples[r] = z.xi * z.p; break;
      case Cov::QQ: samples[r] = z.q * z.q; break;
      case Cov::PP: samples[r] = z.p * z.p; break;
      case Cov::QP: samples[r] = z.q * z.p; break;
    }
  }
  return average(samples);
}

McEstimate delta_w_monte_carlo(const ScenarioConfig& c, const WitnessCoefficients& coeffs,
                               int n_real, std::uint64_t seed, int steps_per_period) {
  require_q(c);
  const double n_atoms = c.n_atoms;
  std::vector<double> samples(n_real);
  for (int r = 0; r < n_real; ++r) {
    const Realization z = integrate_one(c, steps_per_period, mix_stream(seed, r));
    const BathCovariances one{z.xi * z.xi, z.xi * z.q, z.xi * z.p,
                              z.q * z.q,   z.p * z.p,  z.q * z.p};
    samples[r] = delta_w_from_covariances(one, coeffs, n_atoms);
  }
  return average(samples);
}

DeltaWTerms delta_w_terms(const BathCovariances& cov, const WitnessCoefficients& c,
                          double n) {
  DeltaWTerms t;
  t.term_x = 0.25 * n * cov.xixi;
  t.term_y = 0.25 * (n * n - n) * cov.xixi - n * c.a_y * cov.xiq - n * c.b_y * cov.xip +
             c.a_y * c.a_y * cov.qq + c.b_y * c.b_y * cov.pp +
             2.0 * c.a_y * c.b_y * cov.qp;
  t.term_z = c.a_z * c.a_z * cov.qq + c.b_z * c.b_z * cov.pp +
             2.0 * c.a_z * c.b_z * cov.qp;
  return t;
}

double delta_w_from_covariances(const BathCovariances& cov, const WitnessCoefficients& c,
                                double n_atoms) {
  return delta_w_terms(cov, c, n_atoms).total();
}

}  // namespace spinosc::bathmc
